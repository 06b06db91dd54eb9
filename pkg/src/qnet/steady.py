"""Steady-state solver for the rotating-frame amplitude equations, the
network spectral density, and an independent time-domain relaxation oracle.

In the frame rotating at the drive frequency the mean amplitudes obey

    d a/dt = (H_eff + H_load) a - i W,

where H_eff has entries i(delta_nm * omega_d - w_nm) - delta_nm * gamma_n/2
(w_nn the node frequency, w_nm the coupling for n != m), H_load is diagonal
with i*delta_omega - gamma_load/2 at the load node, and W is the one-hot
drive vector. The steady state solves (H_eff + H_load) a = i W.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceFailure, SingularNetwork, ValidationError
from .network import NetworkSpec, require_valid

__all__ = [
    "EffectiveMatrix",
    "SteadyState",
    "effective_matrix",
    "drive_vector",
    "solve_amplitudes",
    "spectral_density",
    "spectral_density_grid",
    "spectral_density_sweep",
    "time_domain_steady_state",
]

# Above this condition estimate the linear system is treated as singular.
COND_LIMIT = 1e12
# Steady-state residual contract, relative to the drive vector norm.
RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class EffectiveMatrix:
    """Non-Hermitian steady-state matrix split into the bare network part
    (h_tilde) and the diagonal load part (h_load)."""

    h_tilde: np.ndarray
    h_load: np.ndarray
    omega_d: float

    def __post_init__(self):
        for name in ("h_tilde", "h_load"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def total(self) -> np.ndarray:
        return self.h_tilde + self.h_load


@dataclass(frozen=True, eq=False)
class SteadyState:
    """Rotating-frame mean amplitudes of a driven network."""

    amplitudes: np.ndarray
    spec: NetworkSpec

    def __post_init__(self):
        arr = np.array(self.amplitudes, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)


def _frequency_matrix(spec: NetworkSpec) -> np.ndarray:
    """Real symmetric matrix with node frequencies on the diagonal and
    couplings off it."""
    w = np.array(spec.couplings, dtype=float)
    np.fill_diagonal(w, spec.node_frequencies)
    return w


def effective_matrix(spec: NetworkSpec) -> EffectiveMatrix:
    """Build the steady-state matrix pair for a validated spec."""
    require_valid(spec)
    n = spec.n_nodes
    omega_d = float(spec.drive.omega_d)
    h_tilde = 1j * (omega_d * np.eye(n) - _frequency_matrix(spec))
    h_tilde -= np.diag(spec.intrinsic_decays) / 2.0
    h_load = np.zeros((n, n), dtype=complex)
    h_load[spec.load.node, spec.load.node] = (
        1j * spec.load.delta_omega - spec.load.gamma_load / 2.0
    )
    return EffectiveMatrix(h_tilde=h_tilde, h_load=h_load, omega_d=omega_d)


def drive_vector(spec: NetworkSpec) -> np.ndarray:
    """One-hot complex drive vector."""
    omega = np.zeros(spec.n_nodes, dtype=complex)
    omega[spec.drive.node] = spec.drive.rabi
    return omega


def solve_amplitudes(spec: NetworkSpec) -> SteadyState:
    """Direct solve of the steady-state equations.

    Raises SingularNetwork when the matrix is singular or its condition
    estimate exceeds COND_LIMIT (physically, driving a lossless dark mode
    exactly on resonance), or when the residual contract cannot be met.
    """
    em = effective_matrix(spec)
    matrix = em.total
    rhs = 1j * drive_vector(spec)

    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularNetwork(f"condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}")
    try:
        amps = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularNetwork(str(exc)) from None

    scale = np.linalg.norm(rhs)
    residual = np.linalg.norm(matrix @ amps - rhs)
    if residual > RESIDUAL_RTOL * scale:
        # one step of iterative refinement, then give up
        amps = amps + np.linalg.solve(matrix, rhs - matrix @ amps)
        residual = np.linalg.norm(matrix @ amps - rhs)
        if residual > RESIDUAL_RTOL * scale:
            raise SingularNetwork(
                f"residual {residual:.3e} exceeds {RESIDUAL_RTOL:.0e} * |rhs|"
            )
    return SteadyState(amplitudes=amps, spec=spec)


def spectral_density(spec: NetworkSpec, omega: float) -> float:
    """Mode-structure diagnostic of the undriven, unloaded network.

    S(omega) = -Im tr (omega*I - M)^(-1) with M = W - i*diag(gamma)/2.
    Nonnegative for strictly lossy networks; a sum of Lorentzian peaks at
    the network eigenfrequencies.
    """
    require_valid(spec)
    m = _frequency_matrix(spec) - 0.5j * np.diag(spec.intrinsic_decays)
    a = omega * np.eye(spec.n_nodes) - m
    try:
        value = -np.imag(np.trace(np.linalg.inv(a)))
    except np.linalg.LinAlgError as exc:
        raise SingularNetwork(str(exc)) from None
    if not np.isfinite(value):
        raise SingularNetwork(f"resolvent diverges at omega = {omega!r}")
    return float(value)


def _thread_count() -> int:
    env = os.environ.get("QNET_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, items):
    threads = _thread_count()
    if threads <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def spectral_density_grid(spec, grid) -> np.ndarray:
    """Spectral density at each frequency of an arbitrary grid.

    Exactly singular points come back as nan gap values instead of raising.
    Points are evaluated concurrently (QNET_THREADS caps the pool) and
    assembled in grid order, so the output is deterministic.
    """
    require_valid(spec)

    def one(omega):
        try:
            return spectral_density(spec, float(omega))
        except SingularNetwork:
            return float("nan")

    return np.asarray(_map_ordered(one, list(grid)))


def spectral_density_sweep(spec, omega_min, omega_max, n_points) -> np.ndarray:
    """Evaluate the spectral density on a uniform inclusive grid.

    Returns an (n_points, 2) array of (omega, S) rows. Grid points where
    the resolvent is exactly singular come back as (omega, nan) gap rows.
    """
    if not omega_min < omega_max:
        raise ValidationError(f"need omega_min < omega_max, got [{omega_min}, {omega_max}]")
    if n_points < 2:
        raise ValidationError(f"need n_points >= 2, got {n_points}")
    grid = np.linspace(omega_min, omega_max, int(n_points))
    return np.column_stack([grid, spectral_density_grid(spec, grid)])


def time_domain_steady_state(spec, t_final=None, dt=None) -> SteadyState:
    """Independent relaxation oracle for the direct solve.

    Integrates d a/dt = (H_eff + H_load) a - i W from a(0) = 0 with a
    fixed-step fourth-order Runge-Kutta scheme until the derivative norm
    falls to 1e-10 * |W| or t_final is reached. Defaults: dt resolves the
    fastest scale (0.1 / max |eigenvalue|) and t_final budgets several
    lifetimes of the slowest mode; the eigenvalues are used only to size
    the budget, never to form the answer.

    Raises ConvergenceFailure when the residual target is not met by
    t_final, and ValidationError for a network with a non-decaying mode.
    """
    em = effective_matrix(spec)
    matrix = em.total
    omega = drive_vector(spec)
    forcing = -1j * omega
    tol = RESIDUAL_RTOL * float(np.linalg.norm(omega))

    if dt is None or t_final is None:
        eigs = np.linalg.eigvals(matrix)
        if dt is None:
            dt = 0.1 / float(np.abs(eigs).max())
        if t_final is None:
            alpha = float(eigs.real.max())
            if alpha >= 0.0:
                raise ValidationError(
                    f"network has a non-decaying mode (max Re eigenvalue {alpha:.3e}); "
                    "the relaxation oracle requires a decaying system"
                )
            t_final = 60.0 / abs(alpha)
    if dt <= 0 or t_final <= 0:
        raise ValidationError(f"dt and t_final must be positive, got {dt}, {t_final}")
    max_steps = int(math.ceil(t_final / dt))
    if max_steps > 200_000_000:
        raise ValidationError(
            f"integration budget of {max_steps} steps is unreasonable; "
            "check decay rates or pass explicit t_final/dt"
        )

    amps, _steps, residual = _kernels.rk4_fixed_point(
        np.asfortranarray(matrix), forcing, float(dt), max_steps, tol
    )
    if residual > tol:
        raise ConvergenceFailure(residual)
    return SteadyState(amplitudes=amps, spec=spec)
