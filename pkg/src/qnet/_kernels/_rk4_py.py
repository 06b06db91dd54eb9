"""Pure-numpy fallback for the fixed-step RK4 relaxation kernel."""
import numpy as np


def rk4_fixed_point(a, forcing, dt, max_steps, tol):
    """Integrate dy/dt = a @ y + forcing from y = 0 until the derivative
    norm drops to `tol` or `max_steps` is exhausted.

    Returns (y, steps_taken, residual_norm) where residual_norm is the
    derivative norm at the returned point.
    """
    a = np.asarray(a, dtype=np.complex128)
    forcing = np.asarray(forcing, dtype=np.complex128)
    y = np.zeros(a.shape[0], dtype=np.complex128)
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(max_steps):
        k1 = a @ y + forcing
        res = np.linalg.norm(k1)
        if res <= tol:
            return y, step, float(res)
        k2 = a @ (y + half * k1) + forcing
        k3 = a @ (y + half * k2) + forcing
        k4 = a @ (y + dt * k3) + forcing
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
    res = np.linalg.norm(a @ y + forcing)
    return y, max_steps, float(res)
