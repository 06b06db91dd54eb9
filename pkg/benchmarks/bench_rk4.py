#!/usr/bin/env python3
"""Compare the compiled and pure-python relaxation kernels.

Runs the fixed-step RK4 integrator to steady state on a few representative
networks through every available backend and prints timing plus the
relative deviation from the direct linear solve.

    python benchmarks/bench_rk4.py
"""
import time

import numpy as np

from qnet import DriveSpec, LoadSpec, build_chain, build_random_all_to_all, solve_amplitudes
from qnet._kernels import available_backends
from qnet.steady import drive_vector, effective_matrix


def cases():
    drive = lambda w: DriveSpec(node=0, omega_d=w, rabi=0.1)
    yield "chain  N=10", build_chain(
        10, 1000.0, 2.5, 1.0, drive(1001.0), LoadSpec(node=9, gamma_load=2.0)
    )
    yield "random N=10", build_random_all_to_all(
        10, 1000.0, 2.5, 1.0, 1.0, 11, drive(1001.0), LoadSpec(node=9, gamma_load=2.0)
    )
    yield "chain  N=50", build_chain(
        50, 1000.0, 2.5, 1.0, drive(1001.0), LoadSpec(node=49, gamma_load=2.0)
    )
    yield "random N=50", build_random_all_to_all(
        50, 1000.0, 2.5, 1.0, 1.0, 12, drive(1001.0), LoadSpec(node=49, gamma_load=2.0)
    )


def main():
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'case':<12} " + "".join(f"{name:>16} " for name in backends) + f"{'speedup':>9}  steps"
    print(header)
    print("-" * len(header))
    for label, spec in cases():
        em = effective_matrix(spec)
        matrix = np.asfortranarray(em.total)
        forcing = -1j * drive_vector(spec)
        eigs = np.linalg.eigvals(em.total)
        dt = 0.1 / float(np.abs(eigs).max())
        max_steps = int(np.ceil(60.0 / abs(eigs.real.max()) / dt))
        tol = 1e-10 * abs(spec.drive.rabi)
        reference = solve_amplitudes(spec).amplitudes

        times = {}
        steps_taken = None
        for name, kernel in backends.items():
            best = float("inf")
            for _ in range(3):
                t0 = time.perf_counter()
                y, steps, _res = kernel(matrix, forcing, dt, max_steps, tol)
                best = min(best, time.perf_counter() - t0)
            rel = np.linalg.norm(y - reference) / np.linalg.norm(reference)
            assert rel < 1e-8, f"{name} deviates from the linear solve: {rel:.3e}"
            times[name] = best
            steps_taken = steps
        row = f"{label:<12} " + "".join(f"{times[name] * 1e3:>13.1f} ms " for name in backends)
        if "compiled" in times and "python" in times:
            row += f"{times['python'] / times['compiled']:>8.1f}x"
        print(f"{row}  {steps_taken}")


if __name__ == "__main__":
    main()
