"""Compare the numba kernels with their pure-numpy fallbacks.

Usage::

    python3 benchmarks/bench_kernels.py [--alpha 10] [--repeat 5]

Each kernel is called once per backend to warm up (JIT compilation is not
timed), then timed as the best of ``--repeat`` runs.
"""
import argparse
import time

import numpy as np

from remotejc import _accel, kernels
from remotejc.fock import FieldSpec, build_initial_state, rabi_factors
from remotejc.series import _tables


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(alpha):
    field = FieldSpec(alpha)
    amps = np.ascontiguousarray(build_initial_state(field).amplitudes)
    own, partner = rabi_factors(1.234, field.cutoff)
    rng = np.random.default_rng(0)
    x = rng.normal(size=(2000, 4, 4)) + 1j * rng.normal(size=(2000, 4, 4))
    rhos = x @ np.conj(np.transpose(x, (0, 2, 1)))
    rhos /= np.trace(rhos, axis1=1, axis2=2).real[:, None, None]
    amp, root = _tables(field)
    gts = np.linspace(0.0, 140.0, 2000)
    return {
        "evolve_amplitudes (1 step)": lambda: kernels.evolve_amplitudes(amps, own, partner),
        "evolved_density (1 step)": lambda: kernels.evolved_density(amps, own, partner),
        "qubit_density (1 state)": lambda: kernels.qubit_density(amps),
        "concurrence_batch (2000 rho)": lambda: kernels.concurrence_batch(rhos),
        "series_block (2000 gt)": lambda: kernels.series_block(gts, amp, root, field.nbar),
    }, field.cutoff


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--alpha", type=float, default=10.0)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    table, cutoff = cases(args.alpha)
    print(f"alpha = {args.alpha:g}, cutoff = {cutoff}, best of {args.repeat}")
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    saved = _accel.USE_NUMBA
    try:
        for name, fn in table.items():
            result = {}
            for use in (True, False):
                _accel.USE_NUMBA = use
                result[use] = best_of(fn, args.repeat)
            print(f"{name:32s} {1e3 * result[True]:12.3f} {1e3 * result[False]:12.3f} {result[False] / result[True]:8.1f}x")
    finally:
        _accel.USE_NUMBA = saved


if __name__ == "__main__":
    main()
