"""Evaluate the four concurrence estimators over a ``gt`` grid."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .concurrence import concurrence_values
from .fock import FieldSpec, JointState, build_fock_state, build_initial_state, check_norm_loss, rabi_factors
from .series import approx_concurrence, xseries_concurrence

MODES = ("full", "fock", "xseries", "approx")


def default_dt(field: FieldSpec) -> float:
    """``tau / 20`` with ``tau = pi / (2 sqrt(max(nbar, 1)))``."""
    return math.pi / (2.0 * math.sqrt(max(field.nbar, 1.0))) / 20.0


def make_grid(t_max: float, dt: float) -> np.ndarray:
    n = int(math.floor(t_max / dt + 1e-9))
    return np.arange(n + 1, dtype=float) * dt


def _chunks(n: int, workers: int):
    size = max(64, -(-n // (4 * workers)))
    return [(k, min(k + size, n)) for k in range(0, n, size)]


def _density_chunk(amps, cutoff, gts):
    rhos = np.empty((gts.size, 4, 4), dtype=np.complex128)
    for k, gt in enumerate(gts):
        own, partner = rabi_factors(gt, cutoff)
        rhos[k] = kernels.evolved_density(amps, own, partner)
    return rhos


def densities(state0: JointState, gts: np.ndarray, workers: int = 1) -> np.ndarray:
    """Reduced qubit density at every ``gt``, each evolved from ``state0``.

    Grid points are independent, so they are fanned out over a thread pool
    (the kernels release the GIL) and reassembled in grid order.
    """
    gts = np.asarray(gts, dtype=float)
    amps = np.ascontiguousarray(state0.amplitudes)
    parts = _chunks(gts.size, workers)
    if workers <= 1 or len(parts) == 1:
        out = [_density_chunk(amps, state0.cutoff, gts[a:b]) for a, b in parts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda ab: _density_chunk(amps, state0.cutoff, gts[ab[0]:ab[1]]), parts))
    return np.concatenate(out) if out else np.empty((0, 4, 4), dtype=np.complex128)


@dataclass
class ModeResult:
    mode: str
    values: np.ndarray
    norm_loss: float = 0.0


def numeric_concurrence(state0: JointState, gts, workers: int = 1) -> ModeResult:
    rhos = densities(state0, gts, workers)
    norm0 = float(np.sum(np.abs(state0.amplitudes) ** 2))
    traces = np.trace(rhos, axis1=1, axis2=2).real
    loss = float(max(np.max(norm0 - traces, initial=0.0), 0.0))
    check_norm_loss(loss, state0.cutoff)
    return ModeResult(state0.label, concurrence_values(rhos), loss)


def run_mode(mode: str, field: FieldSpec, gts, workers: int = 1) -> ModeResult:
    if mode == "full":
        res = numeric_concurrence(build_initial_state(field), gts, workers)
    elif mode == "fock":
        res = numeric_concurrence(build_fock_state(field), gts, workers)
    elif mode == "xseries":
        res = ModeResult(mode, xseries_concurrence(gts, field))
    elif mode == "approx":
        res = ModeResult(mode, approx_concurrence(gts, field))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    res.mode = mode
    return res


def available_workers() -> int:
    try:
        return max(len(os.sched_getaffinity(0)), 1)
    except AttributeError:  # pragma: no cover
        return max(os.cpu_count() or 1, 1)
