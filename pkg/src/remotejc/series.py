"""Coherent-state series for the X-state elements ``z``, ``a``, ``d``.

Every double sum over photon numbers ``n, m`` splits into products of
single sums, so each time point costs O(cutoff).  ``series_reference``
keeps the literal O(cutoff^2) double sums for regression checks.

Conventions: ``A_k = 0`` for ``k < 0``, ``C_k = cos(gt sqrt(k))``,
``S_k = sin(gt sqrt(k))``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .fock import FieldSpec, poisson_amplitude

#: below this mean photon number the envelope approximation is unreliable
APPROX_NBAR_MIN = 25.0


@dataclass(frozen=True)
class SeriesTerms:
    gt: float
    z: complex
    a: float
    d: float

    @property
    def lam(self) -> float:
        """``|z| - sqrt(a d)``."""
        return abs(self.z) - math.sqrt(max(self.a * self.d, 0.0))

    @property
    def concurrence(self) -> float:
        return 2.0 * max(0.0, self.lam)


def _tables(field: FieldSpec):
    n = field.cutoff
    amp = np.zeros(n + 5)
    amp[2:] = poisson_amplitude(np.arange(0, n + 3), field.alpha)
    root = np.zeros(n + 6)
    root[2:] = np.sqrt(np.arange(0, n + 4, dtype=float))
    return amp, root


def series_table(gt, field: FieldSpec) -> np.ndarray:
    """Columns ``z, a, d, approx_lambda`` for each ``gt`` (array input)."""
    gts = np.atleast_1d(np.asarray(gt, dtype=float))
    amp, root = _tables(field)
    return kernels.series_block(gts, amp, root, field.nbar)


def series_z(gt: float, field: FieldSpec) -> complex:
    return complex(series_table(gt, field)[0, 0])


def series_a(gt: float, field: FieldSpec) -> float:
    return float(series_table(gt, field)[0, 1])


def series_d(gt: float, field: FieldSpec) -> float:
    return float(series_table(gt, field)[0, 2])


def series_terms(gt: float, field: FieldSpec) -> SeriesTerms:
    z, a, d, _ = series_table(gt, field)[0]
    return SeriesTerms(float(gt), complex(z), float(a), float(d))


def approx_lambda(gt, field: FieldSpec):
    """Large-``nbar`` approximation to ``|z| - sqrt(a d)``.

    ``1/4 (exp(-gt^2 / (8 nbar^2)) - 1) + 1/2 Sc^2 - 1/2 Ss^2`` with
    ``Sc, Ss = sum_n A_n^2 cos/sin(2 gt sqrt(n))``.  Returns a float for
    scalar ``gt``.
    """
    if field.nbar < APPROX_NBAR_MIN:
        warnings.warn(
            f"approx_lambda assumes nbar >> 1; got nbar = {field.nbar:g}",
            RuntimeWarning,
            stacklevel=2,
        )
    out = series_table(gt, field)[:, 3]
    return float(out[0]) if np.ndim(gt) == 0 else out


def xseries_concurrence(gts, field: FieldSpec) -> np.ndarray:
    tab = series_table(gts, field)
    lam = np.abs(tab[:, 0]) - np.sqrt(np.clip(tab[:, 1] * tab[:, 2], 0.0, None))
    return 2.0 * np.clip(lam, 0.0, None)


def approx_concurrence(gts, field: FieldSpec) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lam = approx_lambda(np.atleast_1d(gts), field)
    return 2.0 * np.clip(lam, 0.0, None)


def inversion_sum(gts, field: FieldSpec) -> np.ndarray:
    """``sum_n A_n^2 cos(2 gt sqrt(n))``, the single-sum inversion-type signal."""
    gts = np.atleast_1d(np.asarray(gts, dtype=float))
    w = poisson_amplitude(np.arange(field.cutoff + 1), field.alpha) ** 2
    root = np.sqrt(np.arange(field.cutoff + 1, dtype=float))
    return np.array([np.dot(w, np.cos(2.0 * g * root)) for g in gts])


def entanglement_square_sum(gts, field: FieldSpec) -> np.ndarray:
    """``(sum A_n^2 cos 2gt sqrt n)^2 - (sum A_n^2 sin 2gt sqrt n)^2``."""
    gts = np.atleast_1d(np.asarray(gts, dtype=float))
    w = poisson_amplitude(np.arange(field.cutoff + 1), field.alpha) ** 2
    root = np.sqrt(np.arange(field.cutoff + 1, dtype=float))
    ph = 2.0 * np.outer(gts, root)
    c = np.cos(ph) @ w
    s = np.sin(ph) @ w
    return c * c - s * s


def series_reference(gt: float, field: FieldSpec):
    """Literal double sums over ``n, m`` in ``[0, cutoff]``; returns ``(z, a, d)``."""
    n = np.arange(field.cutoff + 1)

    def A(k):
        return poisson_amplitude(k, field.alpha)

    def C(k):
        return np.where(k >= 0, np.cos(gt * np.sqrt(np.maximum(k, 0))), 0.0)

    def S(k):
        return np.where(k >= 0, np.sin(gt * np.sqrt(np.maximum(k, 0))), 0.0)

    N, M = np.meshgrid(n, n, indexing="ij")
    z = 0.5 * np.sum(
        A(N) ** 2 * A(M) ** 2 * C(N) * C(N + 1) * C(M) * C(M + 1)
        - A(N) * A(N - 1) * A(M) * A(M + 1) * S(N) * C(N + 1) * C(M) * S(M + 1)
        + A(N) * A(N - 2) * A(M) * A(M + 2) * S(N) * S(N - 1) * S(M + 1) * S(M + 2)
        - A(N) * A(N - 1) * A(M) * A(M + 1) * S(N) * C(N - 1) * S(M + 1) * C(M + 2)
    )
    a = 0.5 * np.sum(
        A(N) ** 2 * A(M) ** 2 * C(N + 1) ** 2 * S(M) ** 2
        + A(N) * A(N + 1) * A(M) * A(M - 1) * S(N + 1) * C(N + 1) * S(M) * C(M)
        + A(N) ** 2 * A(M) ** 2 * S(N) ** 2 * C(M + 1) ** 2
        + A(N) * A(N - 1) * A(M) * A(M + 1) * S(N) * C(N) * S(M + 1) * C(M + 1)
    )
    d = 0.5 * np.sum(
        A(N) ** 2 * A(M) ** 2 * S(N + 1) ** 2 * C(M) ** 2
        + A(N) * A(N + 1) * A(M) * A(M - 1) * S(N + 1) * C(N + 1) * S(M) * C(M)
        + A(N) ** 2 * A(M) ** 2 * C(N) ** 2 * S(M + 1) ** 2
        + A(N) * A(N - 1) * A(M) * A(M + 1) * S(N) * C(N) * S(M + 1) * C(M + 1)
    )
    return complex(z), float(a), float(d)
