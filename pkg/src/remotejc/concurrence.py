"""Reduced two-qubit density matrices and their concurrence.

Basis order is ``[ee, eg, ge, gg]`` throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation
from .fock import JointState

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
#: eigenvalues of rho above -CLAMP_TOL are treated as roundoff and set to 0
CLAMP_TOL = 1e-10

BASIS = ("ee", "eg", "ge", "gg")


@dataclass(frozen=True)
class TwoQubitDensity:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128, copy=True)
        if m.shape != (4, 4):
            raise ContractViolation(f"two-qubit density must be 4x4, got {m.shape}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITIAN_TOL:
            raise ContractViolation(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ContractViolation(f"density matrix trace {tr!r} differs from 1")
        m = 0.5 * (m + m.conj().T)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_pure(cls, psi) -> "TwoQubitDensity":
        psi = np.asarray(psi, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def min_eigenvalue(self) -> float:
        return float(hermitian_eigenvalues(self.entries)[-1])


@dataclass(frozen=True)
class XStateElements:
    """Populations ``a, b, c, d`` and the ``eg``/``ge`` coherence ``z``.

    ``discarded_norm`` is the Frobenius norm of the entries an X projection
    threw away (0 for elements built directly).
    """

    a: float
    b: float
    c: float
    d: float
    z: complex
    discarded_norm: float = 0.0

    def check(self, tol: float = 1e-10) -> None:
        pops = (self.a, self.b, self.c, self.d)
        if abs(sum(pops) - 1.0) > tol or min(pops) < -tol:
            raise ContractViolation(f"invalid X-state populations {pops}")
        if abs(self.z) > math.sqrt(max(self.b * self.c, 0.0)) + tol:
            raise ContractViolation("|z| exceeds sqrt(bc)")

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=np.complex128)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.a, self.b, self.c, self.d
        m[1, 2] = self.z
        m[2, 1] = np.conj(self.z)
        return m


@dataclass(frozen=True)
class ConcurrenceDiagnostics:
    lambdas: np.ndarray  # eigenvalues of rho * rho~, decreasing
    concurrence: float

    @staticmethod
    def from_lambdas(lambdas) -> float:
        r = np.sqrt(np.clip(np.sort(np.asarray(lambdas, dtype=float))[::-1], 0.0, None))
        return float(max(0.0, r[0] - r[1] - r[2] - r[3]))


def reduce_to_qubits(state: JointState) -> TwoQubitDensity:
    """Trace out both fields."""
    return TwoQubitDensity(kernels.qubit_density(state.amplitudes))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, decreasing, via cyclic Jacobi."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"square matrix required, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > HERMITIAN_TOL * scale:
        raise ContractViolation(f"matrix not Hermitian (deviation {dev:.3e})")
    w, _, off = kernels.jacobi_eigh(m)
    norm = float(np.linalg.norm(m))
    if off > 1e-13 * norm:
        raise ContractViolation(f"Jacobi failed to converge (off-diagonal {off:.3e})")
    return w


def hermitian_eigenvalues_4x4(m) -> np.ndarray:
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise ContractViolation(f"4x4 matrix required, got shape {m.shape}")
    return hermitian_eigenvalues(m)


def spin_flip(m) -> np.ndarray:
    """``(sy x sy) conj(m) (sy x sy)`` by index reversal and sign flips."""
    m = np.asarray(m, dtype=np.complex128)
    sign = np.array([-1.0, 1.0, 1.0, -1.0])
    return np.outer(sign, sign) * np.conj(m[::-1, ::-1])


def concurrence(rho: TwoQubitDensity | np.ndarray) -> ConcurrenceDiagnostics:
    """Wootters concurrence ``max(0, r1 - r2 - r3 - r4)``, ``r_i = sqrt(lambda_i)``.

    The ``lambda_i`` are the eigenvalues of ``rho * spin_flip(rho)``.  They are
    obtained from the Hermitian factor ``M = sqrt(rho) sqrt(rho~)``: its
    singular values are the ``r_i`` and come out of a Jacobi solve on the
    Hermitian dilation ``[[0, M], [M^H, 0]]``, which keeps small ``r_i``
    accurate to roundoff instead of to its square root.
    """
    if not isinstance(rho, TwoQubitDensity):
        rho = TwoQubitDensity(rho)
    roots, min_eig = kernels.concurrence_core(rho.entries)
    if min_eig < -CLAMP_TOL:
        raise ContractViolation(f"density matrix not positive semidefinite (eigenvalue {min_eig:.3e})")
    c = max(0.0, roots[0] - roots[1] - roots[2] - roots[3])
    return ConcurrenceDiagnostics(roots * roots, min(float(c), 1.0))


def concurrence_values(rhos: np.ndarray) -> np.ndarray:
    """Concurrence of a stack ``(T, 4, 4)`` of density matrices."""
    roots, mins = kernels.concurrence_batch(rhos)
    bad = np.flatnonzero(mins < -CLAMP_TOL)
    if bad.size:
        raise ContractViolation(
            f"density matrix {bad[0]} not positive semidefinite (eigenvalue {mins[bad[0]]:.3e})"
        )
    c = roots[:, 0] - roots[:, 1] - roots[:, 2] - roots[:, 3]
    return np.clip(c, 0.0, 1.0)


def x_project(rho: TwoQubitDensity | np.ndarray) -> XStateElements:
    """Keep the X-shaped entries of ``rho``; report what was dropped."""
    m = rho.entries if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=np.complex128)
    # ee/gg coherence is among the entries zeroed by the equal-field form
    mask = np.eye(4, dtype=bool)
    mask[1, 2] = mask[2, 1] = True
    dropped = float(np.linalg.norm(m[~mask]))
    return XStateElements(
        a=float(m[0, 0].real),
        b=float(m[1, 1].real),
        c=float(m[2, 2].real),
        d=float(m[3, 3].real),
        z=complex(m[1, 2]),
        discarded_norm=dropped,
    )


def x_concurrence(x: XStateElements) -> float:
    """``2 max(0, |z| - sqrt(a d))``."""
    return 2.0 * max(0.0, abs(x.z) - math.sqrt(max(x.a * x.d, 0.0)))
