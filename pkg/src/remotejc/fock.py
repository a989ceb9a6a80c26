"""Two qubits, two resonant fields: states in a truncated double-Fock basis.

Time is the dimensionless product ``gt``; the coupling never appears on its
own.  Amplitudes are stored as ``amps[q1, q2, n, m]`` with qubit index
0 = e and 1 = g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import sparse
from scipy.special import gammaln
from scipy.stats import poisson

from . import kernels
from .errors import ConfigurationError, TruncationError

E, G = 0, 1

#: largest tolerated norm loss from dropped super-cutoff amplitudes
NORM_LOSS_LIMIT = 1e-8
#: Poisson tail mass allowed outside the retained Fock range
TAIL_LIMIT = 1e-12


def default_cutoff(nbar: float) -> int:
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 10.0))


def poisson_tail(nbar: float, cutoff: int) -> float:
    """Mass of the photon-number distribution above ``cutoff``."""
    if nbar == 0.0:
        return 0.0
    return float(poisson.sf(cutoff, nbar))


@dataclass(frozen=True)
class FieldSpec:
    """Coherent amplitude and Fock cutoff shared by both field modes."""

    alpha: float
    cutoff: int | None = None

    def __post_init__(self):
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise ConfigurationError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", default_cutoff(self.nbar))
        elif int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ConfigurationError(f"cutoff must be a positive integer, got {self.cutoff!r}")
        else:
            object.__setattr__(self, "cutoff", int(self.cutoff))

    @property
    def nbar(self) -> float:
        return self.alpha * self.alpha

    @property
    def tail_mass(self) -> float:
        return poisson_tail(self.nbar, self.cutoff)

    @property
    def tau(self) -> float:
        """Fast fringe period of the entanglement signal, ``pi / (2 sqrt(nbar))``."""
        return math.pi / (2.0 * math.sqrt(self.nbar)) if self.nbar > 0 else math.inf


def poisson_amplitude(n, alpha: float):
    """Coherent-state amplitude ``A_n = exp(-alpha^2/2) alpha^n / sqrt(n!)``.

    Evaluated in log space so ``alpha = 10`` poses no overflow; ``A_n = 0``
    for negative ``n``.  Accepts scalar or array ``n``.
    """
    n_arr = np.asarray(n)
    nf = n_arr.astype(float)
    valid = n_arr >= 0
    if alpha == 0.0:
        out = np.where(n_arr == 0, 1.0, 0.0)
    else:
        safe = np.where(valid, nf, 0.0)
        logs = -0.5 * alpha * alpha + safe * math.log(alpha) - 0.5 * gammaln(safe + 1.0)
        out = np.where(valid, np.exp(logs), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def poisson_amplitudes(field: FieldSpec, extra: int = 0) -> np.ndarray:
    """``A_0 .. A_{cutoff + extra}``."""
    return poisson_amplitude(np.arange(field.cutoff + 1 + extra), field.alpha)


@dataclass(frozen=True)
class JointState:
    """Pure state of qubit x qubit x field x field at time ``gt``.

    ``norm_loss`` accumulates the squared norm of amplitudes dropped at the
    cutoff; it is never renormalized away.
    """

    amplitudes: np.ndarray
    gt: float = 0.0
    norm_loss: float = 0.0
    label: str = dc_field(default="", compare=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.ndim != 4 or amps.shape[:2] != (2, 2) or amps.shape[2] != amps.shape[3]:
            raise ConfigurationError(f"amplitudes must have shape (2, 2, N+1, N+1), got {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[2] - 1

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def swapped(self) -> "JointState":
        """Exchange the two sites, ``(q1, n) <-> (q2, m)``."""
        return JointState(self.amplitudes.transpose(1, 0, 3, 2), self.gt, self.norm_loss, self.label)


def _bell_with_fields(fa: np.ndarray, fb: np.ndarray, label: str) -> JointState:
    amps = np.zeros((2, 2, fa.size, fb.size), dtype=np.complex128)
    prod = np.outer(fa, fb) / math.sqrt(2.0)
    amps[E, G] = prod
    amps[G, E] = prod
    return JointState(amps, 0.0, 0.0, label)


def build_initial_state(field: FieldSpec) -> JointState:
    """``(|eg> + |ge>)/sqrt(2)`` with both fields in the coherent state ``|alpha>``."""
    tail = field.tail_mass
    if tail > TAIL_LIMIT:
        raise ConfigurationError(
            f"cutoff {field.cutoff} leaves Poisson tail {tail:.3e} > {TAIL_LIMIT:g}; "
            f"use cutoff >= {default_cutoff(field.nbar)}"
        )
    amp = poisson_amplitudes(field)
    return _bell_with_fields(amp, amp, "coherent")


def build_fock_state(field: FieldSpec) -> JointState:
    """Bell qubits with both fields in the number state ``|round(nbar)>``."""
    k = int(round(field.nbar))
    if k > field.cutoff:
        raise ConfigurationError(f"cutoff {field.cutoff} too small for Fock state |{k}>")
    vec = np.zeros(field.cutoff + 1)
    vec[k] = 1.0
    return _bell_with_fields(vec, vec, "fock")


def rabi_factors(gt: float, cutoff: int):
    """Per-site mixing weights at time ``gt`` (see ``kernels.site_coefficients``)."""
    theta = gt * np.sqrt(np.arange(1, cutoff + 2, dtype=float))
    return kernels.site_coefficients(np.cos(theta), np.sin(theta))


def evolve(state0: JointState, gt: float) -> JointState:
    """Propagate ``state0`` by ``gt`` with the closed-form resonant JC unitary.

    Each site mixes ``|e,n>`` and ``|g,n+1>`` by the angle ``gt*sqrt(n+1)``
    with ``-i`` on the flip terms.  The result depends on ``gt`` only, never
    on a step history.

    Raises
    ------
    TruncationError
        If more than ``NORM_LOSS_LIMIT`` of norm leaks past the cutoff.
    """
    if not (gt >= 0.0 and math.isfinite(gt)):
        raise ConfigurationError(f"gt must be finite and >= 0, got {gt!r}")
    if gt == 0.0:
        return state0
    own, partner = rabi_factors(gt, state0.cutoff)
    amps = kernels.evolve_amplitudes(state0.amplitudes, own, partner)
    before = float(np.sum(np.abs(state0.amplitudes) ** 2))
    after = float(np.sum(np.abs(amps) ** 2))
    loss = state0.norm_loss + max(before - after, 0.0)
    check_norm_loss(loss, state0.cutoff)
    return JointState(amps, state0.gt + gt, loss, state0.label)


def check_norm_loss(loss: float, cutoff: int) -> None:
    if loss > NORM_LOSS_LIMIT:
        raise TruncationError(
            f"norm loss {loss:.3e} exceeds {NORM_LOSS_LIMIT:g} at cutoff {cutoff}; "
            f"increase the cutoff to at least {2 * cutoff}",
            norm_loss=loss,
            suggested_cutoff=2 * cutoff,
        )


# ---------------------------------------------------------------------------
# RK4 oracle
# ---------------------------------------------------------------------------


def _site_hamiltonian(cutoff: int) -> sparse.csr_matrix:
    # basis index q * (N+1) + n; couples |e,n> <-> |g,n+1> with sqrt(n+1)
    nf = cutoff + 1
    rows, cols, vals = [], [], []
    for n in range(cutoff):
        i = E * nf + n
        j = G * nf + n + 1
        w = math.sqrt(n + 1)
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]
    return sparse.csr_matrix((vals, (rows, cols)), shape=(2 * nf, 2 * nf))


def interaction_matrix(cutoff: int) -> sparse.csr_matrix:
    """Dimensionless two-site interaction in the ``(q1, n, q2, m)`` ordering."""
    h = _site_hamiltonian(cutoff)
    eye = sparse.identity(h.shape[0], format="csr")
    return (sparse.kron(h, eye) + sparse.kron(eye, h)).tocsr()


def evolve_ode_oracle(state0: JointState, gt: float, steps: int) -> JointState:
    """Integrate ``i dc/d(gt) = H c`` with classic fourth-order Runge-Kutta.

    Independent of the closed form: builds the interaction as an explicit
    sparse matrix and marches ``steps`` equal steps.  Meant for small
    ``nbar`` only.
    """
    if steps < 1:
        raise ConfigurationError("steps must be >= 1")
    if gt == 0.0:
        return state0
    nf = state0.cutoff + 1
    ham = interaction_matrix(state0.cutoff)
    # (q1, q2, n, m) -> (q1, n, q2, m)
    y = np.ascontiguousarray(state0.amplitudes.transpose(0, 2, 1, 3)).reshape(-1)
    h = gt / steps

    def rhs(v):
        return -1j * (ham @ v)

    for step in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % 1024 == 0 and not np.all(np.isfinite(y)):
            raise FloatingPointError("RK4 oracle diverged")
    amps = y.reshape(2, nf, 2, nf).transpose(0, 2, 1, 3)
    return JointState(amps, state0.gt + gt, state0.norm_loss, state0.label)
