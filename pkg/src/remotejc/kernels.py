"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

Public entry points (``evolve_amplitudes``, ``qubit_density``, ``jacobi_eigh``,
``concurrence_core``, ``series_block``) dispatch on ``_accel.USE_NUMBA``. The
``*_numba`` / ``*_numpy`` names stay importable so the benchmark and the
cross-backend tests can call both paths in one process.

Amplitude layout everywhere: ``amps[q1, q2, n, m]`` with qubit index 0 = e,
1 = g and Fock indices ``n, m`` in ``[0, cutoff]``.
"""
import math

import numpy as np

from . import _accel

# ---------------------------------------------------------------------------
# resonant JC propagation, both sites in one pass
# ---------------------------------------------------------------------------
#
# Per site and output level (q, n) the unitary draws on two inputs:
#   q = e: own (e, n) with cos(gt sqrt(n+1)), partner (g, n+1) with -i sin(...)
#   q = g: own (g, n) with cos(gt sqrt(n)),   partner (e, n-1) with -i sin(...)
# The |e,N> -> |g,N+1> leg has no slot and is dropped.  The four two-site
# products are summed as (own*own + partner*partner) + (own*partner +
# partner*own) so swapping the sites reproduces amplitudes bit for bit.


def site_coefficients(cos_up, sin_up):
    """``own[q, n]`` and ``partner[q, n]`` mixing weights for one site."""
    nf = cos_up.shape[0]
    own = np.empty((2, nf), dtype=np.complex128)
    partner = np.zeros((2, nf), dtype=np.complex128)
    own[0] = cos_up
    own[1, 0] = 1.0
    own[1, 1:] = cos_up[:-1]
    partner[0, :-1] = -1j * sin_up[:-1]
    partner[1, 1:] = -1j * sin_up[:-1]
    return own, partner


def _evolve_row(amps, own, partner, q1, n, out_row):
    # out_row[q2, m] = evolved amplitude (q1, q2, n, m)
    nf = amps.shape[2]
    p1 = 1 - q1
    n_p = n + 1 if q1 == 0 else n - 1
    has_p1 = 0 <= n_p < nf
    o1 = own[q1, n]
    k1 = partner[q1, n]
    for q2 in range(2):
        p2 = 1 - q2
        for m in range(nf):
            m_p = m + 1 if q2 == 0 else m - 1
            has_p2 = 0 <= m_p < nf
            o2 = own[q2, m]
            k2 = partner[q2, m]
            t00 = (o1 * o2) * amps[q1, q2, n, m]
            t11 = 0j
            t01 = 0j
            t10 = 0j
            if has_p2:
                t01 = (o1 * k2) * amps[q1, p2, n, m_p]
            if has_p1:
                t10 = (k1 * o2) * amps[p1, q2, n_p, m]
                if has_p2:
                    t11 = (k1 * k2) * amps[p1, p2, n_p, m_p]
            out_row[q2, m] = (t00 + t11) + (t01 + t10)


def _make_evolve_loops(row):
    def evolve_loop(amps, own, partner):
        nf = amps.shape[2]
        out = np.empty_like(amps)
        for q1 in range(2):
            for n in range(nf):
                row(amps, own, partner, q1, n, out[q1, :, n, :])
        return out

    def evolved_density_loop(amps, own, partner):
        # rho accumulated Fock row by Fock row; the evolved state is never stored
        nf = amps.shape[2]
        rows = np.empty((2, 2, nf), dtype=np.complex128)
        rho = np.zeros((4, 4), dtype=np.complex128)
        for n in range(nf):
            for q1 in range(2):
                row(amps, own, partner, q1, n, rows[q1])
            for i in range(4):
                ri = rows[i // 2, i % 2]
                for j in range(i, 4):
                    rj = rows[j // 2, j % 2]
                    acc = 0j
                    for m in range(nf):
                        acc += ri[m] * np.conj(rj[m])
                    rho[i, j] += acc
        for i in range(4):
            for j in range(i + 1, 4):
                rho[j, i] = np.conj(rho[i, j])
        return rho

    return evolve_loop, evolved_density_loop


def _partner_shift(x, axis_q, axis_n):
    # y[e, n] = x[g, n+1], y[g, n] = x[e, n-1], zero where out of range
    x = np.moveaxis(x, (axis_q, axis_n), (0, 1))
    y = np.zeros_like(x)
    y[0, :-1] = x[1, 1:]
    y[1, 1:] = x[0, :-1]
    return np.moveaxis(y, (0, 1), (axis_q, axis_n))


def evolve_amplitudes_numpy(amps, own, partner):
    o1 = own[:, None, :, None]
    k1 = partner[:, None, :, None]
    o2 = own[None, :, None, :]
    k2 = partner[None, :, None, :]
    s1 = _partner_shift(amps, 0, 2)
    s2 = _partner_shift(amps, 1, 3)
    s12 = _partner_shift(s1, 1, 3)
    return ((o1 * o2) * amps + (k1 * k2) * s12) + ((o1 * k2) * s2 + (k1 * o2) * s1)


if _accel.HAVE_NUMBA:
    evolve_amplitudes_numba, evolved_density_numba = (
        _accel.jit_copy(f) for f in _make_evolve_loops(_accel.jit_copy(_evolve_row))
    )
else:  # pragma: no cover
    evolve_amplitudes_numba = evolved_density_numba = None


def evolve_amplitudes(amps, own, partner):
    amps = np.ascontiguousarray(amps)
    if _accel.USE_NUMBA:
        return evolve_amplitudes_numba(amps, own, partner)
    return evolve_amplitudes_numpy(amps, own, partner)


# ---------------------------------------------------------------------------
# partial trace over both fields
# ---------------------------------------------------------------------------


def _density_loop(amps):
    flat = amps.reshape(4, amps.shape[2] * amps.shape[3])
    rho = np.zeros((4, 4), dtype=np.complex128)
    for i in range(4):
        for j in range(i, 4):
            acc = 0j
            for k in range(flat.shape[1]):
                acc += flat[i, k] * np.conj(flat[j, k])
            rho[i, j] = acc
            if i != j:
                rho[j, i] = np.conj(acc)
    return rho


def qubit_density_numpy(amps):
    flat = amps.reshape(4, -1)
    return flat @ flat.conj().T


qubit_density_numba = _accel.jit_copy(_density_loop)


def qubit_density(amps):
    amps = np.ascontiguousarray(amps)
    if _accel.USE_NUMBA:
        return qubit_density_numba(amps)
    return qubit_density_numpy(amps)


def evolved_density_numpy(amps, own, partner):
    return qubit_density_numpy(evolve_amplitudes_numpy(amps, own, partner))


def evolved_density(amps, own, partner):
    """Reduced qubit density of the evolved state without keeping the state."""
    amps = np.ascontiguousarray(amps)
    if _accel.USE_NUMBA:
        return evolved_density_numba(amps, own, partner)
    return evolved_density_numpy(amps, own, partner)


# ---------------------------------------------------------------------------
# cyclic complex Jacobi for Hermitian matrices
# ---------------------------------------------------------------------------


def _jacobi_py(a, rel_tol, max_sweeps):
    # a is overwritten; returns unsorted eigenvalues, eigenvectors, final off-norm
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = math.sqrt(np.sum(np.abs(a) ** 2))
    off = 0.0
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += abs(a[p, q]) ** 2
        off = math.sqrt(off)
        if off <= rel_tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = np.conj(ph)
                # A <- A W, W = [[c, s], [-s*conj(ph), c*conj(ph)]] on (p, q)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * phc * colq
                a[:, q] = s * colp + c * phc * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phc * vq
                v[:, q] = s * vp + c * phc * vq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, off


_jacobi_numba = _accel.jit_copy(_jacobi_py)


def jacobi_eigh(m, rel_tol=1e-15, max_sweeps=60, use_numba=None):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v, off)`` with eigenvalues sorted decreasing, matching
    eigenvector columns and the final off-diagonal Frobenius norm.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    a = np.array(m, dtype=np.complex128, copy=True)
    a = 0.5 * (a + a.conj().T)
    fn = _jacobi_numba if use_numba else _jacobi_py
    w, v, off = fn(a, rel_tol, max_sweeps)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order], off


# ---------------------------------------------------------------------------
# concurrence core: spectrum of rho * flip(rho)
# ---------------------------------------------------------------------------

def _make_concurrence_core(jacobi):
    def core(rho):
        # sqrt(lambda_i) are the singular values of M = sqrt(rho) * sqrt(rho~),
        # read off as the positive half of the spectrum of [[0, M], [M^H, 0]].
        w, v, _ = jacobi(0.5 * (rho + rho.conj().T), 1e-15, 60)
        min_eig = w.min()
        sq = np.zeros(4)
        for i in range(4):
            if w[i] > 0.0:
                sq[i] = math.sqrt(w[i])
        root = np.zeros((4, 4), dtype=np.complex128)
        for i in range(4):
            for j in range(4):
                acc = 0j
                for k in range(4):
                    acc += v[i, k] * sq[k] * np.conj(v[j, k])
                root[i, j] = acc
        # sigma_y x sigma_y applied as index reversal plus signs (-, +, +, -)
        flipped = np.empty((4, 4), dtype=np.complex128)
        for i in range(4):
            si = -1.0 if (i == 0 or i == 3) else 1.0
            for j in range(4):
                sj = -1.0 if (j == 0 or j == 3) else 1.0
                flipped[i, j] = si * sj * np.conj(root[3 - i, 3 - j])
        dil = np.zeros((8, 8), dtype=np.complex128)
        for i in range(4):
            for j in range(4):
                acc = 0j
                for k in range(4):
                    acc += root[i, k] * flipped[k, j]
                dil[i, 4 + j] = acc
                dil[4 + j, i] = np.conj(acc)
        ev, _, _ = jacobi(dil, 1e-15, 60)
        ev = np.sort(ev)[::-1]
        sing = np.empty(4)
        for i in range(4):
            sing[i] = max(ev[i], 0.0)
        return sing, min_eig

    def batch(rhos):
        t = rhos.shape[0]
        sing = np.empty((t, 4))
        mins = np.empty(t)
        for k in range(t):
            s, mn = core(rhos[k].copy())
            sing[k] = s
            mins[k] = mn
        return sing, mins

    return core, batch


_concurrence_core_py, _concurrence_batch_py = _make_concurrence_core(_jacobi_py)

if _accel.HAVE_NUMBA:
    _core_nb = _accel.jit_copy(_make_concurrence_core(_jacobi_numba)[0])

    def _batch_src(rhos):
        t = rhos.shape[0]
        sing = np.empty((t, 4))
        mins = np.empty(t)
        for k in range(t):
            s, mn = _core_nb(rhos[k].copy())
            sing[k] = s
            mins[k] = mn
        return sing, mins

    _concurrence_core_numba = _core_nb
    _concurrence_batch_numba = _accel.jit_copy(_batch_src)
else:  # pragma: no cover
    _concurrence_core_numba = None
    _concurrence_batch_numba = None


def concurrence_core(rho, use_numba=None):
    """Return ``(sqrt_lambdas, min_eig_rho)`` for a 4x4 density matrix.

    ``sqrt_lambdas`` are sorted decreasing and clamped at zero.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if use_numba:
        return _concurrence_core_numba(rho)
    return _concurrence_core_py(rho)


def concurrence_batch(rhos, use_numba=None):
    """Vector form of :func:`concurrence_core` over a stack ``(T, 4, 4)``."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    rhos = np.ascontiguousarray(rhos, dtype=np.complex128)
    if use_numba:
        return _concurrence_batch_numba(rhos)
    return _concurrence_batch_py(rhos)


# ---------------------------------------------------------------------------
# coherent-state series for z, a, d and the approximate envelope
# ---------------------------------------------------------------------------
#
# ``amp`` holds A_k for k in [-2, N+2] at offset 2 (zero for k < 0);
# ``root`` holds sqrt(k) for k in [-2, N+3] at offset 2 (negative k -> 0,
# their C/S factors always meet a vanishing A).


def _series_loop(gts, amp, root, nbar):
    nt = gts.shape[0]
    nk = root.shape[0]
    top = amp.shape[0] - 2  # n runs over [0, top - 1] = [0, N]
    out = np.empty((nt, 4))
    cs = np.empty(nk)
    sn = np.empty(nk)
    for t in range(nt):
        gt = gts[t]
        for k in range(nk):
            if k < 2:
                cs[k] = 0.0
                sn[k] = 0.0
            else:
                cs[k] = math.cos(gt * root[k])
                sn[k] = math.sin(gt * root[k])
        p1 = 0.0
        p2n = 0.0
        p2m = 0.0
        p3n = 0.0
        p3m = 0.0
        p4n = 0.0
        p4m = 0.0
        a1n = 0.0
        a1m = 0.0
        a2n = 0.0
        a2m = 0.0
        a3n = 0.0
        a3m = 0.0
        a4n = 0.0
        a4m = 0.0
        d1n = 0.0
        d1m = 0.0
        d3n = 0.0
        d3m = 0.0
        csum = 0.0
        ssum = 0.0
        for n in range(top - 2):
            i = n + 2
            w = amp[i] * amp[i]
            p1 += w * cs[i] * cs[i + 1]
            p2n += amp[i] * amp[i - 1] * sn[i] * cs[i + 1]
            p2m += amp[i] * amp[i + 1] * cs[i] * sn[i + 1]
            p3n += amp[i] * amp[i - 2] * sn[i] * sn[i - 1]
            p3m += amp[i] * amp[i + 2] * sn[i + 1] * sn[i + 2]
            p4n += amp[i] * amp[i - 1] * sn[i] * cs[i - 1]
            p4m += amp[i] * amp[i + 1] * sn[i + 1] * cs[i + 2]
            a1n += w * cs[i + 1] * cs[i + 1]
            a1m += w * sn[i] * sn[i]
            a2n += amp[i] * amp[i + 1] * sn[i + 1] * cs[i + 1]
            a2m += amp[i] * amp[i - 1] * sn[i] * cs[i]
            a3n += w * sn[i] * sn[i]
            a3m += w * cs[i + 1] * cs[i + 1]
            a4n += amp[i] * amp[i - 1] * sn[i] * cs[i]
            a4m += amp[i] * amp[i + 1] * sn[i + 1] * cs[i + 1]
            d1n += w * sn[i + 1] * sn[i + 1]
            d1m += w * cs[i] * cs[i]
            d3n += w * cs[i] * cs[i]
            d3m += w * sn[i + 1] * sn[i + 1]
            csum += w * math.cos(2.0 * gt * root[i])
            ssum += w * math.sin(2.0 * gt * root[i])
        out[t, 0] = 0.5 * (p1 * p1 - p2n * p2m + p3n * p3m - p4n * p4m)
        out[t, 1] = 0.5 * (a1n * a1m + a2n * a2m + a3n * a3m + a4n * a4m)
        out[t, 2] = 0.5 * (d1n * d1m + a2n * a2m + d3n * d3m + a4n * a4m)
        if nbar > 0.0:
            env = math.exp(-gt * gt / (8.0 * nbar * nbar))
        else:
            env = 1.0 if gt == 0.0 else 0.0
        out[t, 3] = 0.25 * (env - 1.0) + 0.5 * csum * csum - 0.5 * ssum * ssum
    return out


def _series_numpy_chunk(gts, amp, root, nbar):
    top = amp.shape[0] - 2
    phase = np.outer(gts, root)
    cs = np.cos(phase)
    sn = np.sin(phase)
    cs[:, :2] = 0.0
    sn[:, :2] = 0.0
    i = np.arange(2, top)
    A = amp[i]
    Am1, Am2, Ap1, Ap2 = amp[i - 1], amp[i - 2], amp[i + 1], amp[i + 2]
    w = A * A
    c0, c1, c2, cm1 = cs[:, i], cs[:, i + 1], cs[:, i + 2], cs[:, i - 1]
    s0, s1, s2, sm1 = sn[:, i], sn[:, i + 1], sn[:, i + 2], sn[:, i - 1]
    p1 = (w * c0 * c1).sum(1)
    p2n = (A * Am1 * s0 * c1).sum(1)
    p2m = (A * Ap1 * c0 * s1).sum(1)
    p3n = (A * Am2 * s0 * sm1).sum(1)
    p3m = (A * Ap2 * s1 * s2).sum(1)
    p4n = (A * Am1 * s0 * cm1).sum(1)
    p4m = (A * Ap1 * s1 * c2).sum(1)
    a1 = (w * c1 * c1).sum(1)
    a1m = (w * s0 * s0).sum(1)
    a2n = (A * Ap1 * s1 * c1).sum(1)
    a2m = (A * Am1 * s0 * c0).sum(1)
    d1n = (w * s1 * s1).sum(1)
    d1m = (w * c0 * c0).sum(1)
    z = 0.5 * (p1 * p1 - p2n * p2m + p3n * p3m - p4n * p4m)
    # printed a and d: third/fourth terms mirror the first/second in n <-> m
    a = 0.5 * (a1 * a1m + a2n * a2m + a1m * a1 + a2m * a2n)
    d = 0.5 * (d1n * d1m + a2n * a2m + d1m * d1n + a2m * a2n)
    two = 2.0 * np.outer(gts, root[i])
    csum = (w * np.cos(two)).sum(1)
    ssum = (w * np.sin(two)).sum(1)
    if nbar > 0.0:
        env = np.exp(-gts * gts / (8.0 * nbar * nbar))
    else:
        env = np.where(gts == 0.0, 1.0, 0.0)
    lam = 0.25 * (env - 1.0) + 0.5 * csum * csum - 0.5 * ssum * ssum
    return np.column_stack((z, a, d, lam))


def series_block_numpy(gts, amp, root, nbar, chunk=1024):
    gts = np.asarray(gts, dtype=float)
    parts = [_series_numpy_chunk(gts[k:k + chunk], amp, root, nbar)
             for k in range(0, gts.shape[0], chunk)]
    if not parts:
        return np.empty((0, 4))
    return np.concatenate(parts)


series_block_numba = _accel.jit_copy(_series_loop)


def series_block(gts, amp, root, nbar):
    """Columns ``z, a, d, lambda_approx`` for every ``gt`` in ``gts``."""
    gts = np.ascontiguousarray(gts, dtype=float)
    if _accel.USE_NUMBA:
        return series_block_numba(gts, amp, root, float(nbar))
    return series_block_numpy(gts, amp, root, float(nbar))
