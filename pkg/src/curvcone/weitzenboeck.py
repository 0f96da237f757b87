"""Outer relaxation: curvature terms on traceless symmetric tensors.

For each p >= 1 the operator R induces a symmetric form on harmonic
homogeneous degree-p polynomials,

    K[a, b] = average over the unit sphere of <R(x ^ grad psi_a),
                                                  x ^ grad psi_b>,

computed exactly through sphere moments.  R lies in the m-th outer set when
K is positive semidefinite for every p <= m + 1; p = 1 recovers nonnegative
Ricci curvature up to a positive factor.  The overall positive constant in
front of K is dropped throughout: only the PSD status matters.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._poly import iter_monomials
from .exactmath import Fraction as _F  # noqa: F401  (re-exported alias usage)
from .exactmath import PsdStatus, Rat, SymMatRat, psd_status_int
from .tensorspace import CurvOp, ModCurvOp, plucker_basis


def _binom(a: int, b: int) -> int:
    return math.comb(a, b) if a >= 0 and b >= 0 else 0


@dataclass(frozen=True)
class HarmonicBasis:
    """Exact rational basis of harmonic homogeneous polynomials.

    Each basis element is a coefficient vector over ``monomials``; the
    vectors are integer-valued and come from a deterministically pivoted
    null-space reduction of the Laplacian coefficient matrix, so the basis
    is reproducible bit for bit.
    """

    n: int
    p: int
    monomials: tuple[tuple[int, ...], ...]
    vectors: tuple[tuple[Fraction, ...], ...]

    @property
    def count(self) -> int:
        return len(self.vectors)


def harmonic_dim(n: int, p: int) -> int:
    if p == 1:
        return n
    return _binom(n + p - 1, p) - _binom(n + p - 3, p - 2)


def harmonic_basis(n: int, p: int) -> HarmonicBasis:
    """Basis of ker(Laplacian) inside degree-p forms in n variables."""
    if n < 2 or p < 1:
        raise ValueError("need n >= 2 and p >= 1")
    monos = iter_monomials(n, p)
    if p < 2:
        vecs = tuple(
            tuple(Fraction(int(i == j)) for j in range(len(monos)))
            for i in range(len(monos))
        )
        return HarmonicBasis(n, p, monos, vecs)
    lower = iter_monomials(n, p - 2)
    lower_index = {m: k for k, m in enumerate(lower)}
    rows = [[Fraction(0)] * len(monos) for _ in lower]
    for col, mu in enumerate(monos):
        for i in range(n):
            if mu[i] >= 2:
                tgt = list(mu)
                tgt[i] -= 2
                rows[lower_index[tuple(tgt)]][col] += mu[i] * (mu[i] - 1)
    vecs = _nullspace(rows, len(monos))
    expected = harmonic_dim(n, p)
    assert len(vecs) == expected, (len(vecs), expected)
    return HarmonicBasis(n, p, monos, tuple(vecs))


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Null-space basis via RREF with first-nonzero pivoting, primitive-scaled."""
    m = [row[:] for row in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        basis.append(tuple(x * den for x in v))
    return basis


def sphere_moment(alpha: tuple[int, ...]) -> Rat:
    """Average of x^alpha over the unit sphere in R^len(alpha).

    Zero when any exponent is odd; otherwise
    prod_i (alpha_i - 1)!! / (n (n+2) ... (n + |alpha| - 2)).
    """
    n = len(alpha)
    if any(a % 2 for a in alpha):
        return Fraction(0)
    total = sum(alpha)
    if total == 0:
        return Fraction(1)
    num = 1
    for a in alpha:
        num *= _double_factorial(a - 1)
    den = 1
    for k in range(total // 2):
        den *= n + 2 * k
    return Fraction(num, den)


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class CurvatureTerm:
    """Curvature term matrix for degree-p tensors, up to a positive factor."""

    n: int
    p: int
    matrix: SymMatRat


# ---------------------------------------------------------------------------
# Cached contraction tensor:  K[a,b] = sum_{u,v} R[u,v] * T[a,u,b,v]
# where T[a,u,b,v] = integral of alpha^a_u * alpha^b_v over the sphere,
# alpha^a being the Plucker coordinate vector of x ^ grad(psi_a).
# ---------------------------------------------------------------------------

_TCACHE: dict[tuple[int, int], tuple] = {}
_TLOCK = threading.Lock()


def _grad_wedge_rows(basis: HarmonicBasis) -> np.ndarray:
    """Integer matrix of the alpha polynomials, shape (count * N, dim_p)."""
    n, p = basis.n, basis.p
    monos = basis.monomials
    mono_index = {m: k for k, m in enumerate(monos)}
    pairs = plucker_basis(n).pairs
    rows = np.zeros((basis.count * len(pairs), len(monos)), dtype=object)
    for a, vec in enumerate(basis.vectors):
        for u, (i, j) in enumerate(pairs):
            out = rows[a * len(pairs) + u]
            for m_idx, c in enumerate(vec):
                if not c:
                    continue
                mu = monos[m_idx]
                ci = int(c)
                # x_i d_j - x_j d_i, both terms stay in degree p
                if mu[j - 1]:
                    tgt = list(mu)
                    tgt[j - 1] -= 1
                    tgt[i - 1] += 1
                    out[mono_index[tuple(tgt)]] += ci * mu[j - 1]
                if mu[i - 1]:
                    tgt = list(mu)
                    tgt[i - 1] -= 1
                    tgt[j - 1] += 1
                    out[mono_index[tuple(tgt)]] -= ci * mu[i - 1]
    return rows


def _moment_matrix(n: int, p: int, monos) -> tuple[np.ndarray, int]:
    """Integer moment matrix M[mu,nu] = D * moment(mu + nu), with the
    common denominator D = n (n+2) ... (n + 4p/2 ... ) for |mu+nu| = 2p."""
    d = 1
    for k in range(p):
        d *= n + 2 * k
    dim = len(monos)
    mom = np.zeros((dim, dim), dtype=object)
    for i in range(dim):
        mi = monos[i]
        for j in range(i, dim):
            s = tuple(a + b for a, b in zip(mi, monos[j]))
            if any(x % 2 for x in s):
                continue
            v = 1
            for x in s:
                v *= _double_factorial(x - 1)
            mom[i, j] = v
            mom[j, i] = v
    return mom, d


def _contraction_tensor(n: int, p: int):
    key = (n, p)
    with _TLOCK:
        cached = _TCACHE.get(key)
    if cached is not None:
        return cached
    basis = harmonic_basis(n, p)
    v_obj = _grad_wedge_rows(basis)
    mom_obj, den = _moment_matrix(n, p, basis.monomials)
    max_v = int(max(1, np.abs(v_obj.astype(object)).max()))
    max_m = int(max(1, np.abs(mom_obj.astype(object)).max()))
    dim_p = v_obj.shape[1]
    bound = dim_p * dim_p * max_v * max_v * max_m
    if bound < 2**62:
        t = v_obj.astype(np.int64) @ mom_obj.astype(np.int64) @ v_obj.astype(np.int64).T
        t = t.astype(object)
    else:
        t = v_obj @ mom_obj @ v_obj.T
    npairs = plucker_basis(n).dim
    t4 = t.reshape(basis.count, npairs, basis.count, npairs)
    entry = (basis, t4, den)
    with _TLOCK:
        _TCACHE[key] = entry
    return entry


def curvature_term(r: CurvOp, p: int) -> CurvatureTerm:
    """Exact curvature-term matrix over the harmonic basis, positive factor
    dropped (the sphere-average normalisation is kept, any remaining
    constant is irrelevant for the PSD verdict)."""
    if p < 1:
        raise ValueError("need p >= 1")
    basis, t4, den = _contraction_tensor(r.n, p)
    k_int, r_den = _contract(r, t4)
    scale = Fraction(1, den * r_den)
    rows = [[Fraction(int(k_int[a, b])) * scale for b in range(basis.count)] for a in range(basis.count)]
    return CurvatureTerm(r.n, p, SymMatRat(rows))


def _contract(r: ModCurvOp, t4: np.ndarray):
    ints, r_den = r.mat.int_scaled()
    npairs = r.mat.dim
    dim_h = t4.shape[0]
    k = np.zeros((dim_h, dim_h), dtype=object)
    for u in range(npairs):
        for v in range(npairs):
            c = ints[u][v]
            if c:
                k = k + c * t4[:, u, :, v]
    return k, r_den


def _curvature_term_int(r: CurvOp, p: int) -> list[list[int]]:
    """Integer-scaled curvature term (positive multiple of the exact one)."""
    _, t4, _ = _contraction_tensor(r.n, p)
    k_int, _ = _contract(r, t4)
    return [[int(x) for x in row] for row in k_int]


def outer_membership(r: CurvOp, m: int) -> bool:
    """PSD check of every curvature term p = 1 .. m+1 (exact)."""
    return outer_first_failure(r, m) is None


def outer_first_failure(r: CurvOp, m: int) -> int | None:
    """Smallest p <= m+1 whose curvature term is not PSD, or None."""
    if m < 0:
        raise ValueError("need m >= 0")
    for p in range(1, m + 2):
        if psd_status_int(_curvature_term_int(r, p)) is PsdStatus.NOT_PSD:
            return p
    return None
