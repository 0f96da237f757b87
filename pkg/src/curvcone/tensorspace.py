"""Linear-algebraic structure of the second exterior power of R^n.

Everything is expressed in the lexicographic Plucker basis e_i ^ e_j,
1 <= i < j <= n, with the inner product making that basis orthonormal.
Modified curvature operators are arbitrary symmetric matrices on this space;
curvature operators are the ones Frobenius-orthogonal to the embedded fourth
exterior power, which is the first Bianchi identity in this encoding.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exactmath import Rat, SymMatRat, rat_sign


@dataclass(frozen=True)
class PluckerBasis:
    """Index bookkeeping for the lexicographic pair basis of wedge^2 R^n."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def index(self, i: int, j: int) -> int:
        """Position of e_i ^ e_j (requires i < j, 1-based)."""
        return _pair_index(self.n)[(i, j)]


@lru_cache(maxsize=None)
def plucker_basis(n: int) -> PluckerBasis:
    if n < 2:
        raise ValueError("need n >= 2")
    pairs = tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    return PluckerBasis(n, pairs)


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(plucker_basis(n).pairs)}


class ModCurvOp:
    """Symmetric bilinear form on wedge^2 R^n in the Plucker basis."""

    __slots__ = ("n", "mat")

    def __init__(self, n: int, mat: SymMatRat):
        basis = plucker_basis(n)
        if mat.dim != basis.dim:
            raise ValueError(
                f"matrix dim {mat.dim} does not match C({n},2) = {basis.dim}"
            )
        self.n = n
        self.mat = mat

    def __eq__(self, other):
        return (
            isinstance(other, ModCurvOp)
            and self.n == other.n
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.n, self.mat))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, dim={self.mat.dim})"

    def __add__(self, other: "ModCurvOp") -> "ModCurvOp":
        return ModCurvOp(self.n, self.mat + other.mat)

    def __sub__(self, other: "ModCurvOp") -> "ModCurvOp":
        return ModCurvOp(self.n, self.mat - other.mat)

    def __neg__(self) -> "ModCurvOp":
        return ModCurvOp(self.n, -self.mat)

    def scale(self, c) -> "ModCurvOp":
        return ModCurvOp(self.n, self.mat.scale(c))


class CurvOp(ModCurvOp):
    """Modified curvature operator satisfying the first Bianchi identity.

    Validated exactly at construction: the Frobenius pairing with the
    embedding of every standard basis 4-form must vanish.
    """

    def __init__(self, n: int, mat: SymMatRat):
        super().__init__(n, mat)
        res = bianchi_residual(self)
        if any(res):
            raise ValueError("matrix violates the first Bianchi identity")


@dataclass(frozen=True)
class Signature:
    """Dimension n together with the index nu of the inner product."""

    n: int
    nu: int

    def __post_init__(self):
        if not 0 <= self.nu <= self.n:
            raise ValueError("need 0 <= nu <= n")


# ---------------------------------------------------------------------------
# wedge^4 embedding and Bianchi projection
# ---------------------------------------------------------------------------

# The three splittings of a 4-set {i<j<k<l} into pairs, with the sign of the
# permutation (i,j,k,l) -> split order.
_SPLITS = (((0, 1), (2, 3), 1), ((0, 2), (1, 3), -1), ((0, 3), (1, 2), 1))


def wedge4_embed(
    n: int, omega: Mapping[tuple[int, int, int, int], Rat] | None
) -> ModCurvOp:
    """Symmetric matrix of the quadratic form a -> <omega, a ^ a>.

    ``omega`` maps increasing 4-tuples (i,j,k,l) to coefficients; for n < 4
    the fourth exterior power is trivial and the zero map is returned.
    """
    basis = plucker_basis(n)
    d = basis.dim
    rows = [[Fraction(0)] * d for _ in range(d)]
    if omega and n >= 4:
        idx = _pair_index(n)
        for quad, coeff in omega.items():
            if len(quad) != 4 or len(set(quad)) != 4 or list(quad) != sorted(quad):
                raise ValueError(f"not an increasing 4-tuple: {quad}")
            if quad[-1] > n:
                raise ValueError(f"index out of range: {quad}")
            c = Fraction(coeff)
            for (a0, a1), (b0, b1), sign in _SPLITS:
                u = idx[(quad[a0], quad[a1])]
                v = idx[(quad[b0], quad[b1])]
                rows[u][v] += sign * c
                rows[v][u] += sign * c
    return ModCurvOp(n, SymMatRat(rows))


@lru_cache(maxsize=None)
def wedge4_basis_embeddings(n: int) -> tuple[ModCurvOp, ...]:
    """Embeddings of the C(n,4) standard basis 4-forms (pairwise orthogonal)."""
    out = []
    for quad in itertools.combinations(range(1, n + 1), 4):
        out.append(wedge4_embed(n, {quad: Fraction(1)}))
    return tuple(out)


def bianchi_residual(s: ModCurvOp) -> list[Fraction]:
    """Frobenius pairings of s with each embedded basis 4-form."""
    return [s.mat.frobenius(w.mat) for w in wedge4_basis_embeddings(s.n)]


def bianchi_project(s: ModCurvOp) -> CurvOp:
    """Orthogonal projection onto the Bianchi subspace.

    The basis embeddings are pairwise Frobenius-orthogonal with squared norm
    6, so the projection subtracts <s, w>/6 times each w.
    """
    mat = s.mat
    for w in wedge4_basis_embeddings(s.n):
        c = mat.frobenius(w.mat)
        if c:
            mat = mat - w.mat.scale(Fraction(c, 6))
    return CurvOp(s.n, mat)


@lru_cache(maxsize=None)
def hodge_star() -> SymMatRat:
    """The Hodge star on wedge^2 R^4 in the Plucker basis (n = 4 only)."""
    return wedge4_embed(4, {(1, 2, 3, 4): Fraction(1)}).mat


def identity_op(n: int) -> CurvOp:
    return CurvOp(n, SymMatRat.identity(plucker_basis(n).dim))


# ---------------------------------------------------------------------------
# Sectional curvature
# ---------------------------------------------------------------------------


def wedge_coords(x: Sequence, y: Sequence) -> list[Fraction]:
    """Plucker coordinates of x ^ y."""
    n = len(x)
    xs = [Fraction(c) for c in x]
    ys = [Fraction(c) for c in y]
    return [
        xs[i - 1] * ys[j - 1] - xs[j - 1] * ys[i - 1]
        for (i, j) in plucker_basis(n).pairs
    ]


def sec_eval(r: ModCurvOp, x: Sequence, y: Sequence) -> Rat:
    """Sectional curvature of the plane spanned by x and y.

    <R(x^y), x^y> / <x^y, x^y>; raises on linearly dependent x, y.
    """
    if len(x) != r.n or len(y) != r.n:
        raise ValueError("vector length does not match n")
    alpha = wedge_coords(x, y)
    norm2 = sum(a * a for a in alpha)
    if not norm2:
        raise ValueError("degenerate plane")
    return r.mat.quad_form(alpha) / norm2


def sec_sample_min(r: ModCurvOp, samples: int, seed: int) -> float:
    """Minimum of sec over pseudorandom 2-planes (floating point).

    Deterministic given the seed.  A sampling oracle, not a bound: the true
    infimum can be smaller.
    """
    import numpy as np

    if samples < 1:
        raise ValueError("need samples >= 1")
    rng = np.random.default_rng(seed)
    n = r.n
    pairs = plucker_basis(n).pairs
    iu = np.array([i - 1 for i, _ in pairs])
    ju = np.array([j - 1 for _, j in pairs])
    m = r.mat.to_float()
    best = float("inf")
    chunk = 4096
    remaining = samples
    while remaining > 0:
        k = min(chunk, remaining)
        remaining -= k
        xs = rng.standard_normal((k, n))
        ys = rng.standard_normal((k, n))
        alpha = xs[:, iu] * ys[:, ju] - xs[:, ju] * ys[:, iu]
        norm2 = np.einsum("ki,ki->k", alpha, alpha)
        ok = norm2 > 1e-12
        alpha = alpha[ok]
        norm2 = norm2[ok]
        vals = np.einsum("ki,ij,kj->k", alpha, m, alpha) / norm2
        if vals.size:
            best = min(best, float(vals.min()))
    return best


# ---------------------------------------------------------------------------
# Bound reduction and the semi-Riemannian reduction
# ---------------------------------------------------------------------------

LOWER = "LOWER"
UPPER = "UPPER"


def apply_bound_reduction(r: CurvOp, k: Rat, side: str) -> CurvOp:
    """Reduce a bound query to a nonnegativity query.

    sec >= k for R iff sec >= 0 for R - k*Id; sec <= k iff sec >= 0 for
    k*Id - R.
    """
    k = Fraction(k)
    ident = SymMatRat.identity(r.mat.dim)
    if side == LOWER:
        return CurvOp(r.n, r.mat - ident.scale(k))
    if side == UPPER:
        return CurvOp(r.n, ident.scale(k) - r.mat)
    raise ValueError("side must be LOWER or UPPER")


def g_wedge_g(sig: Signature) -> ModCurvOp:
    """Induced inner-product matrix of diag(-1...-1, 1...1) on wedge^2.

    Diagonal in the Plucker basis with entry G_ii * G_jj at the pair (i, j).
    """
    entries = []
    for (i, j) in plucker_basis(sig.n).pairs:
        gi = -1 if i <= sig.nu else 1
        gj = -1 if j <= sig.nu else 1
        entries.append(Fraction(gi * gj))
    return ModCurvOp(sig.n, SymMatRat.diag(entries))


def is_q_symmetric(rows: Sequence[Sequence[Fraction]], sig: Signature) -> bool:
    gg = g_wedge_g(sig).mat
    d = gg.dim
    if len(rows) != d or any(len(row) != d for row in rows):
        return False
    # (G^G) R symmetric <=> g_u R[u][v] == g_v R[v][u]
    for u in range(d):
        for v in range(u + 1, d):
            if gg.rows[u][u] * rows[u][v] != gg.rows[v][v] * rows[v][u]:
                return False
    return True


def psi_q(rows: Sequence[Sequence], sig: Signature) -> ModCurvOp:
    """The reduction R -> (G^G) R sending Q-symmetric operators to symmetric ones.

    Membership queries for the semi-Riemannian cone delegate to the
    Riemannian ones on the image.
    """
    mat = [[Fraction(c) for c in row] for row in rows]
    if not is_q_symmetric(mat, sig):
        raise ValueError("operator is not Q-symmetric")
    gg = g_wedge_g(sig).mat
    d = gg.dim
    out = [[gg.rows[u][u] * mat[u][v] for v in range(d)] for u in range(d)]
    return ModCurvOp(sig.n, SymMatRat(out))


# ---------------------------------------------------------------------------
# Random generation (exact, reproducible)
# ---------------------------------------------------------------------------

RANDOM_DENOMINATOR = 32


def random_sym(n: int, seed: int, magnitude: Rat = Fraction(1)) -> ModCurvOp:
    """Random symmetric matrix with entries on the grid Z/32 in [-mag, mag]."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = random.Random(seed)
    d = plucker_basis(n).dim
    lim = int(Fraction(magnitude) * RANDOM_DENOMINATOR)
    rows = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            c = Fraction(rng.randint(-lim, lim), RANDOM_DENOMINATOR)
            rows[i][j] = c
            rows[j][i] = c
    return ModCurvOp(n, SymMatRat(rows))


def random_curvop(n: int, seed: int, magnitude: Rat = Fraction(1)) -> CurvOp:
    """Bianchi projection of a random symmetric matrix; deterministic per seed."""
    return bianchi_project(random_sym(n, seed, magnitude))


def conjugate_signed_perm(
    r: ModCurvOp, perm: Sequence[int], signs: Sequence[int] | None = None
) -> ModCurvOp:
    """Conjugate by the wedge^2 lift of a signed permutation of R^n.

    ``perm`` lists the image of each 1-based index; ``signs`` are per-axis
    factors +-1.  The lift sends e_i ^ e_j to s_i s_j e_perm(i) ^ e_perm(j)
    with the orientation sign absorbed when the image pair needs reordering.
    """
    n = r.n
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n")
    sg = list(signs) if signs is not None else [1] * n
    idx = _pair_index(n)
    d = r.mat.dim
    info = []
    for (i, j) in plucker_basis(n).pairs:
        pi, pj = perm[i - 1], perm[j - 1]
        s = sg[i - 1] * sg[j - 1]
        if pi > pj:
            pi, pj = pj, pi
            s = -s
        info.append((idx[(pi, pj)], s))
    rows = [[Fraction(0)] * d for _ in range(d)]
    for u in range(d):
        tu, su = info[u]
        for v in range(d):
            tv, sv = info[v]
            rows[tu][tv] = su * sv * r.mat.rows[u][v]
    return ModCurvOp(n, SymMatRat(rows))


def ricci(r: ModCurvOp) -> SymMatRat:
    """Classical Ricci contraction Ric_st = sum_k <R(e_s ^ e_k), e_t ^ e_k>."""
    n = r.n
    idx = _pair_index(n)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for s in range(1, n + 1):
        for t in range(s, n + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if k == s or k == t:
                    continue
                sgn_s, pair_s = (1, (s, k)) if s < k else (-1, (k, s))
                sgn_t, pair_t = (1, (t, k)) if t < k else (-1, (k, t))
                acc += sgn_s * sgn_t * r.mat.rows[idx[pair_s]][idx[pair_t]]
            rows[s - 1][t - 1] = acc
            rows[t - 1][s - 1] = acc
    return SymMatRat(rows)
