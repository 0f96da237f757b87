"""Shared fixtures: reference operators, oracles, and generators."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from curvcone.exactmath import (
    NEG_INF,
    POS_INF,
    SymMatRat,
    UniPoly,
    count_roots,
    is_finite,
    psd_status_int,
    PsdStatus,
    squarefree_part,
)
from curvcone.tensorspace import (
    CurvOp,
    ModCurvOp,
    bianchi_project,
    hodge_star,
    identity_op,
    plucker_basis,
    random_sym,
)

PAIRS5 = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]


def zoltek_curvop() -> CurvOp:
    """The classical dimension-5 operator with sec >= 0 that is not a sum of
    squares modulo the Plucker ideal; stored with exact integer data and
    projected onto the Bianchi subspace at load."""
    idx = {p: i for i, p in enumerate(PAIRS5)}
    rows = [[Fraction(0)] * 10 for _ in range(10)]
    diag = {
        (1, 2): 1, (1, 3): 2, (2, 3): 2, (1, 4): 2,
        (1, 5): 1, (3, 4): 1, (2, 5): 2, (4, 5): 2,
    }
    for p, c in diag.items():
        rows[idx[p]][idx[p]] = Fraction(c)
    for p, q in [((1, 2), (3, 4)), ((1, 2), (1, 5)), ((3, 4), (1, 5))]:
        rows[idx[p]][idx[q]] = Fraction(-1)
        rows[idx[q]][idx[p]] = Fraction(-1)
    return bianchi_project(ModCurvOp(5, SymMatRat(rows)))


@pytest.fixture(scope="session")
def zoltek() -> CurvOp:
    return zoltek_curvop()


# ---------------------------------------------------------------------------
# Brute-force dimension-4 oracle: dense rational sweep of PSD status
# ---------------------------------------------------------------------------

_STAR_COUPLE = ((0, 5, 1), (1, 4, -1), (2, 3, 1))  # (i, j, sign) of the star


def sweep_oracle(r: CurvOp, step_den: int = 64):
    """Exact grid sweep of R + x * over a Gershgorin-bounded range.

    Returns ("TRUE", x) when some grid point is PSD (an exact witness);
    ("FALSE", None) when a negative diagonal entry rules every x out (the
    diagonal of R + x * does not depend on x); ("NO_WITNESS", None) when the
    grid is exhausted, which is not by itself a refutation: an isolated PSD
    shift can hide between grid points.  Beyond the scanned range no PSD
    point exists because the minimum eigenvalue of R + x * is at most
    lambda_max(R) - |x|; the limiting behaviour of det(R + x *) = -x^6 + ...
    rules out PSD tails as well.
    """
    ints, den = r.mat.int_scaled()
    if any(ints[i][i] < 0 for i in range(6)):
        return "FALSE", None
    bound = max(sum(abs(v) for v in row) for row in ints)  # Gershgorin * den
    kmax = (bound * step_den) // den + step_den
    base = [[step_den * v for v in row] for row in ints]
    for k in range(-kmax, kmax + 1):
        xc = k * den
        ok = True
        for i, j, sign in _STAR_COUPLE:
            aii, ajj = base[i][i], base[j][j]
            aij = base[i][j] + sign * xc
            if aii * ajj - aij * aij < 0:
                ok = False
                break
        if not ok:
            continue
        mat = [row[:] for row in base]
        for i, j, sign in _STAR_COUPLE:
            mat[i][j] += sign * xc
            mat[j][i] += sign * xc
        if psd_status_int(mat) is not PsdStatus.NOT_PSD:
            return "TRUE", Fraction(k, step_den)
    return "NO_WITNESS", None


# ---------------------------------------------------------------------------
# Constructed operator families
# ---------------------------------------------------------------------------


def interior_curvop(seed: int, n: int = 4) -> CurvOp:
    """Operator with strictly positive sectional curvature, by construction:
    the Bianchi projection of B'B + Id differs from B'B + Id by a multiple
    of an embedded 4-form, which positive-definite shifts absorb."""
    rng = random.Random(seed)
    d = plucker_basis(n).dim
    b = [[Fraction(rng.randint(-6, 6), 8) for _ in range(d)] for _ in range(d)]
    rows = [
        [
            sum(b[k][i] * b[k][j] for k in range(d)) + Fraction(int(i == j))
            for j in range(d)
        ]
        for i in range(d)
    ]
    return bianchi_project(ModCurvOp(n, SymMatRat(rows)))


def boundaryish_curvop(seed: int) -> CurvOp:
    """n = 4 operator on the boundary of the sec >= 0 cone (generically).

    Project S = B'B where B kills the first Plucker coordinate: S is PSD
    with kernel spanned by v = e_12, so R + x0 * = S is PSD-singular at the
    projection shift x0.  Since v pairs to zero with the Hodge star
    (<v, *v> = 2 v_12 v_34 = 0), x0 is a stationary point of the concave
    minimum-eigenvalue curve, hence its maximum: no shift does better, and
    the operator is not strictly curved."""
    rng = random.Random(seed)
    b = [
        [Fraction(0)] + [Fraction(rng.randint(-6, 6), 8) for _ in range(5)]
        for _ in range(5)
    ]
    rows = [
        [sum(b[k][i] * b[k][j] for k in range(5)) for j in range(6)]
        for i in range(6)
    ]
    return bianchi_project(ModCurvOp(4, SymMatRat(rows)))


def validate_partition(part, family) -> None:
    """Assert the three root-isolating invariants for a family partition."""
    pts = part.points
    assert pts[0] == NEG_INF and pts[-1] == POS_INF
    assert all(a < b for a, b in zip(pts, pts[1:]))
    sf_parts = [squarefree_part(p) for p in family]
    # no member vanishes at a finite partition point
    for x in pts:
        if is_finite(x):
            for p in family:
                assert p(x) != 0
    # per-interval flags match exact per-member counts; each interval holds
    # exactly one root point (of the merged family)
    merged = UniPoly([1])
    seen = set()
    for s in sf_parts:
        if s.degree >= 1 and s.coeffs not in seen:
            seen.add(s.coeffs)
            merged = merged * s
    merged = squarefree_part(merged) if merged.degree >= 1 else merged
    total_roots = (
        count_roots(merged, NEG_INF, POS_INF) if merged.degree >= 1 else 0
    )
    trivial = len(pts) == 2 and total_roots == 0
    interval_counts = []
    for j in range(part.num_intervals):
        a, b = pts[j], pts[j + 1]
        if merged.degree >= 1:
            got = count_roots(merged, a, b)
        else:
            got = 0
        interval_counts.append(got)
        if not trivial:
            assert got == 1, f"interval {j} holds {got} root points"
        for i, p in enumerate(family):
            sf = sf_parts[i]
            member_count = count_roots(sf, a, b) if sf.degree >= 1 else 0
            assert part.root_flags[j][i] == (member_count > 0)
            assert member_count <= 1
    assert sum(interval_counts) == total_roots
