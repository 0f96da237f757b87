"""Exact decision procedures for sectional curvature bounds in dimension 4.

The key fact: a 4-dimensional curvature operator R has sec >= 0 exactly when
R + x * is positive semidefinite for some real x, where * is the Hodge star
(and sec > 0 with positive definite).  Writing

    det(R + x * - lambda Id) = lambda^6 + sum_i (-1)^i sigma_i(x) lambda^(6-i)

the sigma_i are the elementary symmetric functions of the eigenvalues of
R + x *, so the query becomes a sign condition on six univariate polynomials,
decided exactly with Sturm root isolation.  The boundary of the sec >= 0 cone
is cut out by the discriminant in x of det(R - k Id + x *).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactmath import (
    NEG_INF,
    POS_INF,
    ExtRat,
    IsolatingPartition,
    PsdStatus,
    Rat,
    SymMatRat,
    UniPoly,
    charpoly,
    discriminant_x,
    is_finite,
    isolate_family,
    psd_status,
    squarefree_part,
    count_roots,
)
from .tensorspace import LOWER, CurvOp, apply_bound_reduction, hodge_star


@dataclass(frozen=True)
class ParamCharPoly:
    """The six coefficient polynomials sigma_1(x) .. sigma_6(x)."""

    sigma: tuple[UniPoly, ...]

    def __post_init__(self):
        if len(self.sigma) != 6:
            raise ValueError("expected six coefficient polynomials")


def _as_unipoly(c) -> UniPoly:
    return c if isinstance(c, UniPoly) else UniPoly([c])


def param_charpoly(r: CurvOp) -> ParamCharPoly:
    """Exact sigma_i(x) for R + x *, n = 4 only.

    Division-free characteristic polynomial over the ring of polynomials in
    x; deg sigma_i <= i always holds.
    """
    if r.n != 4:
        raise ValueError("param_charpoly requires n = 4")
    star = hodge_star()
    rows = []
    for i in range(6):
        row = []
        for j in range(6):
            row.append(UniPoly([r.mat.rows[i][j], star.rows[i][j]]))
        rows.append(row)
    coeffs = charpoly(rows).coeffs  # lambda-coefficients, each in Q[x]
    sigma = []
    for i in range(1, 7):
        c = _as_unipoly(coeffs[6 - i])
        s = c if i % 2 == 0 else -c
        if s.degree > i:
            raise AssertionError("sigma_i degree exceeds i")
        sigma.append(s)
    return ParamCharPoly(tuple(sigma))


def defining_poly(r: CurvOp, k: Rat = Fraction(0)) -> Rat:
    """Discriminant in x of det(R - k Id + x *); zero exactly on the
    algebraic boundary of the sec >= k cone.

    The x-polynomial always has degree exactly 6 with leading coefficient
    det(*) = -1, so the discriminant normalisation is unambiguous.
    """
    shifted = apply_bound_reduction(r, k, LOWER)
    det_poly = param_charpoly(shifted).sigma[5]
    if det_poly.degree != 6 or det_poly.lc != -1:
        raise AssertionError("det(R - kId + x*) must have degree 6, lc -1")
    return discriminant_x(det_poly)


# ---------------------------------------------------------------------------
# Sign-condition queries over a common root-isolating partition
# ---------------------------------------------------------------------------


def _sigma_partition(pc: ParamCharPoly):
    """Isolating partition of the nonzero sigma_i (zero ones carry no roots)."""
    nonzero = [s for s in pc.sigma if s]
    part = isolate_family(nonzero)
    return part, nonzero


def query_sec_gt(r: CurvOp) -> bool:
    """Decide sec_R > 0 for n = 4.

    True iff some partition point a_j has sigma_i(a_j) > 0 for all i, signs
    at +-infinity taken as leading-coefficient limits.  An identically zero
    sigma_i makes R + x * singular for every x, so the answer is False.
    """
    pc = param_charpoly(r)
    if any(not s for s in pc.sigma):
        return False
    part, _ = _sigma_partition(pc)
    for pt in part.points:
        if all(s.sign_at(pt) > 0 for s in pc.sigma):
            return True
    return False


def _accepting_interval(pc: ParamCharPoly, part: IsolatingPartition) -> Optional[int]:
    """First interval passing the root-between-negative-endpoints test.

    An interval (a_j, a_j+1) accepts when every sigma_i that is negative at
    both endpoints has its (necessarily unique) root inside.  Identically
    zero sigma_i never test negative and need no root.
    """
    nonzero_idx = [i for i, s in enumerate(pc.sigma) if s]
    for j in range(part.num_intervals):
        a, b = part.points[j], part.points[j + 1]
        ok = True
        for col, i in enumerate(nonzero_idx):
            s = pc.sigma[i]
            if s.sign_at(a) < 0 and s.sign_at(b) < 0:
                if not part.root_flags[j][col]:
                    ok = False
                    break
        if ok:
            return j
    return None


def query_sec_geq(r: CurvOp) -> bool:
    """Decide sec_R >= 0 for n = 4 by the interval acceptance test."""
    if r.n != 4:
        raise ValueError("query_sec_geq requires n = 4")
    pc = param_charpoly(r)
    part, _ = _sigma_partition(pc)
    return _accepting_interval(pc, part) is not None


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FtCertificate:
    """Witness for sec_R >= 0: a shift x0 with R + x0 * PSD.

    RATIONAL_POINT carries the exact rational x0 in ``value``.  ISOLATED_ROOT
    carries an isolating interval for an irrational x0 together with a
    squarefree integer polynomial vanishing at x0 and nowhere else in the
    interval.  ``strict`` means R + x0 * is positive definite.
    """

    kind: str  # "RATIONAL_POINT" | "ISOLATED_ROOT"
    strict: bool
    value: Optional[Fraction] = None
    interval: Optional[tuple[Fraction, Fraction]] = None
    poly: Optional[UniPoly] = None


RATIONAL_POINT = "RATIONAL_POINT"
ISOLATED_ROOT = "ISOLATED_ROOT"


def _rational_roots_in(p: UniPoly, lo: ExtRat, hi: ExtRat) -> list[Fraction]:
    """Rational roots of p strictly inside (lo, hi), by the rational root test."""
    prim = p.primitive()
    ints, _ = prim.int_coeffs()
    shift = 0
    while ints and ints[0] == 0:
        ints = ints[1:]
        shift += 1
    roots = []
    if shift and (lo < 0 < hi):
        roots.append(Fraction(0))
    if len(ints) > 1:
        a0, an = abs(ints[0]), abs(ints[-1])
        for p_div in _divisors(a0):
            for q_div in _divisors(an):
                for cand in (Fraction(p_div, q_div), Fraction(-p_div, q_div)):
                    if lo < cand < hi and prim(cand) == 0 and cand not in roots:
                        roots.append(cand)
    return sorted(roots)


def _divisors(m: int) -> list[int]:
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
        d += 1
    return sorted(out)


def _psd_at(r: CurvOp, x0: Fraction) -> PsdStatus:
    return psd_status(r.mat + hodge_star().scale(x0))


def ft_certificate(r: CurvOp) -> Optional[FtCertificate]:
    """Certificate for sec_R >= 0 (n = 4), or None when it fails.

    Preference order: a rational partition point where all sigma_i are
    positive (strict), else the unique witness root of the accepting
    interval, returned as an exact rational when it is one and as an
    isolating interval with an annihilating squarefree polynomial otherwise.
    """
    if r.n != 4:
        raise ValueError("ft_certificate requires n = 4")
    pc = param_charpoly(r)
    part, nonzero = _sigma_partition(pc)
    has_zero_sigma = any(not s for s in pc.sigma)

    for pt in part.points:
        if is_finite(pt) and all(s.sign_at(pt) > 0 for s in nonzero):
            status = _psd_at(r, pt)
            strict = status is PsdStatus.POSITIVE_DEFINITE
            assert strict == (not has_zero_sigma)
            return FtCertificate(RATIONAL_POINT, strict=strict, value=pt)

    j = _accepting_interval(pc, part)
    if j is None:
        return None
    lo, hi = part.points[j], part.points[j + 1]
    # The accepting interval holds exactly one root point of the family; it
    # is the witness.  Find a member vanishing there.
    nonzero_idx = [i for i, s in enumerate(pc.sigma) if s]
    witness_polys = [
        squarefree_part(pc.sigma[i])
        for col, i in enumerate(nonzero_idx)
        if part.root_flags[j][col]
    ]
    if not witness_polys:
        # all sigma positive throughout; any interior rational point works
        pt = _finite_interior_point(lo, hi)
        status = _psd_at(r, pt)
        return FtCertificate(
            RATIONAL_POINT, strict=status is PsdStatus.POSITIVE_DEFINITE, value=pt
        )
    w = witness_polys[0]
    rational = _rational_roots_in(w, lo, hi)
    if rational:
        x0 = rational[0]
        status = _psd_at(r, x0)
        assert status is not PsdStatus.NOT_PSD
        return FtCertificate(RATIONAL_POINT, strict=False, value=x0)
    lo_f, hi_f = _refine_root_interval(w, lo, hi)
    return FtCertificate(
        ISOLATED_ROOT, strict=False, interval=(lo_f, hi_f), poly=w.primitive()
    )


def _finite_interior_point(lo: ExtRat, hi: ExtRat) -> Fraction:
    if is_finite(lo) and is_finite(hi):
        return (lo + hi) / 2
    if is_finite(lo):
        return lo + 1
    if is_finite(hi):
        return hi - 1
    return Fraction(0)


def _refine_root_interval(
    w: UniPoly, lo: ExtRat, hi: ExtRat, width: Fraction = Fraction(1, 2**16)
) -> tuple[Fraction, Fraction]:
    """Shrink (lo, hi) around the unique root of w inside it by bisection."""
    ints, _ = w.int_coeffs()
    from .exactmath import _int_ext_sign, _int_sign_at, _sturm_chain_int, _count_roots_chain

    chain = _sturm_chain_int(ints)
    # replace infinite ends by finite brackets that still contain the root
    if not is_finite(lo) or not is_finite(hi):
        b = Fraction(1)
        while True:
            flo = lo if is_finite(lo) else -b
            fhi = hi if is_finite(hi) else b
            if (
                flo < fhi
                and _int_sign_at(ints, flo) != 0
                and _int_sign_at(ints, fhi) != 0
                and _count_roots_chain(chain, flo, fhi) == 1
            ):
                lo, hi = flo, fhi
                break
            b *= 2
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _int_sign_at(ints, mid) == 0:
            # rational root; callers only reach here when there is none
            raise AssertionError("unexpected rational root during refinement")
        if _count_roots_chain(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def verify_ft_certificate(r: CurvOp, cert: FtCertificate) -> bool:
    """Exact re-verification of a certificate against R.

    Rational points are checked by a PSD test at the point.  Isolated roots
    are checked by the sign conditions at the interval endpoints: the
    interval must contain exactly one root of the annihilating polynomial,
    no sigma_i may vanish at the endpoints, and every sigma_i negative at
    both endpoints must have a root inside (then its value at the root is
    zero and all others are nonnegative there).
    """
    pc = param_charpoly(r)
    if cert.kind == RATIONAL_POINT:
        status = _psd_at(r, cert.value)
        if status is PsdStatus.NOT_PSD:
            return False
        return status is PsdStatus.POSITIVE_DEFINITE if cert.strict else True
    lo, hi = cert.interval
    if not cert.poly or count_roots(cert.poly, lo, hi) != 1:
        return False
    for s in pc.sigma:
        if not s:
            continue
        sa, sb = s.sign_at(lo), s.sign_at(hi)
        if sa == 0 or sb == 0:
            return False
        if sa < 0 and sb < 0:
            sf = squarefree_part(s)
            if count_roots(sf, lo, hi) != 1:
                return False
            # its root must be the certified one: both vanish inside an
            # interval holding a single root of each
            if _resultant_coprime(sf, cert.poly, lo, hi):
                return False
        elif sa < 0 or sb < 0:
            # sign change: root inside, must again be the certified point
            sf = squarefree_part(s)
            if _resultant_coprime(sf, cert.poly, lo, hi):
                return False
    return True


def _resultant_coprime(f: UniPoly, g: UniPoly, lo: Fraction, hi: Fraction) -> bool:
    """True if f and g share no root in (lo, hi)."""
    from .exactmath import poly_gcd

    h = poly_gcd(f, g)
    if h.degree < 1:
        return True
    return count_roots(h, lo, hi) == 0


def query_bound(r: CurvOp, k: Rat, side: str, strict: bool) -> bool:
    """Bound query via reduction to the nonnegativity queries."""
    reduced = apply_bound_reduction(r, k, side)
    return query_sec_gt(reduced) if strict else query_sec_geq(reduced)
