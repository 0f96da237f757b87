"""Exact rational kernels.

Univariate polynomials over the rationals, Sturm sequences, root counting and
common root isolation for polynomial families, Sylvester resultants and
discriminants, a division-free (Berkowitz) characteristic polynomial valid
over any commutative ring, and an exact positive-semidefiniteness test for
symmetric rational matrices.

Scalars are ``fractions.Fraction`` throughout (alias :data:`Rat`); all
arithmetic is arbitrary precision.  Extended rationals (:data:`ExtRat`) admit
the two symbols :data:`NEG_INF` and :data:`POS_INF`, realised as the float
infinities, which compare correctly against every ``Fraction``.

Sign conventions fixed here and relied on elsewhere:

* ``charpoly(M)`` is det(M - lambda*Id) as a polynomial in lambda.  For a
  d x d matrix the leading coefficient is (-1)**d.
* ``discriminant_x(p)`` equals lc(p)**(2n-2) * prod_{i<j} (r_i - r_j)**2 over
  the complex roots r_i, computed as
  (-1)**(n(n-1)/2) * resultant(p, p') / lc(p).
* The elementary symmetric functions of the eigenvalues of a symmetric d x d
  matrix are sigma_i = (-1)**i * c_{d-i} where c_k is the lambda**k
  coefficient of ``charpoly``; the matrix is PSD iff all sigma_i >= 0 and
  positive definite iff all sigma_i > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction

NEG_INF = float("-inf")
POS_INF = float("inf")

#: Extended rational: a Fraction, or one of NEG_INF / POS_INF.
ExtRat = Union[Fraction, float]


def is_finite(x: ExtRat) -> bool:
    return not isinstance(x, float)


def rat_sign(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Univariate polynomial, coefficients stored lowest degree first.

    The zero polynomial has an empty coefficient tuple.  Coefficients are
    usually ``Fraction``; any commutative-ring elements supporting +, -, *
    and truthiness work as well (in particular ``UniPoly`` itself, giving
    polynomials in a second variable, and plain ``int``).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # trims trailing zeros
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        """Leading coefficient (raises on the zero polynomial)."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return "UniPoly(" + " + ".join(terms) + ")"

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return UniPoly()
            return UniPoly([c * other for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = UniPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- evaluation and calculus --------------------------------------------

    def __call__(self, x):
        """Horner evaluation; exact for Fraction arguments, and works for
        ring-valued arguments such as another UniPoly (composition)."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def sign_at(self, x: ExtRat) -> int:
        """Sign of the polynomial at an extended rational point.

        At +/-infinity the sign is the limit sign: sign(lc) at +inf and
        sign(lc) * (-1)**degree at -inf.  Constants keep their sign.
        """
        if not self.coeffs:
            return 0
        if isinstance(x, float):
            s = rat_sign(self.lc)
            if x == POS_INF:
                return s
            if x == NEG_INF:
                return s if self.degree % 2 == 0 else -s
            raise ValueError("finite float evaluation point")
        ints, _ = self.int_coeffs()
        return _int_sign_at(ints, x)

    def int_coeffs(self) -> tuple[list[int], int]:
        """Return (c, d) with integer c and positive d so that self = c / d."""
        if not self.coeffs:
            return [], 1
        d = 1
        for c in self.coeffs:
            d = d * c.denominator // math.gcd(d, c.denominator)
        return [int(c * d) for c in self.coeffs], d

    def primitive(self) -> "UniPoly":
        """Integer-coefficient scalar multiple with content 1 and lc > 0."""
        if not self.coeffs:
            return self
        ints, _ = self.int_coeffs()
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return UniPoly([Fraction(c, g) for c in ints])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return UniPoly([c * inv for c in self.coeffs])

    def shifted(self, s: Fraction) -> "UniPoly":
        """The polynomial x -> p(x + s)."""
        return self(UniPoly([Fraction(s), Fraction(1)]))


def poly_divmod(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Euclidean division over the rationals."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = []
    rem = list(a.coeffs)
    db, lb = b.degree, b.lc
    while len(rem) - 1 >= db and rem:
        c = rem[-1] / lb
        k = len(rem) - 1 - db
        q.append((k, c))
        for i, bc in enumerate(b.coeffs):
            rem[k + i] -= c * bc
        while rem and not rem[-1]:
            rem.pop()
    qc = [Fraction(0)] * (max((k for k, _ in q), default=-1) + 1)
    for k, c in q:
        qc[k] = c
    return UniPoly(qc), UniPoly(rem)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the rationals (0 for two zero inputs)."""
    a, b = a.primitive(), b.primitive()
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r.primitive() if r else r
    return a.monic() if a else a


def squarefree_part(p: UniPoly) -> UniPoly:
    """p / gcd(p, p'), normalised primitive with positive leading coefficient."""
    if not p:
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return UniPoly([1])
    g = poly_gcd(p, p.derivative())
    q, r = poly_divmod(p, g)
    assert not r
    return q.primitive()


# ---------------------------------------------------------------------------
# Integer fast paths (signs, Sturm chains)
# ---------------------------------------------------------------------------


def _int_sign_at(coeffs: list[int], x: Fraction) -> int:
    """Sign of an integer-coefficient polynomial at a rational point."""
    if not coeffs:
        return 0
    p, q = x.numerator, x.denominator
    acc = coeffs[-1]
    qpow = 1
    for c in reversed(coeffs[:-1]):
        qpow *= q
        acc = acc * p + c * qpow
    return (acc > 0) - (acc < 0)


def _int_limit_sign(coeffs: list[int], positive: bool) -> int:
    if not coeffs:
        return 0
    s = (coeffs[-1] > 0) - (coeffs[-1] < 0)
    if positive or (len(coeffs) - 1) % 2 == 0:
        return s
    return -s


def _int_ext_sign(coeffs: list[int], x: ExtRat) -> int:
    if isinstance(x, float):
        return _int_limit_sign(coeffs, x == POS_INF)
    return _int_sign_at(coeffs, x)


def _int_primitive(coeffs: list[int]) -> list[int]:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    return [c // g for c in coeffs] if g > 1 else list(coeffs)


def _int_derivative(coeffs: list[int]) -> list[int]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _int_neg_rem(a: list[int], b: list[int]) -> list[int]:
    """Primitive-normalised -rem(a, b) for integer polynomials.

    Computed fraction-free: every reduction step premultiplies by lc(b), so
    the final value is lc(b)**steps times the true remainder.  The sign of
    that factor is undone before negating, hence the result has the exact
    sign structure Sturm chains need.
    """
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = 0
    while rem and len(rem) - 1 >= db:
        c = rem[-1]
        k = len(rem) - 1 - db
        rem = [x * lb for x in rem]
        steps += 1
        for i, bc in enumerate(b):
            rem[k + i] -= c * bc
        while rem and rem[-1] == 0:
            rem.pop()
    if not rem:
        return []
    if lb < 0 and steps % 2 == 1:
        rem = [-x for x in rem]
    return _int_primitive([-x for x in rem])


def _sturm_chain_int(coeffs: list[int]) -> list[list[int]]:
    """Content-normalised Sturm chain of an integer polynomial."""
    chain = [_int_primitive(coeffs)]
    d = _int_derivative(coeffs)
    if d:
        chain.append(_int_primitive(d))
        while len(chain[-1]) > 1:
            nxt = _int_neg_rem(chain[-2], chain[-1])
            if not nxt:
                break
            chain.append(nxt)
    return chain


def _sign_variations(signs: Iterable[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _chain_variations_at(chain: list[list[int]], x: ExtRat) -> int:
    return _sign_variations(_int_ext_sign(p, x) for p in chain)


def _count_roots_chain(chain: list[list[int]], a: ExtRat, b: ExtRat) -> int:
    return _chain_variations_at(chain, a) - _chain_variations_at(chain, b)


# ---------------------------------------------------------------------------
# Sturm sequences and root counting (public, spec semantics)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SturmSeq:
    """Signed-remainder sequence (p, p', -rem(p, p'), ...)."""

    polys: tuple[UniPoly, ...]


def sturm_sequence(p: UniPoly) -> SturmSeq:
    """Standard Sturm sequence of (p, p').

    For squarefree p the last entry is a nonzero constant.  Inputs with
    repeated roots terminate at (a scalar multiple of) gcd(p, p'); callers
    interested in root counting should pass ``squarefree_part(p)``.
    """
    if not p:
        raise ValueError("zero polynomial")
    seq = [p]
    d = p.derivative()
    if d:
        seq.append(d)
    while len(seq) >= 2 and seq[-1]:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(-r)
    return SturmSeq(tuple(seq))


def count_roots(p: UniPoly, a: ExtRat, b: ExtRat) -> int:
    """Number of distinct real roots of p in (a, b].

    Signs at +/-infinity are taken as limits.  Raises if an endpoint is a
    root of p, or if not a < b.
    """
    if not p:
        raise ValueError("zero polynomial")
    if not a < b:
        raise ValueError("empty interval: need a < b")
    sf = squarefree_part(p)
    ints, _ = sf.int_coeffs()
    if _int_ext_sign(ints, a) == 0 or _int_ext_sign(ints, b) == 0:
        raise ValueError("endpoint vanishes")
    chain = _sturm_chain_int(ints)
    return _count_roots_chain(chain, a, b)


# ---------------------------------------------------------------------------
# Common root isolation for a family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatingPartition:
    """Common root-isolating partition for a family of polynomials.

    ``points`` is strictly increasing, starting at NEG_INF and ending at
    POS_INF.  Unless the family has no real roots at all, every interval
    (points[j], points[j+1]) contains exactly one point that is a root of at
    least one family member, no member vanishes at a finite partition point,
    and ``root_flags[j][i]`` says whether member i has a root in interval j.
    """

    points: tuple[ExtRat, ...]
    root_flags: tuple[tuple[bool, ...], ...]

    @property
    def num_intervals(self) -> int:
        return len(self.points) - 1


def _cauchy_bound(coeffs: list[int]) -> Fraction:
    lead = abs(coeffs[-1])
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else 0
    return 1 + Fraction(m, lead)


def _isolate_squarefree(g: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint closed intervals, one per real root of squarefree g.

    Interval endpoints are dyadic rationals and are never roots, except for
    degenerate intervals [r, r] marking an exactly-rational root r.
    """
    ints, _ = g.int_coeffs()
    chain = _sturm_chain_int(ints)
    total = _count_roots_chain(chain, NEG_INF, POS_INF)
    if total == 0:
        return []
    bound = _cauchy_bound(ints)
    b = Fraction(1)
    while b <= bound or _int_sign_at(ints, b) == 0 or _int_sign_at(ints, -b) == 0:
        b *= 2
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-b, b, total)]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _int_sign_at(ints, mid) == 0:
            # mid is itself a root; carve out a punctured neighbourhood
            h = (hi - lo) / 4
            while (
                _int_sign_at(ints, mid - h) == 0
                or _int_sign_at(ints, mid + h) == 0
                or _count_roots_chain(chain, mid - h, mid + h) != 1
            ):
                h /= 2
            out.append((mid, mid))
            kl = _count_roots_chain(chain, lo, mid - h)
            kr = _count_roots_chain(chain, mid + h, hi)
            stack.append((lo, mid - h, kl))
            stack.append((mid + h, hi, kr))
        else:
            kl = _count_roots_chain(chain, lo, mid)
            stack.append((lo, mid, kl))
            stack.append((mid, hi, k - kl))
    out.sort()
    return out


def isolate_family(ps: Sequence[UniPoly]) -> IsolatingPartition:
    """Common root-isolating partition for a finite polynomial family."""
    if not ps:
        raise ValueError("empty family")
    for p in ps:
        if not p:
            raise ValueError("zero polynomial in family")
    sf_parts = []
    seen = set()
    for p in ps:
        s = squarefree_part(p)
        if s.degree >= 1 and s.coeffs not in seen:
            seen.add(s.coeffs)
            sf_parts.append(s)
    if not sf_parts:
        return IsolatingPartition(
            (NEG_INF, POS_INF), ((False,) * len(ps),)
        )
    prod = UniPoly([1])
    for s in sf_parts:
        prod = prod * s
    g = squarefree_part(prod)
    intervals = _isolate_squarefree(g)
    if not intervals:
        return IsolatingPartition(
            (NEG_INF, POS_INF), ((False,) * len(ps),)
        )
    points: list[ExtRat] = [NEG_INF]
    for (l0, r0), (l1, _) in zip(intervals, intervals[1:]):
        points.append(r0 if r0 == l1 else (r0 + l1) / 2)
    points.append(POS_INF)
    member_chains = []
    for p in ps:
        sf = squarefree_part(p)
        if sf.degree < 1:
            member_chains.append(None)
        else:
            ints, _ = sf.int_coeffs()
            member_chains.append(_sturm_chain_int(ints))
    flags = []
    for j in range(len(points) - 1):
        a, b = points[j], points[j + 1]
        row = []
        for chain in member_chains:
            if chain is None:
                row.append(False)
            else:
                row.append(_count_roots_chain(chain, a, b) > 0)
        flags.append(tuple(row))
    return IsolatingPartition(tuple(points), tuple(flags))


# ---------------------------------------------------------------------------
# Determinants, resultants, discriminants
# ---------------------------------------------------------------------------


def _bareiss_det(mat: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pk - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pk
    return sign * m[n - 1][n - 1]


def sylvester_matrix(p: UniPoly, q: UniPoly) -> list[list[Fraction]]:
    """Sylvester matrix of p and q (rows of shifted coefficients)."""
    n, m = p.degree, q.degree
    if n < 0 or m < 0:
        raise ValueError("zero polynomial")
    size = n + m
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    rows = []
    for i in range(m):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - i - n - 1))
    for i in range(n):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - i - m - 1))
    return rows


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant via the Sylvester determinant, computed fraction-free."""
    rows = sylvester_matrix(p, q)
    if not rows:
        return Fraction(1)
    den = 1
    for row in rows:
        for c in row:
            den = den * c.denominator // math.gcd(den, c.denominator)
    int_rows = [[int(c * den) for c in row] for row in rows]
    det = _bareiss_det(int_rows)
    return Fraction(det, den ** len(rows))


def discriminant_x(p: UniPoly) -> Fraction:
    """Discriminant lc**(2n-2) * prod_{i<j}(r_i - r_j)**2 of p, deg p >= 1."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant requires degree >= 1")
    if n == 1:
        return Fraction(1)
    res = resultant(p, p.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / p.lc


# ---------------------------------------------------------------------------
# Division-free characteristic polynomial (Berkowitz)
# ---------------------------------------------------------------------------


def sum_ring(items):
    it = iter(items)
    acc = next(it)
    for x in it:
        acc = acc + x
    return acc


def berkowitz_charpoly(rows: Sequence[Sequence]) -> list:
    """Coefficients of det(M - lambda*Id), lowest lambda-degree first.

    Division-free, hence valid over any commutative ring: entries may be
    ints, Fractions, or UniPoly (polynomial entries).  The returned list has
    length dim+1 with leading coefficient (-1)**dim.
    """
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix")
    # poly[k] holds coefficients of det(lambda*Id - M_k), descending powers,
    # for the leading k x k principal submatrix M_k.
    poly = [1, -rows[0][0]]
    for k in range(2, n + 1):
        a = rows[k - 1][k - 1]
        col = [rows[i][k - 1] for i in range(k - 1)]
        row = [rows[k - 1][j] for j in range(k - 1)]
        # Toeplitz column: [1, -a, -R C, -R M C, -R M^2 C, ...]
        t = [1, -a]
        v = col
        for _ in range(k - 1):
            s = row[0] * v[0]
            for i in range(1, k - 1):
                s = s + row[i] * v[i]
            t.append(-s)
            if len(t) == k + 1:
                break
            v = [
                sum_ring(rows[i][j] * v[j] for j in range(k - 1))
                for i in range(k - 1)
            ]
        new = []
        for i in range(k + 1):
            s = None
            for j in range(max(0, i - len(t) + 1), min(i, k - 1) + 1):
                term = t[i - j] * poly[j]
                s = term if s is None else s + term
            new.append(s)
        poly = new
    # poly = det(lambda*Id - M) descending; convert to det(M - lambda*Id)
    # ascending: multiply by (-1)**n and reverse.
    if n % 2:
        poly = [-c for c in poly]
    return list(reversed(poly))


def charpoly(rows) -> UniPoly:
    """det(M - lambda*Id) as a UniPoly in lambda over the entry ring."""
    if isinstance(rows, SymMatRat):
        rows = rows.rows
    return UniPoly(berkowitz_charpoly(rows))


# ---------------------------------------------------------------------------
# Symmetric rational matrices and exact PSD testing
# ---------------------------------------------------------------------------


class SymMatRat:
    """Immutable symmetric matrix with Fraction entries."""

    __slots__ = ("dim", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        mat = tuple(tuple(Fraction(c) for c in row) for row in rows)
        d = len(mat)
        for row in mat:
            if len(row) != d:
                raise ValueError("matrix is not square")
        for i in range(d):
            for j in range(i):
                if mat[i][j] != mat[j][i]:
                    raise ValueError("matrix is not symmetric")
        self.dim = d
        self.rows = mat

    @classmethod
    def identity(cls, d: int) -> "SymMatRat":
        return cls([[Fraction(int(i == j)) for j in range(d)] for i in range(d)])

    @classmethod
    def zeros(cls, d: int) -> "SymMatRat":
        return cls([[Fraction(0)] * d for _ in range(d)])

    @classmethod
    def diag(cls, entries: Sequence) -> "SymMatRat":
        d = len(entries)
        return cls(
            [[Fraction(entries[i]) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, SymMatRat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SymMatRat({[list(map(str, r)) for r in self.rows]})"

    def __add__(self, other: "SymMatRat") -> "SymMatRat":
        self._check(other)
        return SymMatRat(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "SymMatRat") -> "SymMatRat":
        self._check(other)
        return SymMatRat(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "SymMatRat":
        return SymMatRat([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "SymMatRat":
        c = Fraction(c)
        return SymMatRat([[a * c for a in r] for r in self.rows])

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")

    def frobenius(self, other: "SymMatRat") -> Fraction:
        self._check(other)
        return sum(
            a * b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    def matmul(self, other: "SymMatRat") -> tuple[tuple[Fraction, ...], ...]:
        """Plain matrix product (generally not symmetric)."""
        self._check(other)
        d = self.dim
        cols = list(zip(*other.rows))
        return tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.rows
        )

    def quad_form(self, vec: Sequence[Fraction]) -> Fraction:
        """v^T M v."""
        return sum(
            self.rows[i][j] * vec[i] * vec[j]
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum(a * v for a, v in zip(row, vec)) for row in self.rows]

    def to_float(self):
        import numpy as np

        return np.array([[float(a) for a in r] for r in self.rows], dtype=float)

    def int_scaled(self) -> tuple[list[list[int]], int]:
        """Return (N, d) with integer N and positive d so that self = N / d."""
        den = 1
        for row in self.rows:
            for c in row:
                den = den * c.denominator // math.gcd(den, c.denominator)
        return [[int(c * den) for c in row] for row in self.rows], den


class PsdStatus(Enum):
    POSITIVE_DEFINITE = "POSITIVE_DEFINITE"
    PSD_SINGULAR = "PSD_SINGULAR"
    NOT_PSD = "NOT_PSD"


def eigen_symmetric_functions(m: SymMatRat) -> list[Fraction]:
    """sigma_1 .. sigma_d, the elementary symmetric functions of the eigenvalues.

    From det(M - lambda*Id) = sum_k c_k lambda**k one has
    c_{d-i} = (-1)**(d-i) * sigma_i.
    """
    ints, den = m.int_scaled()
    coeffs = berkowitz_charpoly(ints)
    d = m.dim
    out = []
    for i in range(1, d + 1):
        c = coeffs[d - i]
        sigma_scaled = c if (d - i) % 2 == 0 else -c
        out.append(Fraction(sigma_scaled, den**i))
    return out


def psd_status_int(int_rows: list[list[int]]) -> PsdStatus:
    """Exact PSD verdict for an integer symmetric matrix."""
    d = len(int_rows)
    coeffs = berkowitz_charpoly(int_rows)
    singular = False
    for i in range(1, d + 1):
        c = coeffs[d - i]
        sigma = c if (d - i) % 2 == 0 else -c
        if sigma < 0:
            return PsdStatus.NOT_PSD
        if sigma == 0:
            singular = True
    return PsdStatus.PSD_SINGULAR if singular else PsdStatus.POSITIVE_DEFINITE


def psd_status(m: SymMatRat) -> PsdStatus:
    """Exact PSD classification from the charpoly coefficient signs."""
    ints, _ = m.int_scaled()
    return psd_status_int(ints)
