"""Small helpers for multivariate polynomials as exponent-tuple dicts."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def iter_monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given total degree.

    Ordered by the underlying variable combinations, so degree 1 lists the
    variables in their natural order x_1, x_2, ...
    """
    if degree == 0:
        return ((0,) * nvars,)
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return tuple(out)


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = tuple(x + y for x, y in zip(ma, mb))
            out[key] = out.get(key, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def poly_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + scale * c
    return {m: c for m, c in out.items() if c}


def poly_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def poly_eval(a: dict, point) -> Fraction:
    total = Fraction(0)
    for mono, c in a.items():
        term = Fraction(c)
        for e, x in zip(mono, point):
            if e:
                term *= Fraction(x) ** e
        total += term
    return total
