"""Inner relaxation: sums of squares modulo the Plucker ideal.

A curvature operator R, read as a quadratic form q_R in the Plucker
coordinates, lies in the m-th inner set when r**m * q_R (r the sum of squared
coordinates) is a sum of squares of degree-(m+1) forms plus an element of the
degree-(2m+2) slice of the Plucker ideal.  That is a semidefinite
feasibility problem: a Gram matrix over the degree-(m+1) monomials together
with free multipliers, one per (generator, degree-2m monomial) pair, matched
coefficient by coefficient against r**m * q_R.

Verdicts are three-valued: YES carries a Gram certificate with its residual,
NO_CERTIFICATE carries a verified dual ray, everything else is INCONCLUSIVE.
A YES certificate can additionally be hardened: the Gram matrix is rounded
to rationals, projected exactly onto the constraint space, and re-checked
for positive semidefiniteness in exact arithmetic.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._poly import iter_monomials, poly_add, poly_mul
from .exactmath import PsdStatus, SymMatRat, psd_status
from .sdp import (
    FEASIBLE,
    INFEASIBLE,
    DualRay,
    SdpProblem,
    constraint_residual,
    solve,
)
from .tensorspace import CurvOp, ModCurvOp, plucker_basis, wedge4_basis_embeddings

YES = "YES"
NO_CERTIFICATE = "NO_CERTIFICATE"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_SIZE_CAP = 64
SIZE_CAP_ENV = "CURVCONE_MAX_PROBLEM_DIM"

#: constraint counts above this skip the exact rational hardening attempt
HARDEN_CONSTRAINT_CAP = 160


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True)
class QuadForm:
    """Degree-2 form in the Plucker coordinates (a class representative)."""

    n: int
    representative: ModCurvOp


@dataclass(frozen=True)
class PluckerIdealBasis:
    n: int
    generators: tuple[ModCurvOp, ...]


def plucker_ideal(n: int) -> PluckerIdealBasis:
    """The C(n,4) quadratic generators cutting out the decomposable cone."""
    return PluckerIdealBasis(n, tuple(wedge4_basis_embeddings(n)))


def _quad_poly(op: ModCurvOp) -> dict:
    """Quadratic polynomial of a symmetric matrix: x' Q x as a monomial dict."""
    nvars = op.mat.dim
    out: dict = {}
    for u in range(nvars):
        for v in range(u, nvars):
            c = op.mat.rows[u][v]
            if not c:
                continue
            e = [0] * nvars
            e[u] += 1
            e[v] += 1
            out[tuple(e)] = c if u == v else 2 * c
    return out


def multiply_by_r_power(p: QuadForm, m: int) -> dict:
    """Exact expansion of (sum of squared coordinates)**m times the form."""
    if m < 0:
        raise ValueError("need m >= 0")
    nvars = plucker_basis(p.n).dim
    poly = _quad_poly(p.representative)
    r = {}
    for u in range(nvars):
        e = [0] * nvars
        e[u] = 2
        r[tuple(e)] = Fraction(1)
    for _ in range(m):
        poly = poly_mul(poly, r)
    return poly


@dataclass
class SosSystem:
    """Exact mirror of the SOS feasibility system (used for hardening)."""

    n: int
    m: int
    gram_monos: tuple
    constraint_monos: tuple
    mult_monos: tuple
    num_generators: int
    target: list[Fraction]          # per constraint monomial
    free_cols: list[dict]           # per multiplier: {constraint_idx: int coeff}


def _build_system(p: QuadForm, m: int) -> tuple[SdpProblem, SosSystem]:
    n = p.n
    nvars = plucker_basis(n).dim
    gram_monos = iter_monomials(nvars, m + 1)
    cons_monos = iter_monomials(nvars, 2 * m + 2)
    mult_monos = iter_monomials(nvars, 2 * m)
    cons_index = {mono: i for i, mono in enumerate(cons_monos)}
    g = len(gram_monos)
    mm = len(cons_monos)

    stack = np.zeros((mm, g, g))
    for bi in range(g):
        for bj in range(bi, g):
            mu = tuple(x + y for x, y in zip(gram_monos[bi], gram_monos[bj]))
            row = cons_index[mu]
            stack[row, bi, bj] = 1.0
            stack[row, bj, bi] = 1.0

    gens = plucker_ideal(n).generators
    gen_polys = [_quad_poly(gk) for gk in gens]
    n_mult = len(gens) * len(mult_monos)
    fmat = np.zeros((mm, n_mult)) if n_mult else None
    free_cols: list[dict] = []
    col = 0
    for gp in gen_polys:
        for eta in mult_monos:
            entries: dict = {}
            for mono2, c2 in gp.items():
                mu = tuple(x + y for x, y in zip(eta, mono2))
                idx = cons_index[mu]
                entries[idx] = entries.get(idx, 0) + int(c2)
            for idx, val in entries.items():
                if fmat is not None:
                    fmat[idx, col] = float(val)
            free_cols.append(entries)
            col += 1

    target_poly = multiply_by_r_power(p, m)
    target = [Fraction(0)] * mm
    for mono, c in target_poly.items():
        target[cons_index[mono]] = Fraction(c)
    b = np.array([float(t) for t in target])

    problem = SdpProblem([g], [stack], b, free_coeffs=fmat)
    system = SosSystem(
        n=n, m=m, gram_monos=gram_monos, constraint_monos=cons_monos,
        mult_monos=mult_monos, num_generators=len(gens), target=target,
        free_cols=free_cols,
    )
    return problem, system


def build_sos_sdp(p: QuadForm, m: int) -> SdpProblem:
    """Feasibility problem: Gram matrix over degree-(m+1) monomials plus free
    ideal multipliers, matched against r**m times the form."""
    problem, _ = _build_system(p, m)
    return problem


@dataclass
class SosCertificate:
    """Gram-matrix witness that r**m * q_R is SOS modulo the ideal."""

    m: int
    gram: np.ndarray
    ideal_coeffs: Optional[np.ndarray]
    residual: float
    gram_monos: tuple
    verified_exact: bool = False
    exact_gram: Optional[SymMatRat] = None
    exact_multipliers: Optional[list[Fraction]] = None


@dataclass
class InnerResult:
    status: str
    certificate: Optional[SosCertificate] = None
    dual_ray: Optional[DualRay] = None
    solver_residuals: Optional[dict] = None


def _size_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_SIZE_CAP


def inner_membership(
    r: CurvOp, m: int, tol: float = 1e-7, harden: bool = True
) -> InnerResult:
    """Three-valued SOS-modulo-ideal membership test at level m."""
    if m < 0:
        raise ValueError("need m >= 0")
    if tol <= 0:
        raise ValueError("need tol > 0")
    nvars = plucker_basis(r.n).dim
    gram_dim = math.comb(nvars + m, m + 1)
    cap = _size_cap()
    if gram_dim > cap:
        raise SizeCapError(
            f"size cap: Gram dimension {gram_dim} exceeds {cap} "
            f"(override with {SIZE_CAP_ENV})"
        )
    problem, system = _build_system(QuadForm(r.n, r), m)
    status = solve(problem, feas_tol=tol)
    if status.verdict == FEASIBLE:
        gram = 0.5 * (status.point[0] + status.point[0].T)
        mineig = float(np.linalg.eigvalsh(gram)[0])
        res = constraint_residual(problem, [gram], status.free_point)
        residual = max(res, max(0.0, -mineig))
        if residual <= tol:
            cert = SosCertificate(
                m=m, gram=gram, ideal_coeffs=status.free_point,
                residual=residual, gram_monos=system.gram_monos,
            )
            if harden:
                _try_harden(cert, system)
            return InnerResult(YES, certificate=cert,
                               solver_residuals=status.residuals)
        return InnerResult(INCONCLUSIVE, solver_residuals=status.residuals)
    if status.verdict == INFEASIBLE and status.dual_ray is not None:
        if status.dual_ray.margin >= tol:
            return InnerResult(NO_CERTIFICATE, dual_ray=status.dual_ray,
                               solver_residuals=status.residuals)
    return InnerResult(INCONCLUSIVE, solver_residuals=status.residuals)


# ---------------------------------------------------------------------------
# Exact hardening: round, project onto the constraint space, re-verify
# ---------------------------------------------------------------------------


def _try_harden(cert: SosCertificate, system: SosSystem) -> None:
    mm = len(system.constraint_monos)
    g = len(system.gram_monos)
    n_mult = len(system.free_cols)
    if mm > HARDEN_CONSTRAINT_CAP:
        return
    rows = _constraint_rows(system, g, n_mult)
    for denom_bits in (12, 24, 48):
        den = 1 << denom_bits
        z0 = _round_point(cert, system, den)
        z = _project_exact(rows, system.target, z0)
        if z is None:
            continue
        gram = _svec_to_mat(z[: g * (g + 1) // 2], g)
        try:
            sym = SymMatRat(gram)
        except ValueError:
            continue
        if psd_status(sym) is not PsdStatus.NOT_PSD:
            cert.verified_exact = True
            cert.exact_gram = sym
            cert.exact_multipliers = list(z[g * (g + 1) // 2 :])
            return


def _constraint_rows(system: SosSystem, g: int, n_mult: int) -> list[dict]:
    """Sparse integer rows of the constraint map over (svec Gram, multipliers)."""
    cons_index = {mono: i for i, mono in enumerate(system.constraint_monos)}
    nsvec = g * (g + 1) // 2
    rows: list[dict] = [dict() for _ in system.constraint_monos]
    k = 0
    for bi in range(g):
        for bj in range(bi, g):
            mu = tuple(x + y for x, y in zip(system.gram_monos[bi], system.gram_monos[bj]))
            row = cons_index[mu]
            rows[row][k] = 1 if bi == bj else 2
            k += 1
    for col, entries in enumerate(system.free_cols):
        for idx, val in entries.items():
            rows[idx][nsvec + col] = rows[idx].get(nsvec + col, 0) + val
    return rows


def _round_point(cert: SosCertificate, system: SosSystem, den: int) -> list[Fraction]:
    g = cert.gram.shape[0]
    z = []
    for bi in range(g):
        for bj in range(bi, g):
            z.append(Fraction(round(cert.gram[bi, bj] * den), den))
    if cert.ideal_coeffs is not None:
        for v in cert.ideal_coeffs:
            z.append(Fraction(round(float(v) * den), den))
    else:
        z.extend([Fraction(0)] * len(system.free_cols))
    return z


def _project_exact(
    rows: list[dict], target: list[Fraction], z0: list[Fraction]
) -> Optional[list[Fraction]]:
    """Orthogonal projection of z0 onto {z : rows . z = target}, exact."""
    m = len(rows)
    # residual  r = M z0 - t
    resid = []
    for i, row in enumerate(rows):
        acc = -target[i]
        for j, c in row.items():
            if z0[j]:
                acc += c * z0[j]
        resid.append(acc)
    if not any(resid):
        return z0
    # Gram matrix of the rows (integer), then solve (M M') xi = resid
    gram = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        ri = rows[i]
        for j in range(i, m):
            rj = rows[j]
            small, big = (ri, rj) if len(ri) < len(rj) else (rj, ri)
            acc = 0
            for k, c in small.items():
                other = big.get(k)
                if other is not None:
                    acc += c * other
            gram[i][j] = Fraction(acc)
            gram[j][i] = Fraction(acc)
    xi = _solve_linear_exact(gram, resid)
    if xi is None:
        return None
    z = list(z0)
    for i, row in enumerate(rows):
        coeff = xi[i]
        if coeff:
            for j, c in row.items():
                z[j] -= c * coeff
    return z


def _solve_linear_exact(
    mat: list[list[Fraction]], rhs: list[Fraction]
) -> Optional[list[Fraction]]:
    """Gaussian elimination with partial pivoting over the rationals."""
    m = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(m):
        piv = None
        best = Fraction(0)
        for i in range(col, m):
            v = abs(a[i][col])
            if v > best:
                best = v
                piv = i
        if piv is None or best == 0:
            return None  # singular: rows dependent; caller treats as failure
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for i in range(m):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [u - f * v for u, v in zip(a[i], a[col])]
    return [a[i][m] for i in range(m)]


def _svec_to_mat(svec: list[Fraction], g: int) -> list[list[Fraction]]:
    out = [[Fraction(0)] * g for _ in range(g)]
    k = 0
    for bi in range(g):
        for bj in range(bi, g):
            out[bi][bj] = svec[k]
            out[bj][bi] = svec[k]
            k += 1
    return out


def verify_certificate_exact(r: CurvOp, cert: SosCertificate) -> bool:
    """Re-check a hardened certificate from scratch, in exact arithmetic."""
    if not cert.verified_exact or cert.exact_gram is None:
        return False
    if psd_status(cert.exact_gram) is PsdStatus.NOT_PSD:
        return False
    _, system = _build_system(QuadForm(r.n, r), cert.m)
    g = len(system.gram_monos)
    rows = _constraint_rows(system, g, len(system.free_cols))
    z = []
    for bi in range(g):
        for bj in range(bi, g):
            z.append(cert.exact_gram.rows[bi][bj])
    z.extend(cert.exact_multipliers or [Fraction(0)] * len(system.free_cols))
    for i, row in enumerate(rows):
        acc = -system.target[i]
        for j, c in row.items():
            if z[j]:
                acc += c * z[j]
        if acc:
            return False
    return True


def format_certificate(cert: SosCertificate) -> str:
    """Human- and machine-readable text dump of a YES certificate."""
    lines = [f"level {cert.m}", f"gram-dim {cert.gram.shape[0]}",
             f"residual {cert.residual!r}",
             f"verified-exact {'yes' if cert.verified_exact else 'no'}"]
    lines.append("monomials " + " ".join(
        "".join(str(e) for e in mono) for mono in cert.gram_monos))
    for i in range(cert.gram.shape[0]):
        lines.append("gram " + " ".join(repr(v) for v in cert.gram[i]))
    if cert.ideal_coeffs is not None and len(cert.ideal_coeffs):
        lines.append("multipliers " + " ".join(repr(float(v)) for v in cert.ideal_coeffs))
    if cert.verified_exact and cert.exact_gram is not None:
        for i in range(cert.exact_gram.dim):
            lines.append("exact-gram " + " ".join(str(v) for v in cert.exact_gram.rows[i]))
    return "\n".join(lines) + "\n"
