"""Dense primal-dual interior-point solver for semidefinite feasibility.

Problems are in equality standard form with optional free (sign-unrestricted)
scalar variables:

    find  X >= 0 (block diagonal), u free
    s.t.  <A_i, X> + f_i' u = b_i          for each constraint i,

optionally minimising a linear objective.  Free variables are eliminated up
front by an orthogonal projection of the constraint system; feasibility
queries are answered by maximising t subject to X - t*Id >= 0 on the affine
space, which is always strictly feasible in (X, t), so one interior-point
run yields either an interior point, a boundary point, or a Farkas-type
infeasibility certificate:

    nu  with  Z = sum_i nu_i A_i >= 0,  F' nu = 0,  b' nu < 0,

which pairs to b'nu < 0 with every affine-feasible X but to >= 0 with every
PSD X.  The search direction is the classical predictor-corrector linearised
on X S = mu I (dense Schur complement of size = number of constraints); all
linear algebra is numpy, no randomisation, so runs are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_FEAS_TOL = 1e-7
DEFAULT_MAX_ITERS = 200


class SdpProblem:
    """Block-diagonal SDP data.

    ``constraint_mats[blk]`` stacks the per-constraint symmetric coefficient
    matrices of one block as an (m, nb, nb) array; ``free_coeffs`` is
    (m, free_dim) or None; ``rhs`` is (m,).  ``objective`` and
    ``objective_free`` give an optional linear objective to minimise.
    """

    def __init__(
        self,
        block_dims: list[int],
        constraint_mats: list[np.ndarray],
        rhs: np.ndarray,
        free_coeffs: Optional[np.ndarray] = None,
        objective: Optional[list[np.ndarray]] = None,
        objective_free: Optional[np.ndarray] = None,
    ):
        self.block_dims = list(block_dims)
        self.A = [np.ascontiguousarray(a, dtype=float) for a in constraint_mats]
        self.b = np.asarray(rhs, dtype=float)
        self.F = None if free_coeffs is None else np.asarray(free_coeffs, dtype=float)
        self.C = None if objective is None else [np.asarray(c, float) for c in objective]
        self.c_free = None if objective_free is None else np.asarray(objective_free, float)
        m = self.b.shape[0]
        if len(self.A) != len(self.block_dims):
            raise ValueError("dimension mismatch: one constraint stack per block")
        for a, nb in zip(self.A, self.block_dims):
            if a.shape != (m, nb, nb):
                raise ValueError(f"dimension mismatch: expected {(m, nb, nb)}, got {a.shape}")
            if m and not np.allclose(a, a.transpose(0, 2, 1)):
                raise ValueError("constraint matrices must be symmetric")
        if self.F is not None and self.F.shape[0] != m:
            raise ValueError("dimension mismatch in free coefficients")
        if self.C is not None:
            for c, nb in zip(self.C, self.block_dims):
                if c.shape != (nb, nb):
                    raise ValueError("dimension mismatch in objective")

    @classmethod
    def from_constraints(cls, block_dims, constraints, free_dim=0, objective=None):
        """Build from a list of (per-block matrices, free row, rhs) triples."""
        m = len(constraints)
        stacks = [np.zeros((m, nb, nb)) for nb in block_dims]
        fmat = np.zeros((m, free_dim)) if free_dim else None
        rhs = np.zeros(m)
        for i, (mats, frow, r) in enumerate(constraints):
            for blk, mat in enumerate(mats):
                stacks[blk][i] = mat
            if free_dim:
                fmat[i] = frow
            rhs[i] = r
        return cls(block_dims, stacks, rhs, fmat, objective)

    @property
    def num_constraints(self) -> int:
        return self.b.shape[0]

    @property
    def free_dim(self) -> int:
        return 0 if self.F is None else self.F.shape[1]

    def dump(self, fh) -> None:
        """Plain-text sparse dump; see README for the line grammar."""
        fh.write(f"blocks {' '.join(str(d) for d in self.block_dims)}\n")
        fh.write(f"constraints {self.num_constraints}\n")
        fh.write(f"free {self.free_dim}\n")
        for i in range(self.num_constraints):
            fh.write(f"b {i} {float(self.b[i])!r}\n")
        for blk, stack in enumerate(self.A):
            m, nb, _ = stack.shape
            for i in range(m):
                for r in range(nb):
                    for c in range(r, nb):
                        v = float(stack[i, r, c])
                        if v != 0.0:
                            fh.write(f"A {i} {blk} {r} {c} {v!r}\n")
        if self.F is not None:
            rows, cols = np.nonzero(self.F)
            for i, j in zip(rows, cols):
                fh.write(f"F {i} {j} {float(self.F[i, j])!r}\n")
        if self.C is not None:
            for blk, cmat in enumerate(self.C):
                nb = cmat.shape[0]
                for r in range(nb):
                    for c in range(r, nb):
                        if cmat[r, c] != 0.0:
                            fh.write(f"C {blk} {r} {c} {float(cmat[r, c])!r}\n")


@dataclass
class DualRay:
    """Farkas-type certificate of primal infeasibility."""

    nu: np.ndarray
    matrix: list[np.ndarray]
    margin: float
    min_eig: float


@dataclass
class SdpStatus:
    verdict: str
    point: Optional[list[np.ndarray]] = None
    free_point: Optional[np.ndarray] = None
    dual_ray: Optional[DualRay] = None
    residuals: dict = field(default_factory=dict)
    t_star: Optional[float] = None
    iterations: int = 0


# ---------------------------------------------------------------------------
# Core interior-point method (equality standard form, no free variables)
# ---------------------------------------------------------------------------


def _sym(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.T)


def _min_pairing_eig(x_blocks, s_blocks) -> float:
    """Smallest eigenvalue of X^(1/2) S X^(1/2) across blocks."""
    lo = math.inf
    for xb, sb in zip(x_blocks, s_blocks):
        try:
            chol = np.linalg.cholesky(xb)
        except np.linalg.LinAlgError:
            return -math.inf
        lam = np.linalg.eigvalsh(_sym(chol.T @ sb @ chol))
        lo = min(lo, float(lam[0]))
    return lo


def _max_step(mat: np.ndarray, dmat: np.ndarray) -> float:
    """Largest alpha with mat + alpha * dmat still positive definite-ish."""
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return 0.0
    linv = np.linalg.inv(chol)
    lam = np.linalg.eigvalsh(_sym(linv @ dmat @ linv.T))
    lo = lam[0]
    if lo >= -1e-14:
        return 1.0
    return min(1.0, -1.0 / lo)


def _ipm_standard(
    a_stk: list[np.ndarray],
    b: np.ndarray,
    c_mats: list[np.ndarray],
    eps: float,
    max_iters: int,
    callback: Optional[Callable] = None,
    projector: Optional[Callable] = None,
):
    """Predictor-corrector path following on the equality standard form.

    Returns a dict with the final iterate and residuals.  ``callback`` runs
    once per iteration with the current state and may return a string to
    stop early; the string is surfaced as the status.  ``projector`` maps a
    block iterate onto the affine constraint manifold; once the primal
    residual is small it is applied after every step, which keeps the primal
    exactly feasible through the endgame where the Schur system turns
    ill-conditioned.
    """
    m = b.shape[0]
    dims = [c.shape[0] for c in c_mats]
    ntot = sum(dims)
    a_flat = [s.reshape(m, -1) for s in a_stk]

    norm_a = max(1.0, max((float(np.max(np.abs(s))) if s.size else 0.0) for s in a_stk))
    norm_b = max(1.0, float(np.max(np.abs(b))) if m else 0.0)
    norm_c = max(1.0, max(float(np.max(np.abs(c))) for c in c_mats))
    xi_p = 10.0 * max(1.0, norm_b / norm_a)
    xi_d = 10.0 * max(1.0, norm_a, norm_c)

    x = [xi_p * np.eye(nb) for nb in dims]
    s = [xi_d * np.eye(nb) for nb in dims]
    y = np.zeros(m)

    status = "maxiter"
    stall = 0
    it = 0
    best_p = (math.inf, None)  # (merit, x blocks)
    best_d = (math.inf, None)  # (merit, y)
    for it in range(1, max_iters + 1):
        ax = np.zeros(m)
        for af, xb in zip(a_flat, x):
            ax += af @ xb.ravel()
        r_p = b - ax
        r_d = [c - np.einsum("i,ijk->jk", y, st) - sb for c, st, sb in zip(c_mats, a_stk, s)]
        gap = sum(float(np.tensordot(xb, sb)) for xb, sb in zip(x, s))
        mu = gap / ntot
        obj_p = sum(float(np.tensordot(cb, xb)) for cb, xb in zip(c_mats, x))
        obj_d = float(b @ y)
        pinf = float(np.linalg.norm(r_p)) / (1.0 + float(np.linalg.norm(b)))
        dinf = max(
            float(np.linalg.norm(rd)) / (1.0 + float(np.linalg.norm(c)))
            for rd, c in zip(r_d, c_mats)
        )
        relgap = gap / (1.0 + abs(obj_p) + abs(obj_d))

        if pinf + relgap < best_p[0]:
            best_p = (pinf + relgap, [xb.copy() for xb in x])
        if dinf + relgap < best_d[0]:
            best_d = (dinf + relgap, y.copy())

        state = {
            "x": x, "y": y, "s": s, "iter": it, "pinf": pinf, "dinf": dinf,
            "relgap": relgap, "obj_p": obj_p, "obj_d": obj_d, "mu": mu,
        }
        if callback is not None:
            early = callback(state)
            if early:
                status = early
                break
        if pinf <= eps and dinf <= eps and relgap <= eps:
            status = "optimal"
            break

        try:
            s_inv = [np.linalg.inv(sb) for sb in s]
        except np.linalg.LinAlgError:
            status = "numerical"
            break

        # Schur complement H_ij = tr(A_i X A_j S^-1), symmetrised
        h = np.zeros((m, m))
        rhs_base = np.zeros(m)
        tr_a_sinv = np.zeros(m)
        tr_a_x = np.zeros(m)
        for af, st, xb, sib, rdb in zip(a_flat, a_stk, x, s_inv, r_d):
            w = np.matmul(np.matmul(xb[None], st), sib[None])  # (m, nb, nb)
            h += af @ w.transpose(0, 2, 1).reshape(m, -1).T
            t1 = xb @ rdb @ sib
            rhs_base += af @ t1.T.ravel()
            tr_a_sinv += af @ sib.T.ravel()
            tr_a_x += af @ xb.ravel()
        h = 0.5 * (h + h.T)

        chol_h = None
        reg = 1e-13 * (1.0 + float(np.trace(h)) / max(1, m))
        mat_h = h
        for _ in range(8):
            try:
                chol_h = np.linalg.cholesky(mat_h)
                break
            except np.linalg.LinAlgError:
                mat_h = h + reg * np.eye(m)
                reg *= 100.0

        def solve_schur(rhs):
            if chol_h is None:
                return np.linalg.lstsq(h, rhs, rcond=None)[0]
            z = np.linalg.solve(chol_h, rhs)
            sol = np.linalg.solve(chol_h.T, z)
            # two rounds of iterative refinement against the true H
            for _ in range(2):
                r = rhs - h @ sol
                z = np.linalg.solve(chol_h, r)
                sol = sol + np.linalg.solve(chol_h.T, z)
            return sol

        def directions(nu_val, corr):
            rhs = r_p + tr_a_x + rhs_base - nu_val * tr_a_sinv
            if corr is not None:
                add = np.zeros(m)
                for af, cb, sib in zip(a_flat, corr, s_inv):
                    add += af @ (cb @ sib).T.ravel()
                rhs = rhs + add
            dy = solve_schur(rhs)
            ds = [rdb - np.einsum("i,ijk->jk", dy, st) for rdb, st in zip(r_d, a_stk)]
            dx = []
            for xb, sib, dsb, pos in zip(x, s_inv, ds, range(len(dims))):
                base = -xb - xb @ dsb @ sib
                if nu_val:
                    base = base + nu_val * sib
                if corr is not None:
                    base = base - corr[pos] @ sib
                dx.append(_sym(base))
            return dy, dx, ds

        # predictor
        dy_a, dx_a, ds_a = directions(0.0, None)
        ap = min((_max_step(xb, db) for xb, db in zip(x, dx_a)), default=1.0)
        ad = min((_max_step(sb, db) for sb, db in zip(s, ds_a)), default=1.0)
        gap_aff = sum(
            float(np.tensordot(xb + ap * dxb, sb + ad * dsb))
            for xb, dxb, sb, dsb in zip(x, dx_a, s, ds_a)
        )
        sigma = min(0.9, max(1e-6, (max(gap_aff, 0.0) / gap) ** 3)) if gap > 0 else 0.1
        corr = [dxb @ dsb for dxb, dsb in zip(dx_a, ds_a)]

        dy, dx, ds = directions(sigma * mu, corr)
        tau = 0.98
        ap = min(1.0, tau * min((_max_step(xb, db) for xb, db in zip(x, dx)), default=1.0))
        ad = min(1.0, tau * min((_max_step(sb, db) for sb, db in zip(s, ds)), default=1.0))
        # keep the pairing X S away from the boundary of the cone (a weak
        # central-path neighbourhood); without this the dual slack collapses
        # to numerical singularity at degenerate optima
        if mu < 1.0:
            for _ in range(12):
                xn = [xb + ap * dxb for xb, dxb in zip(x, dx)]
                sn = [sb + ad * dsb for sb, dsb in zip(s, ds)]
                mu_n = sum(float(np.tensordot(a1, b1)) for a1, b1 in zip(xn, sn)) / ntot
                if mu_n <= 0:
                    break
                lam = _min_pairing_eig(xn, sn)
                if lam >= 1e-4 * mu_n:
                    break
                ap *= 0.7
                ad *= 0.7
        if ap < 1e-10 and ad < 1e-10:
            stall += 1
            if stall >= 5:
                status = "stalled"
                break
        else:
            stall = 0
        x = [xb + ap * dxb for xb, dxb in zip(x, dx)]
        s = [sb + ad * dsb for sb, dsb in zip(s, ds)]
        y = y + ad * dy
        if projector is not None and pinf < 1e-6:
            x = projector(x, mu)

    return {
        "x": x, "y": y, "s": s, "status": status, "iterations": it,
        "pinf": pinf if m else 0.0, "dinf": dinf, "relgap": relgap,
        "obj_p": obj_p, "obj_d": obj_d,
        "x_best": best_p[1] if best_p[1] is not None else x,
        "y_best": best_d[1] if best_d[1] is not None else y,
    }


# ---------------------------------------------------------------------------
# Free-variable elimination and the max-min-eigenvalue transform
# ---------------------------------------------------------------------------


@dataclass
class _Eliminated:
    q2: np.ndarray          # (m, m_eff) orthonormal basis of range(F_aug)^perp
    w: np.ndarray           # (m,) with t(Y) = w'b - <A*(w), Y>
    a_elim: list[np.ndarray]
    b_elim: np.ndarray
    c_mats: list[np.ndarray]
    t_const: float
    ok: bool

    def t_of(self, blocks) -> float:
        return self.t_const - sum(
            float(np.tensordot(cb, yb)) for cb, yb in zip(self.c_mats, blocks)
        )


def _eliminate_for_slack(problem: SdpProblem) -> _Eliminated:
    m = problem.num_constraints
    traces = np.zeros(m)
    for stack in problem.A:
        traces += np.trace(stack, axis1=1, axis2=2)
    cols = [problem.F] if problem.F is not None else []
    cols.append(traces[:, None])
    f_aug = np.hstack(cols)
    u_mat, sv, vt = np.linalg.svd(f_aug, full_matrices=True)
    tol = max(f_aug.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > tol))
    q2 = u_mat[:, rank:]
    t_idx = f_aug.shape[1] - 1
    if rank == 0:
        return _Eliminated(q2, np.zeros(m), [], np.zeros(0), [], 0.0, ok=False)
    w = u_mat[:, :rank] @ (vt[:rank, t_idx] / sv[:rank])
    # t is determined by (Y, b) only when e_t lies in the row space of the
    # augmented free matrix; otherwise the identity direction is free and
    # the caller can push the slack to infinity
    ok = bool(np.linalg.norm(vt[:rank, t_idx]) > 1.0 - 1e-9)
    a_elim = [np.einsum("mq,mjk->qjk", q2, stack) for stack in problem.A]
    b_elim = q2.T @ problem.b
    # row equilibration of the eliminated system (verdicts are unaffected,
    # the Schur complement conditions much better)
    m_eff = b_elim.shape[0]
    if m_eff:
        norms = np.zeros(m_eff)
        for stack in a_elim:
            norms += np.einsum("qjk,qjk->q", stack, stack)
        scale = 1.0 / np.sqrt(np.maximum(norms, 1e-30))
        a_elim = [stack * scale[:, None, None] for stack in a_elim]
        b_elim = b_elim * scale
        q2 = q2 * scale[None, :]
    c_mats = [np.einsum("m,mjk->jk", w, stack) for stack in problem.A]
    t_const = float(w @ problem.b)
    return _Eliminated(q2, w, a_elim, b_elim, c_mats, t_const, ok)


def _free_identity_point(problem: SdpProblem):
    """Explicit interior point when Id is free modulo the free variables.

    Solve the affine system by least squares, then shift along Id while
    compensating through the free variables (possible exactly when the
    trace column lies in the span available to them).
    """
    m = problem.num_constraints
    dims = problem.block_dims
    cols = [stack.reshape(m, -1) for stack in problem.A]
    widths = [c.shape[1] for c in cols]
    if problem.F is not None:
        cols.append(problem.F)
    mat = np.hstack(cols)
    sol, *_ = np.linalg.lstsq(mat, problem.b, rcond=None)
    blocks = []
    offset = 0
    for nb, width in zip(dims, widths):
        blocks.append(_sym(sol[offset : offset + width].reshape(nb, nb)))
        offset += width
    lam = min_eig_blocks(blocks)
    tau = max(0.0, -lam) + 1.0 + float(np.max(np.abs(problem.b), initial=0.0))
    traces = np.zeros(m)
    for stack in problem.A:
        traces += np.trace(stack, axis1=1, axis2=2)
    du = np.linalg.lstsq(problem.F, -traces, rcond=None)[0]
    point = [blk + tau * np.eye(nb) for blk, nb in zip(blocks, dims)]
    return {
        "t": math.inf, "point": point, "ray": None, "status": "free-identity",
        "iterations": 0, "residuals": {"primal": 0.0, "dual": 0.0, "gap": 0.0},
        "free_shift": du * tau,
    }


def _recover_free(problem: SdpProblem, x_blocks) -> Optional[np.ndarray]:
    if problem.F is None:
        return None
    resid = problem.b.copy()
    for stack, xb in zip(problem.A, x_blocks):
        resid -= stack.reshape(problem.num_constraints, -1) @ xb.ravel()
    return np.linalg.lstsq(problem.F, resid, rcond=None)[0]


def constraint_residual(problem: SdpProblem, x_blocks, u=None) -> float:
    """Max-norm violation of the affine constraints at (X, u)."""
    val = problem.b.copy()
    for stack, xb in zip(problem.A, x_blocks):
        val -= stack.reshape(problem.num_constraints, -1) @ xb.ravel()
    if problem.F is not None:
        if u is None:
            u = _recover_free(problem, x_blocks)
        val -= problem.F @ u
    return float(np.max(np.abs(val))) if val.size else 0.0


def min_eig_blocks(x_blocks) -> float:
    return min(float(np.linalg.eigvalsh(_sym(xb))[0]) for xb in x_blocks)


def _build_ray(problem: SdpProblem, nu: np.ndarray) -> DualRay:
    mats = [np.einsum("m,mjk->jk", nu, stack) for stack in problem.A]
    margin = -float(problem.b @ nu)
    mineig = min_eig_blocks(mats)
    return DualRay(nu=nu, matrix=mats, margin=margin, min_eig=mineig)


def verify_dual_ray(problem: SdpProblem, ray: DualRay, feas_tol: float) -> bool:
    """Floating-point re-verification of an infeasibility certificate.

    The ray matrix must be numerically PSD, orthogonal to the free-variable
    columns, and pair strictly negatively with the right-hand side.  The PSD
    defect eta = max(0, -min_eig) is tolerated only when it is orders of
    magnitude below the violation margin: any affine-feasible X would then
    need trace >= margin/eta to escape the contradiction.
    """
    mats = [np.einsum("m,mjk->jk", ray.nu, stack) for stack in problem.A]
    scale = max(1.0, max(float(np.linalg.norm(mat)) for mat in mats))
    margin = -float(problem.b @ ray.nu)
    if margin < 0.5 * feas_tol:
        return False
    if min_eig_blocks(mats) < -max(1e-9 * scale, 1e-4 * margin):
        return False
    if problem.F is not None:
        if float(np.max(np.abs(problem.F.T @ ray.nu), initial=0.0)) > 1e-7 * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _slack_core(problem: SdpProblem, feas_tol, max_iters, want_early: bool):
    """Shared engine: maximise the minimum eigenvalue over the affine space."""
    m = problem.num_constraints
    dims = problem.block_dims
    if m == 0:
        big = 1.0
        point = [big * np.eye(nb) for nb in dims]
        return {"t": big, "point": point, "ray": None, "status": "unconstrained",
                "iterations": 0, "residuals": {"primal": 0.0, "dual": 0.0, "gap": 0.0}}

    elim = _eliminate_for_slack(problem)
    if not elim.ok:
        # the identity direction in X is absorbed by the free variables, so
        # any affine solution can be shifted to an arbitrarily interior one
        return _free_identity_point(problem)

    m_eff = elim.b_elim.shape[0]
    if m_eff == 0:
        # affine space is parametrised by the free variables alone
        lam = [np.linalg.eigvalsh(c) for c in elim.c_mats]
        lo = min(float(v[0]) for v in lam)
        if lo < -1e-12:
            # unbounded: push along the negative-curvature direction
            blk = min(range(len(dims)), key=lambda i: lam[i][0])
            vecs = np.linalg.eigh(elim.c_mats[blk])[1]
            v = vecs[:, 0]
            point = [np.zeros((nb, nb)) for nb in dims]
            tau = (1.0 + abs(elim.t_const)) / max(-lo, 1e-12)
            point[blk] = tau * np.outer(v, v)
            t_val = elim.t_const - tau * lo
            point = [pb + t_val * np.eye(nb) for pb, nb in zip(point, dims)]
            return {"t": math.inf, "point": point, "ray": None,
                    "status": "unbounded", "iterations": 0,
                    "residuals": {"primal": 0.0, "dual": 0.0, "gap": 0.0}}
        t_val = elim.t_const
        point = [t_val * np.eye(nb) for nb in dims]
        ray = None
        if t_val < 0:
            cand = _build_ray(problem, elim.w)
            if verify_dual_ray(problem, cand, feas_tol):
                ray = cand
        return {"t": t_val, "point": point, "ray": ray, "status": "analytic",
                "iterations": 0,
                "residuals": {"primal": 0.0, "dual": 0.0, "gap": 0.0}}

    found = {}
    projector = _make_projector(elim.a_elim, elim.b_elim)

    def polished_candidate(blocks):
        y_pol = projector(blocks)
        t_val = elim.t_of(y_pol)
        x_cand = [yb + t_val * np.eye(nb) for yb, nb in zip(y_pol, dims)]
        return t_val, x_cand

    def callback(state):
        t_cur = elim.t_of(state["x"])
        lam = None
        if state["iter"] >= 3 and state["pinf"] < 1e-6:
            _, x_cand = polished_candidate(state["x"])
            lam = min_eig_blocks(x_cand)
            best = found.get("best_lam")
            if best is None or lam > best[0]:
                found["best_lam"] = (lam, x_cand)
        if not want_early or state["iter"] < 3:
            return None
        if t_cur > 2.0 * feas_tol and state["pinf"] < 1e-10:
            x_plain = [yb + t_cur * np.eye(nb) for yb, nb in zip(state["x"], dims)]
            if min_eig_blocks(x_plain) > feas_tol:
                if constraint_residual(problem, x_plain) <= 0.1 * feas_tol:
                    found["feasible"] = (t_cur, x_plain)
                    return "early-feasible"
        if lam is not None and lam >= -0.1 * feas_tol:
            x_cand = found["best_lam"][1]
            if constraint_residual(problem, x_cand) <= 0.1 * feas_tol:
                found["feasible"] = (max(t_cur, lam), x_cand)
                return "early-feasible-boundary"
        if state["dinf"] < 1e-9:
            nu = elim.w - elim.q2 @ state["y"]
            ray = _build_ray(problem, nu)
            if ray.margin >= feas_tol and verify_dual_ray(problem, ray, feas_tol):
                found["ray"] = ray
                return "early-infeasible"
        return None

    eps = max(1e-12, min(1e-9, feas_tol * 1e-3))

    def pd_projector(blocks, mu):
        """Project onto the affine slice, then restore positive definiteness
        by shifting along Id, which lies in the affine null space of the
        eliminated system (its trace column was part of the free block)."""
        proj = projector(blocks)
        lam_old = min(float(np.linalg.eigvalsh(xb)[0]) for xb in blocks)
        lam_new = min(float(np.linalg.eigvalsh(pb)[0]) for pb in proj)
        if lam_new <= 0.0:
            # keep the pre-projection margin, at a tiny floor
            shift = max(1e-15, 0.5 * lam_old) - lam_new
            proj = [pb + shift * np.eye(nb) for pb, nb in zip(proj, dims)]
        return proj

    # A whisper of trace regularisation keeps the iterate on a bounded part
    # of the optimal face (flat directions of the SOS Gram parametrisation
    # are PSD, so faces can be unbounded and the plain iterate drifts to
    # norms that destroy the attainable eigenvalue precision).  The shift of
    # the reported t is of order reg * trace and is accounted for by reading
    # t off the unregularised objective.
    creg = 1e-7 * (1.0 + max(float(np.linalg.norm(c)) for c in elim.c_mats))
    c_reg = [c + creg * np.eye(nb) for c, nb in zip(elim.c_mats, dims)]

    res = _ipm_standard(
        elim.a_elim, elim.b_elim, c_reg, eps, max_iters, callback, pd_projector
    )

    t_cur, x_cand = polished_candidate(res["x_best"])
    best = found.get("best_lam")
    if best is not None and best[0] > min_eig_blocks(x_cand):
        x_cand = best[1]
        t_cur = max(t_cur, best[0])
    ray = found.get("ray")
    if ray is None:
        nu = elim.w - elim.q2 @ res["y_best"]
        cand = _build_ray(problem, nu)
        if cand.margin >= feas_tol and verify_dual_ray(problem, cand, feas_tol):
            ray = cand
    if "feasible" in found:
        t_cur, x_cand = found["feasible"]
    return {
        "t": t_cur,
        "point": x_cand,
        "ray": ray,
        "status": res["status"],
        "iterations": res["iterations"],
        "residuals": {
            "primal": res.get("pinf", 0.0),
            "dual": res.get("dinf", 0.0),
            "gap": res.get("relgap", 0.0),
        },
    }


def _make_projector(a_elim, b_elim):
    """Orthogonal projector onto the affine slice, with prefactored Gram.

    Returns a callable mapping block iterates to their minimal-Frobenius
    correction satisfying the eliminated constraints.
    """
    m = b_elim.shape[0]
    if m == 0:
        return lambda blocks: blocks
    flats = [stack.reshape(m, -1) for stack in a_elim]
    gram = np.zeros((m, m))
    for fl in flats:
        gram += fl @ fl.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        chol = None

    def solve(rhs):
        if chol is None:
            return np.linalg.lstsq(gram, rhs, rcond=None)[0]
        sol = np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))
        r = rhs - gram @ sol
        return sol + np.linalg.solve(chol.T, np.linalg.solve(chol, r))

    def project(blocks):
        r = b_elim.copy()
        for fl, yb in zip(flats, blocks):
            r -= fl @ yb.ravel()
        xi = solve(r)
        return [
            _sym(yb + np.einsum("q,qjk->jk", xi, stack))
            for stack, yb in zip(a_elim, blocks)
        ]

    return project


def min_eig_slack(
    problem: SdpProblem,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
):
    """Maximise t with X - t*Id PSD over the affine constraint space.

    Returns (t*, block point).  t* > feas_tol certifies strict feasibility of
    the PSD problem; t* < -feas_tol strongly suggests infeasibility (the
    dual ray from :func:`solve` confirms it).
    """
    _check_affine_consistent(problem)
    out = _slack_core(problem, feas_tol, max_iters, want_early=False)
    return out["t"], out["point"]


def _check_affine_consistent(problem: SdpProblem):
    """Raise if the affine system (ignoring the PSD cone) is inconsistent."""
    m = problem.num_constraints
    if m == 0:
        return
    cols = [stack.reshape(m, -1) for stack in problem.A]
    if problem.F is not None:
        cols.append(problem.F)
    mat = np.hstack(cols)
    sol, *_ = np.linalg.lstsq(mat, problem.b, rcond=None)
    resid = mat @ sol - problem.b
    scale = 1.0 + float(np.linalg.norm(problem.b))
    if float(np.linalg.norm(resid)) > 1e-8 * scale:
        raise ValueError("affine constraint system is inconsistent")


def _affine_farkas(problem: SdpProblem) -> Optional[DualRay]:
    """Linear-only infeasibility: b outside the range of the constraint map."""
    m = problem.num_constraints
    if m == 0:
        return None
    cols = [stack.reshape(m, -1) for stack in problem.A]
    if problem.F is not None:
        cols.append(problem.F)
    mat = np.hstack(cols)
    sol, *_ = np.linalg.lstsq(mat, problem.b, rcond=None)
    resid = mat @ sol - problem.b
    scale = 1.0 + float(np.linalg.norm(problem.b))
    if float(np.linalg.norm(resid)) <= 1e-8 * scale:
        return None
    nu = -resid / float(np.linalg.norm(resid))
    ray = _build_ray(problem, nu)
    return ray


def solve(
    problem: SdpProblem,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SdpStatus:
    """Feasibility (or optimisation) with a three-valued verdict.

    FEASIBLE carries a point with min eigenvalue >= -feas_tol and affine
    residual <= feas_tol; INFEASIBLE carries a verified dual ray; anything
    the solver cannot certify within the iteration budget is INCONCLUSIVE.
    """
    if feas_tol <= 0:
        raise ValueError("feas_tol must be positive")
    if problem.C is not None:
        return _solve_with_objective(problem, feas_tol, max_iters)

    lin_ray = _affine_farkas(problem)
    if lin_ray is not None:
        return SdpStatus(
            verdict=INFEASIBLE, dual_ray=lin_ray,
            residuals={"margin": lin_ray.margin},
        )

    out = _slack_core(problem, feas_tol, max_iters, want_early=True)
    point = out["point"]
    u = _recover_free(problem, point)
    res = constraint_residual(problem, point, u)
    mineig = min_eig_blocks(point) if point else 0.0
    residuals = dict(out["residuals"])
    residuals.update({"constraint": res, "min_eig": mineig, "t_star": out["t"]})

    if point is not None and mineig >= -feas_tol and res <= feas_tol:
        return SdpStatus(
            verdict=FEASIBLE, point=point, free_point=u,
            residuals=residuals, t_star=out["t"], iterations=out["iterations"],
        )
    if out["ray"] is not None:
        residuals["margin"] = out["ray"].margin
        return SdpStatus(
            verdict=INFEASIBLE, dual_ray=out["ray"], residuals=residuals,
            t_star=out["t"], iterations=out["iterations"],
        )
    return SdpStatus(
        verdict=INCONCLUSIVE, point=point, free_point=u, residuals=residuals,
        t_star=out["t"], iterations=out["iterations"],
    )


def _solve_with_objective(problem: SdpProblem, feas_tol, max_iters) -> SdpStatus:
    if problem.F is not None:
        raise NotImplementedError("objective with free variables is not supported")
    _check_affine_consistent(problem)
    eps = max(1e-12, min(1e-9, feas_tol * 1e-3))
    res = _ipm_standard(problem.A, problem.b, problem.C, eps, max_iters, None)
    point = res["x"]
    ok = (
        res["status"] == "optimal"
        and min_eig_blocks(point) >= -feas_tol
        and constraint_residual(problem, point) <= feas_tol
    )
    residuals = {"primal": res["pinf"], "dual": res["dinf"], "gap": res["relgap"]}
    return SdpStatus(
        verdict=FEASIBLE if ok else INCONCLUSIVE,
        point=point,
        residuals=residuals,
        iterations=res["iterations"],
    )
