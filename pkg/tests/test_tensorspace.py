import random
from fractions import Fraction as F

import pytest

from curvcone.exactmath import SymMatRat, psd_status
from curvcone.tensorspace import (
    LOWER,
    UPPER,
    CurvOp,
    ModCurvOp,
    Signature,
    apply_bound_reduction,
    bianchi_project,
    bianchi_residual,
    conjugate_signed_perm,
    g_wedge_g,
    hodge_star,
    identity_op,
    plucker_basis,
    psi_q,
    random_curvop,
    random_sym,
    ricci,
    sec_eval,
    sec_sample_min,
    wedge4_embed,
    wedge_coords,
)

from conftest import interior_curvop


def test_plucker_basis_order():
    assert plucker_basis(4).pairs == (
        (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
    )
    b = plucker_basis(5)
    assert b.dim == 10
    assert b.index(2, 4) == 5


class TestWedge4:
    def test_hodge_star_matrix(self):
        star = hodge_star()
        expected = {
            (0, 5): 1, (5, 0): 1,
            (1, 4): -1, (4, 1): -1,
            (2, 3): 1, (3, 2): 1,
        }
        for i in range(6):
            for j in range(6):
                assert star.rows[i][j] == expected.get((i, j), 0)
        # <*(e1^e2), e3^e4> = +1
        assert star.rows[5][0] == 1

    def test_star_involution_traceless(self):
        star = hodge_star()
        assert SymMatRat(star.matmul(star)) == SymMatRat.identity(6)
        assert sum(star.rows[i][i] for i in range(6)) == 0

    def test_zero_and_small_n(self):
        assert wedge4_embed(5, {}).mat == SymMatRat.zeros(10)
        assert wedge4_embed(3, None).mat == SymMatRat.zeros(3)

    def test_injective_and_diagonal_orthogonal(self):
        rng = random.Random(3)
        import itertools

        quads = list(itertools.combinations(range(1, 6), 4))
        mats = [wedge4_embed(5, {q: F(1)}).mat for q in quads]
        # pairwise orthogonal with norm 6: the embedding is injective
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                assert a.frobenius(b) == (6 if i == j else 0)
        for _ in range(10):
            diag = SymMatRat.diag([F(rng.randint(-5, 5)) for _ in range(10)])
            for m in mats:
                assert m.frobenius(diag) == 0


class TestBianchi:
    def test_star_projects_to_zero(self):
        assert bianchi_project(ModCurvOp(4, hodge_star())).mat == SymMatRat.zeros(6)

    def test_identity_fixed(self):
        assert bianchi_project(ModCurvOp(4, SymMatRat.identity(6))).mat == SymMatRat.identity(6)

    def test_idempotent_and_self_adjoint(self):
        rng_seeds = (1, 2, 3)
        for seed in rng_seeds:
            s = random_sym(4, seed, F(2))
            p1 = bianchi_project(s)
            assert bianchi_project(p1).mat == p1.mat
            # self-adjointness of the correction: <P(s), u> == <s, P(u)>
            u = random_sym(4, seed + 10, F(2))
            pu = bianchi_project(u)
            assert p1.mat.frobenius(u.mat) == s.mat.frobenius(pu.mat)

    def test_curvop_orthogonal_to_star(self):
        for seed in range(5):
            r = random_curvop(4, seed)
            assert r.mat.frobenius(hodge_star()) == 0

    def test_invalid_curvop_rejected(self):
        with pytest.raises(ValueError, match="Bianchi"):
            CurvOp(4, hodge_star())


class TestSecEval:
    def test_identity(self):
        assert sec_eval(identity_op(4), [1, 0, 0, 0], [0, 1, 0, 0]) == 1

    def test_diagonal_plane(self):
        r = CurvOp(4, SymMatRat.diag([1, 2, 3, 4, 5, 6]))
        assert sec_eval(r, [1, 0, 0, 0], [0, 0, 1, 0]) == 2

    def test_scaling_and_basis_invariance(self):
        rng = random.Random(9)
        for seed in range(5):
            r = random_curvop(4, seed, F(2))
            x = [F(rng.randint(-4, 4)) for _ in range(4)]
            y = [F(rng.randint(-4, 4)) for _ in range(4)]
            if not any(a for a in wedge_coords(x, y)):
                continue
            v = sec_eval(r, x, y)
            assert sec_eval(r, [2 * c for c in x], y) == v
            # new basis of the same plane
            a, b, c, d = F(2), F(1), F(1), F(1)  # det = 1
            x2 = [a * u + b * w for u, w in zip(x, y)]
            y2 = [c * u + d * w for u, w in zip(x, y)]
            assert sec_eval(r, x2, y2) == v

    def test_degenerate_plane(self):
        with pytest.raises(ValueError, match="degenerate plane"):
            sec_eval(identity_op(4), [1, 0, 0, 0], [2, 0, 0, 0])


class TestSampleMin:
    def test_identity_exact(self):
        assert sec_sample_min(identity_op(4), 200, 1) == 1.0

    def test_negative_identity(self):
        r = CurvOp(4, SymMatRat.identity(6).scale(-1))
        assert sec_sample_min(r, 200, 1) == -1.0

    def test_flat_directions(self):
        r = CurvOp(4, SymMatRat.diag([0, 1, 1, 1, 1, 0]))
        v1 = sec_sample_min(r, 500, 5)
        v2 = sec_sample_min(r, 20000, 5)
        assert v1 >= 0
        assert v2 <= v1
        assert v2 < 0.02

    def test_deterministic(self):
        r = random_curvop(4, 3)
        assert sec_sample_min(r, 1000, 7) == sec_sample_min(r, 1000, 7)


class TestBoundReduction:
    def test_identity_lower(self):
        out = apply_bound_reduction(identity_op(4), F(1), LOWER)
        assert out.mat == SymMatRat.zeros(6)

    def test_noop(self):
        r = random_curvop(4, 8)
        assert apply_bound_reduction(r, F(0), LOWER).mat == r.mat

    def test_zero_upper(self):
        out = apply_bound_reduction(CurvOp(4, SymMatRat.zeros(6)), F(1), UPPER)
        assert out.mat == SymMatRat.identity(6)


class TestSemiRiemannian:
    def test_g_wedge_g_definite_cases(self):
        assert g_wedge_g(Signature(4, 0)).mat == SymMatRat.identity(6)
        assert g_wedge_g(Signature(4, 4)).mat == SymMatRat.identity(6)

    def test_g_wedge_g_lorentz(self):
        diag = [g_wedge_g(Signature(4, 1)).mat.rows[i][i] for i in range(6)]
        assert diag == [-1, -1, -1, 1, 1, 1]

    def test_psi_q_identity_cases(self):
        m = random_curvop(4, 4).mat
        for nu in (0, 4):
            assert psi_q(m.rows, Signature(4, nu)).mat == m

    def test_psi_q_involution(self):
        sig = Signature(4, 2)
        gg = g_wedge_g(sig).mat
        m = random_curvop(4, 5).mat
        rows_q = [
            [gg.rows[u][u] * m.rows[u][v] for v in range(6)] for u in range(6)
        ]
        assert psi_q(rows_q, sig).mat == m
        assert psi_q(gg.rows, sig).mat == SymMatRat.identity(6)

    def test_psi_q_rejects_asymmetric(self):
        m = random_curvop(4, 6).mat
        with pytest.raises(ValueError, match="Q-symmetric"):
            psi_q(m.rows, Signature(4, 1))

    def test_signature_range(self):
        with pytest.raises(ValueError):
            Signature(4, 5)

    def test_nu_reversal_conjugation(self):
        # the two inner products differ by relabelling the axes backwards
        n = 4
        rev = list(range(n, 0, -1))
        for nu in (1, 2):
            g1 = g_wedge_g(Signature(n, nu))
            g2 = g_wedge_g(Signature(n, n - nu))
            assert conjugate_signed_perm(g1, rev).mat == g2.mat


class TestRandomOps:
    def test_determinism(self):
        assert random_curvop(4, 11).mat == random_curvop(4, 11).mat
        assert random_curvop(4, 11).mat != random_curvop(4, 12).mat

    def test_bianchi_by_construction(self):
        for n in (2, 4, 5):
            r = random_curvop(n, 3)
            assert not any(bianchi_residual(r))

    def test_n2_trivial(self):
        assert random_curvop(2, 1).mat.dim == 1


def test_interior_construction_strictly_positive():
    for seed in range(3):
        r = interior_curvop(seed)
        assert sec_sample_min(r, 3000, seed) > 0


def test_ricci_of_identity():
    for n in (3, 4, 5):
        ric = ricci(identity_op(n))
        assert ric == SymMatRat.diag([n - 1] * n)
