import random
from fractions import Fraction as F

import pytest

from curvcone.dim4 import (
    ISOLATED_ROOT,
    RATIONAL_POINT,
    defining_poly,
    ft_certificate,
    param_charpoly,
    query_bound,
    query_sec_geq,
    query_sec_gt,
    verify_ft_certificate,
)
from curvcone.exactmath import PsdStatus, SymMatRat, UniPoly, charpoly, psd_status
from curvcone.tensorspace import (
    LOWER,
    UPPER,
    CurvOp,
    hodge_star,
    identity_op,
    random_curvop,
)

from conftest import boundaryish_curvop, interior_curvop, sweep_oracle

NEG_ID = CurvOp(4, SymMatRat.identity(6).scale(-1))
DIAG16 = CurvOp(4, SymMatRat.diag([1, 2, 3, 4, 5, 6]))
DIAG_SING = CurvOp(4, SymMatRat.diag([0, 1, 1, 1, 1, 0]))
ZERO = CurvOp(4, SymMatRat.zeros(6))


class TestParamCharpoly:
    def test_identity(self):
        pc = param_charpoly(identity_op(4))
        assert pc.sigma[0].coeffs == (F(6),)
        # det(Id + x*) = (1 - x^2)^3
        assert pc.sigma[5].coeffs == (F(1), F(0), F(-3), F(0), F(3), F(0), F(-1))

    def test_zero_operator(self):
        pc = param_charpoly(ZERO)
        assert not pc.sigma[0]
        assert pc.sigma[1].coeffs == (F(0), F(0), F(-3))
        assert pc.sigma[5].coeffs == (F(0),) * 6 + (F(-1),)

    def test_diag_trace(self):
        assert param_charpoly(DIAG16).sigma[0].coeffs == (F(21),)

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            param_charpoly(identity_op(5))

    def test_matches_direct_determinant(self):
        # the sigma claim: det(R + x0 * - lambda Id) evaluated two ways
        star = hodge_star()
        samples = [F(k, 4) for k in range(-9, 10, 2)] + [F(5), F(-7), F(11, 8)]
        assert len(samples) >= 13
        for seed in range(6):
            r = random_curvop(4, seed, F(2))
            pc = param_charpoly(r)
            for x0 in samples[:13]:
                direct = charpoly(r.mat + star.scale(x0))
                for i in range(1, 7):
                    sig_i = pc.sigma[i - 1](x0)
                    coeff = direct.coeffs[6 - i] if 6 - i < len(direct.coeffs) else F(0)
                    assert sig_i == (coeff if i % 2 == 0 else -coeff)


class TestDefiningPoly:
    def test_identity_vanishes(self):
        assert defining_poly(identity_op(4)) == 0

    def test_diag_positive(self):
        value = defining_poly(DIAG16)
        assert value == 244611809280

    def test_zero_vanishes(self):
        assert defining_poly(ZERO) == 0

    def test_shift_invariance_in_x(self):
        # disc is invariant under x -> x + s applied to the det polynomial
        from curvcone.exactmath import discriminant_x

        rng = random.Random(3)
        for seed in range(5):
            r = random_curvop(4, seed, F(2))
            det_poly = param_charpoly(r).sigma[5]
            s = F(rng.randint(-9, 9), rng.randint(1, 8))
            assert discriminant_x(det_poly.shifted(s)) == discriminant_x(det_poly)

    def test_boundary_instances_vanish_exactly(self):
        found = 0
        for seed in range(40):
            r = boundaryish_curvop(seed)
            if query_sec_geq(r) and not query_sec_gt(r):
                assert defining_poly(r) == 0
                found += 1
        assert found >= 5

    def test_scale_covariance_of_queries(self):
        for seed in range(6):
            r = random_curvop(4, seed, F(2))
            r3 = CurvOp(4, r.mat.scale(3))
            assert query_sec_geq(r) == query_sec_geq(r3)
            assert query_sec_gt(r) == query_sec_gt(r3)


class TestQueries:
    def test_identity(self):
        assert query_sec_gt(identity_op(4)) is True
        assert query_sec_geq(identity_op(4)) is True

    def test_negative_identity(self):
        assert query_sec_gt(NEG_ID) is False
        assert query_sec_geq(NEG_ID) is False

    def test_diag_strict(self):
        assert query_sec_gt(DIAG16) is True
        assert psd_status(DIAG16.mat) is PsdStatus.POSITIVE_DEFINITE

    def test_diag_singular_pair(self):
        assert query_sec_geq(DIAG_SING) is True
        assert query_sec_gt(DIAG_SING) is False
        assert psd_status(DIAG_SING.mat) is PsdStatus.PSD_SINGULAR

    def test_zero_operator(self):
        assert query_sec_geq(ZERO) is True
        assert query_sec_gt(ZERO) is False

    def test_gt_implies_geq(self):
        ops = [identity_op(4), NEG_ID, DIAG16, DIAG_SING, ZERO]
        ops += [random_curvop(4, s, F(2)) for s in range(30)]
        ops += [interior_curvop(s) for s in range(5)]
        ops += [boundaryish_curvop(s) for s in range(5)]
        for r in ops:
            if query_sec_gt(r):
                assert query_sec_geq(r)


class TestCertificates:
    def test_identity_strict_at_zero(self):
        cert = ft_certificate(identity_op(4))
        assert cert.kind == RATIONAL_POINT
        assert cert.strict and cert.value == 0
        assert verify_ft_certificate(identity_op(4), cert)

    def test_diag_singular(self):
        cert = ft_certificate(DIAG_SING)
        assert cert.kind == RATIONAL_POINT
        assert not cert.strict and cert.value == 0
        assert verify_ft_certificate(DIAG_SING, cert)

    def test_none_when_false(self):
        assert ft_certificate(NEG_ID) is None

    def test_zero_operator(self):
        cert = ft_certificate(ZERO)
        assert cert.value == 0 and not cert.strict
        assert verify_ft_certificate(ZERO, cert)

    def test_isolated_root_verification(self):
        # R + sqrt(2) * is genuinely PSD-singular for diag(2,2,2,2,2,1)
        # (the (12),(34)-couple [[2, x],[x, 1]] loses rank at x = sqrt(2)),
        # so a hand-built isolated-root certificate must verify even though
        # the preferred machine certificate is the strict one at x0 = 0.
        from curvcone.dim4 import FtCertificate
        from curvcone.exactmath import squarefree_part

        r = CurvOp(4, SymMatRat.diag([2, 2, 2, 2, 2, 1]))
        assert query_sec_gt(r)
        det_poly = param_charpoly(r).sigma[5]
        w = squarefree_part(det_poly)
        cert = FtCertificate(
            ISOLATED_ROOT, strict=False, interval=(F(11, 8), F(3, 2)), poly=w
        )
        assert verify_ft_certificate(r, cert)
        # a wrong interval (no root of the annihilator inside) must fail
        bad = FtCertificate(
            ISOLATED_ROOT, strict=False, interval=(F(1, 8), F(1, 4)), poly=w
        )
        assert not verify_ft_certificate(r, bad)

    def test_random_suite_certificates(self):
        # every TRUE yields a verifying certificate; strict ones verify PD
        rng_ops = [random_curvop(4, s, F(2)) for s in range(40)]
        rng_ops += [interior_curvop(s) for s in range(10)]
        rng_ops += [boundaryish_curvop(s) for s in range(10)]
        trues = 0
        for r in rng_ops:
            if query_sec_geq(r):
                trues += 1
                cert = ft_certificate(r)
                assert cert is not None
                assert verify_ft_certificate(r, cert)
                if cert.kind == RATIONAL_POINT:
                    status = psd_status(r.mat + hodge_star().scale(cert.value))
                    assert status is not PsdStatus.NOT_PSD
                    if cert.strict:
                        assert status is PsdStatus.POSITIVE_DEFINITE
        assert trues >= 15


class TestOracleAgreement:
    def test_small_suite(self):
        ops = [identity_op(4), NEG_ID, DIAG16, DIAG_SING, ZERO]
        ops += [random_curvop(4, s, F(2)) for s in range(25)]
        ops += [interior_curvop(s) for s in range(5)]
        ops += [boundaryish_curvop(s) for s in range(5)]
        for r in ops:
            verdict = query_sec_geq(r)
            oracle, _ = sweep_oracle(r)
            if oracle == "TRUE":
                assert verdict is True
            elif oracle == "FALSE":
                assert verdict is False
            else:
                if verdict:
                    cert = ft_certificate(r)
                    assert cert is not None and verify_ft_certificate(r, cert)


class TestBoundQueries:
    def test_identity_bounds(self):
        assert query_bound(identity_op(4), F(1), LOWER, strict=False) is True
        assert query_bound(identity_op(4), F(1), LOWER, strict=True) is False
        assert query_bound(identity_op(4), F(2), UPPER, strict=True) is True

    def test_diag_upper(self):
        # largest sectional value of diag(1..6) on coordinate planes is 6
        assert query_bound(DIAG16, F(7), UPPER, strict=True) is True
        assert query_bound(DIAG16, F(1), UPPER, strict=False) is False
