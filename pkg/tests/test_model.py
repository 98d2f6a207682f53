import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperdisp import kernels, model
from hyperdisp.errors import DomainError, NonPositiveBubbleVolume, NonPositiveDepth
from hyperdisp.model import ModelClosure, PrimitiveState

finite = dict(allow_nan=False, allow_infinity=False)


def ikw_rho(closure, frac):
    """Admissible IKW density: gas volume between 0.2x and 5x the reference one."""
    v0 = 4.0 / 3.0 * math.pi * closure.R0**3 * closure.n
    vol = v0 * 25.0 ** (frac - 0.5)
    return 1.0 / (closure.Y1 / closure.rho10 + vol)


class TestClosure:
    def test_derived_constants(self, ikw):
        sgn = ModelClosure.sgn(300.0)
        assert sgn.a == pytest.approx(1 / 3) and sgn.beta == pytest.approx(1 / 3)
        assert ikw.a == 1.0
        assert ikw.beta == 4.0 * math.pi * ikw.n * ikw.rho10

    @pytest.mark.parametrize("kwargs", [dict(lam=-1.0), dict(lam=float("inf")), dict(lam=1.0, g=0.0)])
    def test_invalid_sgn(self, kwargs):
        with pytest.raises(ValueError):
            ModelClosure.sgn(**kwargs)

    def test_invalid_ikw(self):
        base = dict(lam=1.0, p0=1e5, R0=1e-4, gamma=1.4, n=1e8, rho10=1000.0, Y1=0.999)
        for key, bad in (("gamma", 1.0), ("Y1", 1.0), ("n", 0.0), ("p0", -1.0)):
            with pytest.raises(ValueError):
                ModelClosure.ikw(**{**base, key: bad})
        with pytest.raises(ValueError):
            ModelClosure(kind="euler", lam=1.0)

    def test_with_lambda_keeps_other_fields(self, ikw):
        c = ikw.with_lambda(7.0)
        assert c.lam == 7.0 and c.n == ikw.n and c.kind == ikw.kind


class TestBubbleRadius:
    def test_reference_density_gives_r0(self, ikw):
        R = model.bubble_radius(ikw, ikw.reference_density())
        assert R == pytest.approx(ikw.R0, rel=1e-12)

    def test_zero_gas_volume(self):
        c = ModelClosure.ikw(lam=1.0, p0=1e5, R0=1e-3, gamma=1.4, n=1e8, rho10=1000.0, Y1=0.999)
        with pytest.raises(NonPositiveBubbleVolume):
            model.bubble_radius(c, c.rho10 / c.Y1)

    def test_closed_form(self):
        c = ModelClosure.ikw(lam=1.0, p0=1e5, R0=1e-3, gamma=1.4, n=1e8, rho10=1000.0, Y1=0.999)
        expected = (3.0 / (4.0 * math.pi * 1e8) * (1.0 / 998.0 - 0.000999)) ** (1.0 / 3.0)
        assert float(model.bubble_radius(c, 998.0)) == pytest.approx(expected, rel=1e-14)

    def test_sgn_rejected(self):
        with pytest.raises(ValueError):
            model.bubble_radius(ModelClosure.sgn(1.0), 1.0)


class TestPenalty:
    def test_sgn_identity(self, sgn):
        assert float(model.penalty_f(sgn, 1.8)) == 1.8
        assert float(model.penalty_f_prime(sgn, 1.8)) == 1.0

    @given(st.floats(0.0, 1.0))
    def test_ikw_round_trip(self, frac):
        from hyperdisp.experiments import ikw_closure
        c = ikw_closure()
        rho = ikw_rho(c, frac)
        assert float(model.penalty_f(c, model.q_of_rho(c, rho))) == pytest.approx(rho, rel=1e-12)

    @given(st.floats(0.0, 1.0))
    def test_ikw_derivatives_match_fd(self, frac):
        from hyperdisp.experiments import ikw_closure
        c = ikw_closure()
        eta = float(model.q_of_rho(c, ikw_rho(c, frac)))
        e = 1e-5 * eta
        fd1 = (model.penalty_f(c, eta + e) - model.penalty_f(c, eta - e)) / (2 * e)
        fd2 = (model.penalty_f_prime(c, eta + e) - model.penalty_f_prime(c, eta - e)) / (2 * e)
        assert float(model.penalty_f_prime(c, eta)) == pytest.approx(float(fd1), rel=1e-6)
        assert float(model.penalty_f_second(c, eta)) == pytest.approx(float(fd2), rel=1e-6)

    @pytest.mark.parametrize("eta", [0.0, -1e-9])
    def test_ikw_domain(self, ikw, eta):
        with pytest.raises(DomainError):
            model.penalty_f(ikw, eta)
        with pytest.raises(DomainError):
            model.penalty_f_prime(ikw, eta)


class TestPressure:
    @pytest.mark.parametrize("lam", [0.0, 300.0, 1e6])
    def test_equilibrium(self, lam):
        assert float(model.pressure(ModelClosure.sgn(lam), 1.0, 1.0)) == pytest.approx(4.905, rel=1e-15)

    def test_off_equilibrium(self):
        p = model.pressure(ModelClosure.sgn(300.0), 1.0, 1.1)
        assert float(p) == pytest.approx(4.905 - 300.0 * 1.1 / 3.0 * 0.1, rel=1e-13)
        assert float(p) == pytest.approx(-6.095, rel=1e-12)

    def test_ikw_reference(self, ikw):
        rho = ikw.reference_density()
        p = model.pressure(ikw, rho, model.q_of_rho(ikw, rho))
        assert float(p) == pytest.approx(ikw.p0, rel=1e-10)

    @given(st.floats(0.05, 50.0), st.floats(0.0, 1e4))
    def test_sgn_limit_is_hydrostatic(self, h, lam):
        p = model.pressure(ModelClosure.sgn(lam), h, h)
        assert float(p) == pytest.approx(0.5 * 9.81 * h * h, rel=1e-15)


class TestSoundSpeed:
    def test_example(self, sgn):
        assert float(model.sound_speed_sq(sgn, 1.0, 1.0)) == pytest.approx(409.81, rel=1e-14)

    @given(st.floats(0.01, 10.0), st.floats(0.01, 10.0))
    def test_saint_venant_limit(self, h, eta):
        c2 = model.sound_speed_sq(ModelClosure.sgn(0.0), h, eta)
        assert float(c2) == pytest.approx(9.81 * h, rel=1e-15)

    def test_hyperbolic_over_random_states(self, sgn, ikw, rng):
        h = rng.uniform(1e-3, 20.0, 10_000)
        eta = h * rng.uniform(0.2, 3.0, h.size)
        assert np.all(model.sound_speed_sq(sgn, h, eta) > 0)
        rho = ikw_rho(ikw, rng.uniform(0, 1, 10_000))
        eta = model.q_of_rho(ikw, rho) * rng.uniform(0.5, 2.0, rho.size)
        assert np.all(model.sound_speed_sq(ikw, rho, eta) > 0)

    @given(st.floats(0.1, 10.0), st.floats(0.5, 2.0), st.floats(1.0, 5000.0))
    def test_sgn_matches_fd(self, h, ratio, lam):
        c = ModelClosure.sgn(lam)
        eta, e = h * ratio, 1e-6 * h
        fd = (model.pressure(c, h + e, eta) - model.pressure(c, h - e, eta)) / (2 * e)
        assert float(model.sound_speed_sq(c, h, eta)) == pytest.approx(float(fd), rel=1e-6)

    @given(st.floats(0.0, 1.0), st.floats(0.8, 1.25))
    def test_ikw_matches_fd(self, frac, ratio):
        from hyperdisp.experiments import ikw_closure
        c = ikw_closure()
        rho = ikw_rho(c, frac)
        eta = float(model.q_of_rho(c, rho)) * ratio
        vol = 1.0 / rho - c.Y1 / c.rho10
        e = 1e-5 * rho * rho * vol  # step small against the gas volume, not rho itself
        fd = (8 * (model.pressure(c, rho + e, eta) - model.pressure(c, rho - e, eta))
              - (model.pressure(c, rho + 2 * e, eta) - model.pressure(c, rho - 2 * e, eta))) / (12 * e)
        assert float(model.sound_speed_sq(c, rho, eta)) == pytest.approx(float(fd), rel=1e-6)

    def test_equilibrium_speed_is_slope_along_q(self, ikw):
        rho = ikw.reference_density()
        e = 1e-7 * rho * rho * (1.0 / rho - ikw.Y1 / ikw.rho10)

        def p_eq(r):
            return float(model.pressure(ikw, r, model.q_of_rho(ikw, r)))

        fd = (p_eq(rho + e) - p_eq(rho - e)) / (2 * e)
        assert float(model.equilibrium_sound_speed_sq(ikw, rho)) == pytest.approx(fd, rel=1e-5)

    def test_kernels_agree(self, sgn, ikw, rng):
        for c in (sgn, ikw):
            cp = c.params()
            rho = 1.3 if c.kind == "sgn" else c.reference_density() * 1.0000001
            eta = float(model.q_of_rho(c, rho)) * 1.05
            assert kernels.pressure_s(cp, rho, eta) == pytest.approx(float(model.pressure(c, rho, eta)), rel=1e-13)
            assert kernels.sound_speed_sq_s(cp, rho, eta) == pytest.approx(
                float(model.sound_speed_sq(c, rho, eta)), rel=1e-13)


class TestFlux:
    def test_rest_state(self, sgn):
        U = model.prim_to_cons(PrimitiveState(1.3, 0.0, 0.0, 1.4, 0.0))
        F = model.physical_flux(sgn, U)
        assert np.array_equal(F, [0.0, float(model.pressure(sgn, 1.3, 1.4)), 0.0, 0.0, 0.0])

    def test_moving_state(self):
        U = model.prim_to_cons(PrimitiveState(1.0, 2.0, 0.0, 1.0, 0.0))
        F = model.physical_flux(ModelClosure.sgn(0.0), U)
        assert np.allclose(F, [2.0, 4.0 + 4.905, 0.0, 2.0, 0.0], rtol=1e-15, atol=0)

    @given(st.floats(0.1, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 2), st.floats(-1, 1))
    def test_y_flux_is_swapped_x_flux(self, h, u, v, r, w):
        c = ModelClosure.sgn(500.0)
        U = model.prim_to_cons(PrimitiveState(h, u, v, h * r, w))
        Us = U[[0, 2, 1, 3, 4]]
        assert np.array_equal(model.physical_flux(c, U, "y"), model.physical_flux(c, Us, "x")[[0, 2, 1, 3, 4]])

    def test_bad_axis(self, sgn):
        with pytest.raises(ValueError):
            model.physical_flux(sgn, np.array([1.0, 0, 0, 1, 0]), axis="z")


class TestSource:
    @given(st.floats(0.1, 5), st.floats(-2, 2))
    def test_equilibrium(self, h, w):
        U = model.prim_to_cons(PrimitiveState(h, 0.3, 0.0, h, w))
        S = model.relaxation_source(ModelClosure.sgn(800.0), U)
        # eta = (h*h)/h is h only up to one rounding
        assert np.allclose(S, [0.0, 0.0, 0.0, h * w, 0.0], rtol=1e-15, atol=1e-12 * 800.0)

    def test_zero_source(self, sgn):
        S = model.relaxation_source(sgn, np.array([1.0, 0.5, 0.0, 1.0, 0.0]))
        assert np.all(S == 0.0)

    def test_example(self):
        U = model.prim_to_cons(PrimitiveState(1.0, 0.0, 0.0, 1.2, 0.0))
        S = model.relaxation_source(ModelClosure.sgn(300.0), U)
        assert S[4] == pytest.approx(-60.0, rel=1e-13)

    def test_ikw_restoring_sign(self, ikw):
        rho = ikw.reference_density()
        eq = float(model.q_of_rho(ikw, rho))
        for ratio, sign in ((1.01, -1.0), (0.99, 1.0)):
            U = model.prim_to_cons(PrimitiveState(rho, 0.0, 0.0, eq * ratio, 0.0))
            assert np.sign(model.relaxation_source(ikw, U)[4]) == sign


class TestEnergy:
    def test_rest_equilibrium(self, sgn, ikw):
        assert float(model.total_energy(sgn, PrimitiveState(1.0, 0, 0, 1.0, 0))) == pytest.approx(4.905)
        rho = ikw.reference_density()
        E = model.total_energy(ikw, PrimitiveState(rho, 0, 0, model.q_of_rho(ikw, rho), 0))
        assert float(E) == pytest.approx(float(rho * model.specific_energy(ikw, rho)), rel=1e-12)

    def test_example(self, sgn):
        E = model.total_energy(sgn, PrimitiveState(1.0, 1.0, 0.0, 1.0, 0.0))
        assert float(E) == pytest.approx(0.5 + 4.905, rel=1e-15)

    @given(st.floats(0.1, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 2), st.floats(-2, 2),
           st.floats(0, 2 * math.pi))
    def test_bounded_below_and_rotation_invariant(self, h, u, v, r, w, theta):
        c = ModelClosure.sgn(1200.0)
        E = float(model.total_energy(c, PrimitiveState(h, u, v, h * r, w)))
        assert E >= float(h * model.specific_energy(c, h))
        ur, vr = u * math.cos(theta) - v * math.sin(theta), u * math.sin(theta) + v * math.cos(theta)
        assert float(model.total_energy(c, PrimitiveState(h, ur, vr, h * r, w))) == pytest.approx(E, rel=1e-13)


class TestConversion:
    def test_identity_example(self):
        P = model.cons_to_prim(np.array([1.0, 0, 0, 1.0, 0]))
        assert tuple(float(c) for c in P) == (1.0, 0.0, 0.0, 1.0, 0.0)

    @pytest.mark.parametrize("rho", [0.0, -1.0, 1e-13, float("nan")])
    def test_bad_depth(self, rho):
        with pytest.raises(NonPositiveDepth):
            model.cons_to_prim(np.array([rho, 0, 0, 1.0, 0]))

    def test_round_trip(self, rng):
        n = 100_000
        P = PrimitiveState(rng.uniform(1e-3, 1e3, n), *rng.normal(scale=10.0, size=(4, n)))
        back = model.cons_to_prim(model.prim_to_cons(P))
        for a, b in zip(back, P):
            ulp = np.spacing(np.abs(b))
            assert np.all(np.abs(a - b) <= 4 * ulp)

    @given(st.lists(st.floats(1e-6, 1e6, **finite), min_size=5, max_size=5))
    def test_round_trip_property(self, vals):
        P = PrimitiveState(*vals)
        back = model.cons_to_prim(model.prim_to_cons(P))
        assert np.allclose(back, vals, rtol=4e-16, atol=0)
