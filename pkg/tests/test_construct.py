import numpy as np
import pytest

from sobovanish.construct import (
    MollifiedField,
    MollifierSpec,
    Schedule,
    default_schedule,
    field_eval_1d,
    field_eval_nd,
    mollifier_cdf,
    smooth_bump,
    synthesize_schedule,
    transport_schedule,
)
from sobovanish.errors import ConstructionError, DomainError, SynthesisError
from sobovanish.flow import transport_endpoints


def bump_target(x):
    return x + 0.05 * smooth_bump(x, 1.2, 1.8)


def test_mollifier_cdf_support_and_symmetry():
    m = MollifierSpec(0.1)
    assert mollifier_cdf(m, -0.1) == 0.0
    assert mollifier_cdf(m, -5.0) == 0.0
    assert mollifier_cdf(m, 0.0) == pytest.approx(0.5, abs=1e-14)
    assert mollifier_cdf(m, 0.1) == 1.0
    assert mollifier_cdf(m, 3.0) == 1.0
    x = np.linspace(-0.1, 0.1, 1001)
    c = m.cdf(x)
    assert np.all(np.diff(c) >= 0.0)
    assert np.max(np.abs(c + m.cdf(-x) - 1.0)) < 1e-14


def test_mollifier_cdf_against_quadrature():
    m = MollifierSpec(0.2)
    from scipy.integrate import quad

    for x in np.linspace(-0.19, 0.19, 17):
        ref, _ = quad(lambda y: float(m.density(y)), -0.2, x, epsabs=1e-14, epsrel=1e-13)
        assert m.cdf(x) == pytest.approx(ref, abs=1e-12)


def test_mollifier_validation():
    with pytest.raises(ConstructionError):
        MollifierSpec(0.0)
    with pytest.raises(ConstructionError):
        MollifierSpec(0.1, shape="box")


def test_radial_profile_unit_mass():
    from sobovanish.quadrature import adaptive_gk
    from sobovanish.sobolev import surface_volume

    m = MollifierSpec(1.0)
    for n in (1, 2, 3):
        prof = m.radial_profile(n)
        mass, _ = adaptive_gk(lambda r: prof.fn(r) * r ** (n - 1), 0.0, 1.0, tol=1e-14)
        assert surface_volume(n) * mass == pytest.approx(1.0, rel=1e-12)


def test_default_schedule_bump():
    s = default_schedule(1.0, 1.5, 0.2)
    t = np.linspace(0.0, 1.0, 2001)
    f, g = s.f(t), s.g(t)
    assert np.all((f >= 1.4 - 1e-15) & (g <= 1.6 + 1e-15))
    assert np.max(s.width(t)) == pytest.approx(0.2, rel=1e-12)
    assert s.delta == 0.2
    assert np.all(s.width(t[t <= 0.25]) == 0.0)
    assert s.segments() == [(0.0, 0.25), (0.25, 0.75), (0.75, 1.0)]


def test_default_schedule_zero_width():
    s = default_schedule(1.0, 1.5, 0.0)
    t = np.linspace(0.0, 1.0, 11)
    assert np.all(s.f(t) == s.g(t))
    fld = MollifiedField(s, MollifierSpec(0.05))
    assert np.all(fld.velocity(0.5, np.linspace(0.0, 3.0, 50)) == 0.0)
    assert fld.support_band() is None


def test_default_schedule_invariants():
    with pytest.raises(ConstructionError):
        default_schedule(1.0, 1.05, 0.2)  # f dips below 1
    with pytest.raises(ConstructionError):
        default_schedule(1.0, 1.5, -0.1)
    with pytest.raises(ConstructionError):
        default_schedule(0.0, 1.5, 0.1)
    with pytest.raises(ConstructionError):
        default_schedule(1.0, 1.5, 0.1, activation="ramp")


def test_custom_schedule_check():
    bad = Schedule(1.0, lambda t: 2.0 + 0 * t, lambda t: 1.5 + 0 * t, lambda t: 1.7 + 0 * t, 0.0)
    with pytest.raises(ConstructionError):
        bad.check()


def test_field_eval_1d():
    s = default_schedule(1.0, 1.5, 1.0, activation="constant")  # f = 1, g = 2
    fld = MollifiedField(s, MollifierSpec(0.1))
    assert field_eval_1d(fld, 0.3, 1.0) == pytest.approx(0.5, abs=1e-14)
    assert field_eval_1d(fld, 0.3, 2.0) == pytest.approx(0.5, abs=1e-14)
    assert field_eval_1d(fld, 0.3, 1.5) == 1.0
    assert np.all(field_eval_1d(fld, 0.3, np.array([1.1, 1.9, 1.45])) == 1.0)
    assert np.all(field_eval_1d(fld, 0.3, np.array([0.0, 0.9, 2.1, 7.0])) == 0.0)
    with pytest.raises(DomainError):
        field_eval_1d(fld, 1.5, 1.0)


def test_field_eval_nd():
    s = default_schedule(1.0, 1.5, 1.0, activation="constant")
    fld = MollifiedField(s, MollifierSpec(0.1), dim=2)
    assert np.array_equal(field_eval_nd(fld, 0.5, np.array([0.0, 1.5])), [1.0, 0.0])
    assert np.array_equal(field_eval_nd(fld, 0.5, np.array([0.3, 0.2])), [0.0, 0.0])
    assert np.array_equal(field_eval_nd(fld, 0.5, np.array([3.0, 3.0])), [0.0, 0.0])
    pts = np.random.default_rng(1).uniform(-2.5, 2.5, (200, 2))
    v = field_eval_nd(fld, 0.5, pts)
    assert np.all(v[:, 1] == 0.0)
    assert np.allclose(np.abs(v[:, 0]), field_eval_1d(MollifiedField(s, MollifierSpec(0.1)), 0.5,
                                                     np.hypot(pts[:, 0], pts[:, 1])))


def test_synthesis_identity():
    sched, residual = synthesize_schedule(lambda x: np.asarray(x, float), (1.2, 1.8))
    assert residual == 0.0
    assert sched.delta == 0.0


def test_synthesis_small_bump():
    sched, residual = synthesize_schedule(bump_target, (1.2, 1.8), T=1.0, tol=1e-8)
    assert residual <= 1e-3
    sched.check()
    # the explicit sweep hits the target to about twice the root tolerance
    assert residual < 1e-6


def test_synthesis_residual_converged_under_refinement():
    r = [synthesize_schedule(bump_target, (1.2, 1.8), tol=tol)[1] for tol in (1e-8, 1e-9, 1e-10)]
    assert max(r) <= 1e-3
    assert abs(r[0] - r[1]) < 1e-6 and abs(r[1] - r[2]) < 1e-6


def test_transport_schedule_endpoints_direct():
    sched = transport_schedule(bump_target, (1.2, 1.8), 1.0)
    xs = np.linspace(1.0, 2.0, 41)
    assert np.max(np.abs(transport_endpoints(sched, xs, tol=1e-12) - bump_target(xs))) < 1e-9


def test_synthesis_errors():
    with pytest.raises(SynthesisError):
        synthesize_schedule(lambda x: x - 0.01 * smooth_bump(x, 1.2, 1.8), (1.2, 1.8))
    with pytest.raises(SynthesisError):
        synthesize_schedule(bump_target, (0.5, 1.8))
    with pytest.raises(SynthesisError):
        synthesize_schedule(bump_target, (1.2, 1.8), T=0.2)
