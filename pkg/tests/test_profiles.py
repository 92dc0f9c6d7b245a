import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotsurf4.errors import FamilyError, ParseError, PreconditionError
from rotsurf4.profiles import (
    arclength_reparametrize,
    circle,
    expression_profile,
    line,
    logspiral,
    make_family,
    parse_profile_spec,
    vranceanu,
)
from rotsurf4.surface import invariants, rotation_surface


def test_circle_at_zero():
    c = circle(1.0, 1.0, 0.0)
    x, y = c.point(0.0)
    assert (x, y) == (1.0, 0.0)
    assert c.speed_residual(0.0) == 0.0


def test_logspiral_unit_speed():
    p = logspiral(1.0, 1.0)
    assert p.speed_squared(0.0) == pytest.approx(1.0, abs=1e-15)
    assert p.max_speed_residual() <= 1e-14


def test_line_invariants_by_hand():
    surf = rotation_surface(line(1.0, 0.0, 0.0, 1.0, domain=(-2, 2)))
    inv = invariants(surf, 1.0)
    assert inv.a == pytest.approx(0.5)
    assert inv.b == pytest.approx(0.5)
    assert inv.c == 0.0


def test_logspiral_invariants_by_hand():
    inv = invariants(rotation_surface(logspiral(1.0, 1.0)), 0.0)
    assert (inv.a, inv.b, inv.c) == pytest.approx((1.0, 1.0, 1.0))


@pytest.mark.parametrize("mu", [0.25, 0.5, 1.0, 2.0, 5.0])
def test_logspiral_all_unit_speed(mu):
    assert logspiral(mu, 2.0).max_speed_residual() <= 1e-13


@settings(max_examples=30)
@given(st.floats(0.2, 5), st.floats(-3, 3))
def test_circle_family_unit_speed(lam, d):
    assert circle(lam, 1 / lam, d).max_speed_residual() <= 1e-13


def test_family_errors():
    with pytest.raises(FamilyError):
        circle(0.0)
    with pytest.raises(FamilyError):
        line(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(FamilyError):
        logspiral(1.0, 1.0, domain=(-2.0, 1.0))
    with pytest.raises(FamilyError):
        make_family("torus")
    with pytest.raises(FamilyError):
        make_family("circle", {"lambda": 1, "radius": 2})


def test_circle_override_is_flagged_not_unit_speed():
    c = circle(1.0, 2.0)
    assert not c.unit_speed
    with pytest.raises(PreconditionError):
        rotation_surface(c)


def test_parse_family_spec():
    p = parse_profile_spec("family:circle(lambda=2,b0=0.5,d=0)")
    assert p.params == {"lambda": 2.0, "b0": 0.5, "d": 0.0}
    q = parse_profile_spec("family:logspiral(mu=sqrt(4), s0=1)")
    assert q.params["mu"] == 2.0
    r = parse_profile_spec("family:vranceanu(k=0.3)")
    assert not r.unit_speed


@pytest.mark.parametrize(
    "spec, offset",
    [
        ("family:circle(lambda=1", 22),
        ("nothing", 0),
        ("family:circle(lambda=)", 21),
        ("family:circle(lambda=1*s)", 21),
    ],
)
def test_parse_spec_errors_have_offsets(spec, offset):
    with pytest.raises(ParseError) as info:
        parse_profile_spec(spec)
    assert info.value.offset == offset


def test_parse_spec_unknown_family():
    with pytest.raises((ParseError, FamilyError)):
        parse_profile_spec("family:torus(r=1)")


def test_parse_expression_spec():
    p = parse_profile_spec("expr:x=cos(s);y=sin(s);s=0:6")
    assert p.domain == (0.0, 6.0)
    assert p.unit_speed
    q = parse_profile_spec("expr:x=2*cos(s);y=sin(s);s=0:1")
    assert not q.unit_speed
    with pytest.raises(ParseError):
        parse_profile_spec("expr:x=cos(s);s=0:1")
    with pytest.raises(ParseError):
        parse_profile_spec("expr:x=cos(;y=s;s=0:1")


def test_expression_profile_jets_match_family():
    expr = expression_profile("exp(s)", "s^2", (0.0, 1.0))
    xj, yj = expr.jets(0.5)
    assert xj.as_tuple() == pytest.approx((math.exp(0.5),) * 4)
    assert yj.as_tuple() == pytest.approx((0.25, 1.0, 2.0, 0.0))


def test_reparametrizing_unit_speed_is_identity():
    prof = logspiral(0.5, 1.0)
    re = arclength_reparametrize(prof)
    s = np.linspace(0, re.domain[1], 17)
    a, b = re.point(s), prof.point(s)
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) <= 1e-10


@pytest.mark.parametrize("k", [0.1, 0.3, 0.7])
def test_vranceanu_reparametrized_is_unit_speed(k):
    re = arclength_reparametrize(vranceanu(k))
    assert re.max_speed_residual() <= 1e-8
    assert re.unit_speed and not re.analytic
    # length of e^{ks}(cos s, sin s) on [0, 2 pi] is sqrt(1+k^2)/k (e^{2 pi k} - 1)
    length = math.sqrt(1 + k * k) / k * (math.exp(2 * math.pi * k) - 1)
    assert re.domain[1] == pytest.approx(length, rel=1e-10)


def test_vranceanu_reparametrized_a_branch():
    re = arclength_reparametrize(vranceanu(0.3))
    surf = rotation_surface(re)
    sigma = np.linspace(0.05 * surf.s_range[1], 0.95 * surf.s_range[1], 40)
    inv_a = 1.0 / invariants(surf, sigma).a
    coeffs = np.polyfit(sigma, inv_a, 1)
    assert np.max(np.abs(np.polyval(coeffs, sigma) - inv_a)) <= 1e-6
    # and b = c, so the surface is flat
    inv = invariants(surf, sigma)
    assert np.max(np.abs(inv.b - inv.c)) <= 1e-7


def test_with_domain():
    p = circle(1.0).with_domain(0.0, 1.0)
    assert p.domain == (0.0, 1.0)


def test_reparametrization_extends_past_the_ends():
    # finite-difference stencils at the domain ends must see a smooth curve
    re = arclength_reparametrize(vranceanu(0.3))
    L = re.domain[1]
    for edge in (0.0, L):
        sig = edge + np.array([-2e-3, -1e-3, 0.0, 1e-3, 2e-3])
        x, _ = re.point(sig)
        second = np.diff(x, 2)
        assert np.max(np.abs(second)) <= 1e-5
