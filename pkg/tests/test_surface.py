import math

import numpy as np
import pytest

from rotsurf4.errors import DegeneracyError, DomainError, FamilyError, PreconditionError
from rotsurf4.exterior import biv_norm, gram, pluecker_residual
from rotsurf4.profiles import circle, expression_profile, line, logspiral, vranceanu
from rotsurf4.surface import (
    closed_frame,
    embed,
    exact_sample,
    flat_family,
    frame_derivatives,
    gauss_codazzi_residual,
    gauss_map_closed,
    gaussian_curvature,
    invariants,
    laplacian_gauss_closed,
    rotation_surface,
    second_fundamental,
)

from conftest import builtin_surfaces

FAMILIES = builtin_surfaces()


def test_clifford_point_and_frame():
    surf = flat_family(1.0, 1.0, 0.0)
    assert np.allclose(embed(surf, 0.0, 0.0), [1, 0, 0, 0], atol=1e-15)
    assert np.allclose(closed_frame(surf, 0.0, 0.0), [[0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0], [0, 0, 0, -1]],
                       atol=1e-15)


def test_clifford_invariants():
    inv = invariants(flat_family(1.0, 1.0, 0.0), np.linspace(0, 6, 11))
    assert np.allclose(inv.a, 0, atol=1e-15)
    assert np.allclose(inv.b, 1, atol=1e-15)
    assert np.allclose(inv.c, 1, atol=1e-15)


def test_logspiral_invariants_form_mu_branch():
    # on the logspiral b = c = mu a and a = 1 / (s + s0)
    for mu in (0.5, 1.0, 2.0):
        surf = rotation_surface(logspiral(mu, 1.0))
        s = np.linspace(*surf.s_range, 9)
        inv = invariants(surf, s)
        assert np.allclose(inv.a, 1 / (s + 1), rtol=1e-12)
        assert np.allclose(inv.b, mu * inv.a, rtol=1e-12)
        assert np.allclose(inv.c, mu * inv.a, rtol=1e-12)


def test_line_through_axis_is_totally_geodesic():
    surf = FAMILIES["plane"]
    inv = invariants(surf, np.linspace(0.5, 2.0, 7))
    assert np.allclose(inv.b, 0) and np.allclose(inv.c, 0)
    assert np.allclose(laplacian_gauss_closed(surf, 1.0), 0)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_frame_is_orthonormal(name):
    surf = FAMILIES[name]
    s = np.linspace(*surf.s_range, 17)
    t = np.linspace(-3, 3, 17)
    F = closed_frame(surf, s, t)
    assert np.max(np.abs(gram(F) - np.eye(4))) <= 1e-12
    assert np.allclose(np.linalg.det(F), 1.0, atol=1e-12) or np.allclose(np.linalg.det(F), -1.0, atol=1e-12)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_frame_tangent_to_surface(name):
    surf = FAMILIES[name]
    s = np.linspace(*surf.s_range, 9)[1:-1]
    t = np.linspace(-2, 2, 7)
    S, T = np.meshgrid(s, t, indexing="ij")
    smp = exact_sample(surf, S, T)
    F = closed_frame(surf, S, T)
    r = np.linalg.norm(smp.Xt, axis=-1, keepdims=True)
    assert np.allclose(F[..., 0, :], smp.Xt / r, atol=1e-12)
    assert np.allclose(F[..., 1, :], smp.Xs, atol=1e-12)
    for k in (2, 3):
        assert np.max(np.abs(np.sum(F[..., k, :] * smp.Xs, -1))) <= 1e-12
        assert np.max(np.abs(np.sum(F[..., k, :] * smp.Xt, -1))) <= 1e-12


def structure_equations(inv, F):
    """Explicit structure equations, written out line by line."""
    a, b, c = inv.a, inv.b, inv.c
    e1, e2, e3, e4 = (F[..., k, :] for k in range(4))
    a, b, c = (np.asarray(v)[..., None] for v in (a, b, c))
    return {
        ("e1", "e1"): -a * e2 + b * e3,
        ("e2", "e1"): -b * e4,
        ("e1", "e2"): a * e1 - b * e4,
        ("e2", "e2"): c * e3,
        ("e1", "e3"): -b * e1 - a * e4,
        ("e2", "e3"): -c * e2,
        ("e1", "e4"): b * e2 + a * e3,
        ("e2", "e4"): b * e1,
    }


def fd_frame_derivatives(surf, s, t, h=1e-4):
    # e1 = X_t / r so the derivative along e1 is (1/r) d/dt; along e2 it is d/ds
    x, y = surf.profile.point(s)
    r = np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2)[..., None, None]
    d_t = (closed_frame(surf, s, t + h) - closed_frame(surf, s, t - h)) / (2 * h) / r
    d_s = (closed_frame(surf, s + h, t) - closed_frame(surf, s - h, t)) / (2 * h)
    return {"e1": d_t, "e2": d_s}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_structure_equations_by_finite_differences(name):
    surf = FAMILIES[name]
    lo, hi = surf.s_range
    s = np.linspace(lo + 0.01, hi - 0.01, 25)
    t = np.linspace(-3, 3, 25)
    F = closed_frame(surf, s, t)
    fd = fd_frame_derivatives(surf, s, t)
    expected = structure_equations(invariants(surf, s), F)
    labels = ["e1", "e2", "e3", "e4"]
    for (along, which), vec in expected.items():
        got = fd[along][..., labels.index(which), :]
        assert np.max(np.abs(got - vec)) <= 1e-5, (along, which)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_connection_forms_reproduce_structure_equations(name):
    surf = FAMILIES[name]
    s = np.linspace(*surf.s_range, 11)
    t = np.linspace(-1, 1, 11)
    D = frame_derivatives(surf, s, t)
    expected = structure_equations(invariants(surf, s), closed_frame(surf, s, t))
    for (along, which), vec in expected.items():
        assert np.allclose(D[..., int(along[1]) - 1, int(which[1]) - 1, :], vec, atol=1e-13)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_gauss_codazzi(name):
    surf = FAMILIES[name]
    s = np.linspace(*surf.s_range, 200)
    g, c = gauss_codazzi_residual(surf, s)
    assert np.max(g) <= 1e-8 and np.max(c) <= 1e-8


def test_second_fundamental_table():
    surf = FAMILIES["logspiral-1"]
    h = second_fundamental(surf, 0.4)
    inv = invariants(surf, 0.4)
    assert np.allclose(h.h3, [[inv.b, 0], [0, inv.c]])
    assert np.allclose(h.h4, [[0, -inv.b], [-inv.b, 0]])


def test_curvature_formula():
    surf = FAMILIES["line"]
    s = np.linspace(-2, 2, 9)
    inv = invariants(surf, s)
    assert np.allclose(gaussian_curvature(surf, s), inv.b * inv.c - inv.b**2)
    # rotating the off-axis line is not flat
    assert np.max(np.abs(gaussian_curvature(surf, s))) > 0.1


@pytest.mark.parametrize("lam, b0, d", [(1, 1, 0), (2, 0.5, 0.3), (0.5, 2, -1), (3, 1 / 3, 0)])
def test_flat_family_constants(lam, b0, d):
    surf = flat_family(lam, b0, d)
    s = np.linspace(*surf.s_range, 33)
    inv = invariants(surf, s)
    assert np.allclose(inv.a, 0, atol=1e-14)
    assert np.allclose(inv.b, b0) and np.allclose(inv.c, b0)
    assert np.max(np.abs(gaussian_curvature(surf, s))) <= 1e-12
    assert np.allclose(laplacian_gauss_closed(surf, s), [4 * b0**2, 0, 0, 0, 0, 0], atol=1e-12)


def test_gauss_map_is_unit_and_simple():
    surf = FAMILIES["logspiral-2"]
    G = gauss_map_closed(surf, np.linspace(0, 2, 13), np.linspace(-3, 3, 13))
    assert np.allclose(biv_norm(G), 1, atol=1e-14)
    assert np.max(np.abs(pluecker_residual(G))) <= 1e-14


def test_slots_are_explicit_zeros():
    out = laplacian_gauss_closed(FAMILIES["line"], np.linspace(-1, 1, 5))
    assert out.shape == (5, 6)
    assert np.all(out[:, 2] == 0) and np.all(out[:, 3] == 0)


def test_errors():
    with pytest.raises(FamilyError):
        flat_family(2.0, 1.0)
    with pytest.raises(PreconditionError):
        rotation_surface(vranceanu(0.3))
    with pytest.raises(DegeneracyError):
        rotation_surface(line(0.0, 0.0, 1.0, 0.0, domain=(0.0, 1.0)))
    surf = rotation_surface(circle(1.0), t_range=(0.0, 1.0))
    with pytest.raises(DomainError):
        embed(surf, 100.0, 0.5)
    with pytest.raises(DomainError):
        closed_frame(surf, 0.5, 2.0)


def test_expression_profile_matches_family():
    expr = expression_profile("2*cos(s/2)", "2*sin(s/2)", (0.0, 4 * math.pi))
    fam = circle(2.0)
    a, b = rotation_surface(expr), rotation_surface(fam)
    s = np.linspace(0.1, 12, 9)
    assert np.allclose(laplacian_gauss_closed(a, s), laplacian_gauss_closed(b, s), atol=1e-13)
