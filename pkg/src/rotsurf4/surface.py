"""Closed-form geometry of the rotation surface

    X(s, t) = (x(s) cos t, x(s) sin t, y(s) cos t, y(s) sin t)

for a unit-speed meridian (x(s), 0, y(s), 0). The moving frame is

    e1 = X_t / r,  e2 = X_s,  e3 = (-y' cos t, -y' sin t, x' cos t, x' sin t),
    e4 = (-y sin t, y cos t, x sin t, -x cos t) / r,       r^2 = x^2 + y^2,

and everything else is expressed through the three functions

    a = (x x' + y y') / r^2,   b = (x y' - x' y) / r^2,   c = x' y'' - x'' y'.

All functions accept scalar or array parameters and broadcast.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DomainError, FamilyError, PreconditionError
from .exterior import frame_biv_to_fixed
from .profiles import UNIT_SPEED_TOL, ProfileCurve, circle

DEFAULT_RHO_MIN = 1e-6


@dataclass(frozen=True)
class RotationSurface:
    profile: ProfileCurve
    s_range: tuple
    t_range: tuple = (-math.inf, math.inf)
    rho_min: float = DEFAULT_RHO_MIN


@dataclass(frozen=True)
class InvariantTriple:
    a: object
    b: object
    c: object
    da: object
    db: object
    dc: object


@dataclass(frozen=True)
class SecondFundamental:
    """h3[..., i, k] = h^3_ik and h4[..., i, k] = h^4_ik with i, k in {1, 2}."""

    h3: np.ndarray
    h4: np.ndarray


@dataclass(frozen=True)
class ConnectionForms:
    """omega_AB = coef[(A, B)][0] * omega_1 + coef[(A, B)][1] * omega_2."""

    coef: dict = field(default_factory=dict)


def rotation_surface(profile, s_range=None, t_range=None, rho_min=DEFAULT_RHO_MIN, samples=200):
    """Validate ``profile`` and wrap it as a :class:`RotationSurface`.

    Raises :class:`PreconditionError` for non-unit-speed profiles (reparametrize
    them first) and :class:`DegeneracyError` if the meridian gets within
    ``sqrt(rho_min)`` of the origin.
    """
    s_range = tuple(map(float, s_range or profile.domain))
    if not s_range[0] < s_range[1]:
        raise DomainError(f"degenerate s range {s_range}")
    s = np.linspace(*s_range, samples)
    residual = float(np.max(profile.speed_residual(s)))
    if residual > UNIT_SPEED_TOL:
        raise PreconditionError(
            f"profile {profile.label!r} is not unit speed (max |x'^2+y'^2-1| = {residual:.3g}); "
            "reparametrize it by arclength first")
    x, y = profile.point(s)
    rho = float(np.min(np.asarray(x) ** 2 + np.asarray(y) ** 2))
    if rho < rho_min:
        raise DegeneracyError(f"meridian radius^2 drops to {rho:.3g} < {rho_min:g}")
    return RotationSurface(profile, s_range, tuple(t_range) if t_range else (-math.inf, math.inf),
                           rho_min)


def flat_family(lam, b0, d=0.0, s_range=None, t_range=None):
    """Flat surface with pointwise 1-type Gauss map: meridian lam (cos, sin)(b0 s + d)."""
    if abs(b0 * b0 * lam * lam - 1.0) > 1e-12:
        raise FamilyError(f"flat family needs b0^2 lambda^2 = 1, got {b0 * b0 * lam * lam}")
    return rotation_surface(circle(lam, b0, d), s_range, t_range)


def _check_s(surf, s):
    lo, hi = surf.s_range
    s = np.asarray(s, dtype=float)
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    if np.any((s < lo - slack) | (s > hi + slack)):
        raise DomainError(f"s outside [{lo}, {hi}]")
    return s


def _check_t(surf, t):
    lo, hi = surf.t_range
    t = np.asarray(t, dtype=float)
    if np.any((t < lo) | (t > hi)):
        raise DomainError(f"t outside [{lo}, {hi}]")
    return t


def _profile_jets(surf, s):
    xj, yj = surf.profile.jets(s)
    r2 = xj.value**2 + yj.value**2
    if np.any(r2 < surf.rho_min):
        raise DegeneracyError(f"meridian radius^2 below {surf.rho_min:g}")
    return xj, yj, r2


def surface_map(profile):
    """X(s, t) as a plain function; works on complex arguments when the profile does."""

    def X(s, t):
        x, y = profile.point(s)
        ct, st = np.cos(t), np.sin(t)
        return np.stack(np.broadcast_arrays(x * ct, x * st, y * ct, y * st), axis=-1)

    return X


def embed(surf, s, t):
    s = _check_s(surf, s)
    t = _check_t(surf, t)
    return surface_map(surf.profile)(s, t)


def _frame_from_jets(xj, yj, r2, t):
    x, y, dx, dy = xj.value, yj.value, xj.d1, yj.d1
    r = np.sqrt(r2)
    ct, st = np.cos(t), np.sin(t)
    rows = [
        ((-x * st) / r, (x * ct) / r, (-y * st) / r, (y * ct) / r),
        (dx * ct, dx * st, dy * ct, dy * st),
        (-dy * ct, -dy * st, dx * ct, dx * st),
        ((-y * st) / r, (y * ct) / r, (x * st) / r, (-x * ct) / r),
    ]
    return np.stack([np.stack(np.broadcast_arrays(*row), axis=-1) for row in rows], axis=-2)


def closed_frame(surf, s, t):
    """Orthonormal frame (e1, e2, e3, e4) stacked on axis -2; shape (..., 4, 4)."""
    s = _check_s(surf, s)
    t = _check_t(surf, t)
    xj, yj, r2 = _profile_jets(surf, s)
    return _frame_from_jets(xj, yj, r2, t)


def invariants(surf, s):
    s = _check_s(surf, s)
    xj, yj, r2 = _profile_jets(surf, s)
    x0, x1, x2, x3 = xj.as_tuple()
    y0, y1, y2, y3 = yj.as_tuple()
    n = x0 * x1 + y0 * y1
    m = x0 * y1 - x1 * y0
    dn = x1 * x1 + x0 * x2 + y1 * y1 + y0 * y2
    dm = x0 * y2 - x2 * y0
    dr2 = 2.0 * n
    a = n / r2
    b = m / r2
    c = x1 * y2 - x2 * y1
    return InvariantTriple(
        a=a,
        b=b,
        c=c,
        da=(dn * r2 - n * dr2) / r2**2,
        db=(dm * r2 - m * dr2) / r2**2,
        dc=x1 * y3 - x3 * y1,
    )


def second_fundamental(surf, s):
    inv = invariants(surf, s)
    a, b, c = np.broadcast_arrays(inv.a, inv.b, inv.c)
    zero = np.zeros_like(a)
    h3 = np.stack([np.stack([b, zero], -1), np.stack([zero, c], -1)], -2)
    h4 = np.stack([np.stack([zero, -b], -1), np.stack([-b, zero], -1)], -2)
    return SecondFundamental(h3, h4)


def connection_forms(surf, s):
    inv = invariants(surf, s)
    a, b, c = inv.a, inv.b, inv.c
    zero = 0.0 * a
    return ConnectionForms({
        (1, 2): (-a, zero),
        (1, 3): (b, zero),
        (1, 4): (zero, -b),
        (2, 3): (zero, c),
        (2, 4): (-b, zero),
        (3, 4): (-a, zero),
    })


def frame_derivatives(surf, s, t):
    """Covariant derivatives D[..., k, A, :] = derivative of e_(A+1) along e_(k+1), k in {0, 1}.

    Built from the connection forms: d e_A = sum_B omega_AB e_B.
    """
    frame = closed_frame(surf, s, t)
    forms = connection_forms(surf, s).coef
    shape = frame.shape[:-2]
    omega = np.zeros(shape + (2, 4, 4))
    for (A, B), (w1, w2) in forms.items():
        for k, w in enumerate((w1, w2)):
            w = np.broadcast_to(w, shape)
            omega[..., k, A - 1, B - 1] = w
            omega[..., k, B - 1, A - 1] = -w
    return np.einsum("...kab,...bj->...kaj", omega, frame)


def gaussian_curvature(surf, s):
    inv = invariants(surf, s)
    return inv.b * inv.c - inv.b**2


def gauss_codazzi_residual(surf, s):
    """(|a' + a^2 - b^2 + bc|, |b' + 2ab - ac|)."""
    i = invariants(surf, s)
    gauss = np.abs(i.da + i.a**2 - i.b**2 + i.b * i.c)
    codazzi = np.abs(i.db + 2.0 * i.a * i.b - i.a * i.c)
    return gauss, codazzi


def laplacian_gauss_closed(surf, s):
    """Laplacian of the Gauss map on the moving basis (e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4)."""
    i = invariants(surf, s)
    a, b, c = i.a, i.b, i.c
    coeffs = (
        3.0 * b**2 + c**2,
        2.0 * a * b - a * c - i.dc,
        0.0 * a,
        0.0 * a,
        -3.0 * a * b - i.db,
        2.0 * b**2 - 2.0 * b * c,
    )
    return np.stack(np.broadcast_arrays(*coeffs), axis=-1)


def laplacian_gauss_fixed(surf, s, t):
    """Closed-form Laplacian of the Gauss map in fixed coordinates."""
    coeffs = laplacian_gauss_closed(surf, s)
    frame = closed_frame(surf, s, t)
    return frame_biv_to_fixed(coeffs, frame)


def gauss_map_closed(surf, s, t):
    frame = closed_frame(surf, s, t)
    coeffs = np.zeros(frame.shape[:-2] + (6,))
    coeffs[..., 0] = 1.0
    return frame_biv_to_fixed(coeffs, frame)


def exact_sample(surf, s, t):
    """Position and coordinate partials of X from the profile jets."""
    from .numeric import ImmersionSample

    s = _check_s(surf, s)
    t = _check_t(surf, t)
    xj, yj = surf.profile.jets(s)
    ct, st = np.cos(t), np.sin(t)

    def lift(u, v, dt):
        # (u, v) meridian coordinates, dt = order of t-derivative
        c, sn = [(ct, st), (-st, ct), (-ct, -st)][dt]
        return np.stack(np.broadcast_arrays(u * c, u * sn, v * c, v * sn), axis=-1)

    return ImmersionSample(
        position=lift(xj.value, yj.value, 0),
        Xs=lift(xj.d1, yj.d1, 0),
        Xt=lift(xj.value, yj.value, 1),
        Xss=lift(xj.d2, yj.d2, 0),
        Xst=lift(xj.d1, yj.d1, 1),
        Xtt=lift(xj.value, yj.value, 2),
    )
