"""Meridian curves alpha(s) = (x(s), 0, y(s), 0).

A :class:`ProfileCurve` pairs two coordinate functions. A coordinate function
is any object with ``value(s)`` (plain numbers, possibly complex or arrays) and
``jet(s)`` (a :class:`~rotsurf4.jets.Jet3`, where ``s`` may itself be a jet).
Parsed expressions (:class:`~rotsurf4.expr.BoundExpr`) are the usual kind.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .errors import FamilyError, ParseError, ReparametrizationError
from .expr import BoundExpr, evaluate, parse_expr, uses_variable
from .jets import Jet3

UNIT_SPEED_TOL = 1e-8


@dataclass(frozen=True)
class ProfileCurve:
    x: object
    y: object
    domain: tuple
    label: str = ""
    params: dict = field(default_factory=dict)
    unit_speed: bool = False
    # whether x and y accept complex arguments (needed by complex-step differentiation)
    analytic: bool = True

    def jets(self, s):
        sj = Jet3.variable(s)
        return self.x.jet(sj), self.y.jet(sj)

    def point(self, s):
        return self.x.value(s), self.y.value(s)

    def speed_squared(self, s):
        xj, yj = self.jets(s)
        return xj.d1**2 + yj.d1**2

    def speed_residual(self, s):
        return np.abs(self.speed_squared(s) - 1.0)

    def sample(self, n=200, s_range=None):
        lo, hi = s_range or self.domain
        return np.linspace(lo, hi, n)

    def max_speed_residual(self, n=200, s_range=None):
        return float(np.max(self.speed_residual(self.sample(n, s_range))))

    def with_domain(self, lo, hi):
        return ProfileCurve(self.x, self.y, (float(lo), float(hi)), self.label,
                            dict(self.params), self.unit_speed, self.analytic)


# --- named families -----------------------------------------------------------


def _num(params, name, default=None):
    if name in params:
        v = params[name]
    elif default is not None:
        v = default
    else:
        raise FamilyError(f"missing parameter {name!r}")
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise FamilyError(f"parameter {name!r} must be a real number, got {v!r}") from None
    if not math.isfinite(v):
        raise FamilyError(f"parameter {name!r} must be finite")
    return v


def _check_known(name, params, allowed):
    unknown = set(params) - set(allowed)
    if unknown:
        raise FamilyError(f"{name}: unknown parameter(s) {', '.join(sorted(unknown))}")


def circle(lam, b0=None, d=0.0, domain=None):
    """x = lam cos(b0 s + d), y = lam sin(b0 s + d); b0 defaults to 1/lam."""
    if lam == 0:
        raise FamilyError("circle: lambda must be nonzero")
    if b0 is None:
        b0 = 1.0 / lam
    unit = abs(b0 * b0 * lam * lam - 1.0) <= 1e-12
    period = 2 * math.pi / abs(b0) if b0 != 0 else 1.0
    p = dict(lam=lam, b0=b0, d=d)
    return ProfileCurve(
        BoundExpr.parse("lam*cos(b0*s+d)", **p),
        BoundExpr.parse("lam*sin(b0*s+d)", **p),
        domain or (0.0, period),
        "circle",
        {"lambda": lam, "b0": b0, "d": d},
        unit,
    )


def logspiral(mu, s0=1.0, domain=None):
    """Unit-speed logarithmic spiral with a(s) = 1/(s + s0) and b = c = mu a."""
    lo, hi = domain or (0.0, 2.0)
    if lo + s0 <= 0:
        raise FamilyError(f"logspiral: s + s0 must stay positive on the domain (s0={s0}, s>={lo})")
    lam = 1.0 / math.sqrt(1.0 + mu * mu)
    p = dict(lam=lam, mu=mu, s0=s0)
    return ProfileCurve(
        BoundExpr.parse("lam*(s+s0)*cos(mu*ln(s+s0))", **p),
        BoundExpr.parse("lam*(s+s0)*sin(mu*ln(s+s0))", **p),
        (lo, hi),
        "logspiral",
        {"mu": mu, "s0": s0},
        True,
    )


def line(p, q, u, v, domain=None):
    if abs(u * u + v * v - 1.0) > 1e-12:
        raise FamilyError(f"line: direction must be a unit vector (u^2+v^2={u * u + v * v})")
    b = dict(p=p, q=q, u=u, v=v)
    return ProfileCurve(
        BoundExpr.parse("p+u*s", **b),
        BoundExpr.parse("q+v*s", **b),
        domain or (-1.0, 1.0),
        "line",
        b,
        True,
    )


def vranceanu(k, domain=None):
    """x = e^{ks} cos s, y = e^{ks} sin s (not unit speed)."""
    b = dict(k=k)
    return ProfileCurve(
        BoundExpr.parse("exp(k*s)*cos(s)", **b),
        BoundExpr.parse("exp(k*s)*sin(s)", **b),
        domain or (0.0, 2 * math.pi),
        "vranceanu",
        b,
        False,
    )


FAMILIES = {
    "circle": (("lambda", "b0", "d"), lambda a: circle(
        _num(a, "lambda"), _num(a, "b0") if "b0" in a else None, _num(a, "d", 0.0))),
    "logspiral": (("mu", "s0"), lambda a: logspiral(_num(a, "mu"), _num(a, "s0", 1.0))),
    "line": (("p", "q", "u", "v"), lambda a: line(
        _num(a, "p"), _num(a, "q"), _num(a, "u"), _num(a, "v"))),
    "vranceanu": (("k",), lambda a: vranceanu(_num(a, "k"))),
}


def make_family(name, params=None, **kwargs):
    """Build a named profile family from a parameter mapping.

    >>> make_family("circle", {"lambda": 2.0}).params["b0"]
    0.5
    """
    params = {**(params or {}), **kwargs}
    if name not in FAMILIES:
        raise FamilyError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    allowed, build = FAMILIES[name]
    _check_known(name, params, allowed)
    return build(params)


def expression_profile(x_text, y_text, domain, params=None):
    params = params or {}
    x = BoundExpr.parse(x_text, **params)
    y = BoundExpr.parse(y_text, **params)
    curve = ProfileCurve(x, y, (float(domain[0]), float(domain[1])), "expr",
                         {"x": x_text, "y": y_text, **params}, False)
    unit = curve.max_speed_residual() <= UNIT_SPEED_TOL
    return ProfileCurve(x, y, curve.domain, "expr", curve.params, unit)


# --- arclength reparametrization -------------------------------------------


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_NEWTON_ITER = 12


class _ArclengthInverse:
    """s as a function of arclength sigma, with jets up to order 3."""

    def __init__(self, curve, s_range, nodes=257, tol=1e-10):
        self.curve = curve
        self.lo, self.hi = map(float, s_range)
        self.tol = tol
        self.nodes = np.linspace(self.lo, self.hi, nodes)
        v = np.sqrt(curve.speed_squared(self.nodes))
        if np.min(v) <= 1e-12:
            raise ReparametrizationError("profile speed vanishes on the range")
        pieces = [self._integral(a, b) for a, b in zip(self.nodes[:-1], self.nodes[1:])]
        self.sigma_nodes = np.concatenate([[0.0], np.cumsum(pieces)])
        self.length = float(self.sigma_nodes[-1])

    def speed(self, s):
        v = math.sqrt(float(self.curve.speed_squared(s)))
        if v <= 1e-12:
            raise ReparametrizationError(f"profile speed vanishes at s={s}")
        return v

    def _integral(self, a, b):
        val, _ = integrate.quad(self.speed, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    def _cell_integral(self, a, s):
        """Vectorized Gauss-Legendre integral of the speed over [a, s] inside one cell."""
        half = 0.5 * (s - a)
        pts = (a + half)[..., None] + half[..., None] * _GL_NODES
        v = np.sqrt(self.curve.speed_squared(pts))
        return half * np.sum(v * _GL_WEIGHTS, axis=-1)

    def _invert_scalar(self, sigma):
        if sigma <= 0:
            return self.lo
        if sigma >= self.length:
            return self.hi
        k = int(np.searchsorted(self.sigma_nodes, sigma, side="right")) - 1
        k = min(max(k, 0), len(self.nodes) - 2)
        a, b = self.nodes[k], self.nodes[k + 1]
        base = self.sigma_nodes[k]
        g = lambda s: base + self._integral(a, s) - sigma
        return optimize.brentq(g, a, b, xtol=self.tol * 1e-3, rtol=4 * np.finfo(float).eps)

    def _invert(self, sigma):
        # Newton on sigma(s) = sigma_k + int_{s_k}^s v inside the bracketing cell
        # targets slightly outside [0, L] (finite-difference stencils at the ends)
        # are extrapolated from the end cells rather than clamped
        sig = np.asarray(sigma, dtype=float)
        k = np.clip(np.searchsorted(self.sigma_nodes, sig, side="right") - 1, 0, len(self.nodes) - 2)
        a, b = self.nodes[k], self.nodes[k + 1]
        base, top = self.sigma_nodes[k], self.sigma_nodes[k + 1]
        inside = (sig >= 0.0) & (sig <= self.length)
        s = a + (b - a) * (sig - base) / (top - base)
        for _ in range(_NEWTON_ITER):
            step = (base + self._cell_integral(a, s) - sig) / np.sqrt(self.curve.speed_squared(s))
            s = np.where(inside, np.clip(s - step, a, b), s - step)
            if np.all(np.abs(step) <= self.tol * 1e-3 * np.maximum(1.0, np.abs(s))):
                return s
        bad = np.abs(base + self._cell_integral(a, s) - sig) > self.tol
        if np.any(bad & ~inside):
            raise ReparametrizationError("arclength inversion failed outside the parameter range")
        for i in np.flatnonzero(bad):
            s[i] = self._invert_scalar(float(sig[i]))
        return s

    def __call__(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        flat = self._invert(sigma.ravel())
        return flat.reshape(sigma.shape) if sigma.ndim else float(flat[0])

    def jet(self, sigma):
        """Jet of s(sigma); ``sigma`` may be a number, array or jet."""
        if isinstance(sigma, Jet3):
            inner = self.jet(sigma.value)
            # compose s(sigma(.)) with an outer parameter
            s1, s2, s3 = inner.d1, inner.d2, inner.d3
            return sigma.chain(inner.value, s1, s2, s3)
        s = self(sigma)
        xj, yj = self.curve.jets(s)
        x1, x2, x3 = xj.d1, xj.d2, xj.d3
        y1, y2, y3 = yj.d1, yj.d2, yj.d3
        v = np.sqrt(x1 * x1 + y1 * y1)
        dv = (x1 * x2 + y1 * y2) / v
        ddv = (x2 * x2 + x1 * x3 + y2 * y2 + y1 * y3) / v - dv * dv / v
        return Jet3(s, 1.0 / v, -dv / v**3, (3.0 * dv * dv - ddv * v) / v**5)


@dataclass(frozen=True)
class _Composed:
    fn: object
    inverse: _ArclengthInverse

    def value(self, sigma):
        if np.iscomplexobj(sigma):
            raise TypeError("arclength-reparametrized curves are real-valued only")
        return self.fn.value(self.inverse(sigma))

    def jet(self, sigma):
        return self.fn.jet(self.inverse.jet(sigma))


def arclength_reparametrize(curve, s_range=None, tol=1e-10):
    """Unit-speed version of ``curve`` on [0, L], where L is the length over ``s_range``.

    Arclength is integrated with adaptive quadrature and inverted with Brent's
    method; the derivatives of the inverse come from the inverse function rule,
    so the returned coordinates carry exact order-3 jets.
    """
    inv = _ArclengthInverse(curve, s_range or curve.domain, tol=tol)
    return ProfileCurve(
        _Composed(curve.x, inv),
        _Composed(curve.y, inv),
        (0.0, inv.length),
        f"{curve.label}[arclength]",
        {**curve.params, "s_start": inv.lo},
        True,
        analytic=False,
    )


# --- profile specification strings --------------------------------------------

def _parse_number(text, offset):
    """A real constant written as an expression without s (e.g. ``1/2``, ``-pi``)."""
    try:
        node = parse_expr(text)
    except ParseError as exc:
        raise ParseError(exc.message, offset + exc.offset) from None
    if uses_variable(node):
        raise ParseError("constant expected, found an expression in s", offset)
    return float(evaluate(node, 0.0))


def _split_args(body, offset):
    if body.strip() == "":
        return {}
    out = {}
    pos = 0
    for piece in body.split(","):
        start = offset + pos
        pos += len(piece) + 1
        if "=" not in piece:
            raise ParseError(f"expected name=value, found {piece.strip()!r}", start)
        name, value = piece.split("=", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise ParseError(f"bad parameter name {name!r}", start)
        if name in out:
            raise ParseError(f"duplicate parameter {name!r}", start)
        out[name] = _parse_number(value, start + len(piece.split("=", 1)[0]) + 1)
    return out


def parse_profile_spec(spec):
    """Parse ``family:name(k=v,...)`` or ``expr:x=<expr>;y=<expr>;s=<lo>:<hi>``."""
    text = spec.strip()
    lead = len(spec) - len(spec.lstrip())
    if text.startswith("family:"):
        start = spec.index("family:") + len("family:")
        m = re.compile(r"\s*([A-Za-z_]\w*)\s*").match(spec, start)
        if m is None:
            raise ParseError("expected a family name", start)
        name, pos = m.group(1), m.end()
        if pos == len(spec):
            return make_family(name, {})
        if spec[pos] != "(":
            raise ParseError(f"expected '(' after family name, found {spec[pos]!r}", pos)
        close = spec.rstrip()
        if not close.endswith(")"):
            raise ParseError("expected ')' at end of family spec", len(spec))
        body_end = len(close) - 1
        params = _split_args(spec[pos + 1:body_end], pos + 1)
        return make_family(name, params)
    if text.startswith("expr:"):
        return _parse_expr_spec(spec, spec.index("expr:") + len("expr:"))
    raise ParseError("profile spec must start with 'family:' or 'expr:'", lead)


def _parse_expr_spec(spec, start):
    fields = {}
    pos = start
    for piece in spec[start:].split(";"):
        if "=" not in piece:
            raise ParseError(f"expected key=value, found {piece.strip()!r}", pos)
        key, value = piece.split("=", 1)
        key = key.strip()
        if key not in ("x", "y", "s") or key in fields:
            raise ParseError(f"unexpected or duplicate key {key!r}", pos)
        fields[key] = (value, pos + len(piece.split("=", 1)[0]) + 1)
        pos += len(piece) + 1
    for key in ("x", "y", "s"):
        if key not in fields:
            raise ParseError(f"missing {key}=...", len(spec))
    s_text, s_off = fields["s"]
    if s_text.count(":") != 1:
        raise ParseError("s range must be lo:hi", s_off)
    lo_text, hi_text = s_text.split(":")
    lo = _parse_number(lo_text, s_off)
    hi = _parse_number(hi_text, s_off + len(lo_text) + 1)
    if not lo < hi:
        raise ParseError("s range must satisfy lo < hi", s_off)
    for key in ("x", "y"):
        text, off = fields[key]
        try:
            parse_expr(text)
        except ParseError as exc:
            raise ParseError(exc.message, off + exc.offset) from None
    return expression_profile(fields["x"][0].strip(), fields["y"][0].strip(), (lo, hi))
