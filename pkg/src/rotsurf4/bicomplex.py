"""Bicomplex numbers x1 + x2 i + x3 j + x4 ij with i^2 = j^2 = -1, ij = ji.

Also the hyperquadric P = {x != 0 : x1 x4 = x2 x3}, which is a Lie group
under the bicomplex product, and numerical checks that a rotation surface
X(s, t) is a subgroup of it.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InversionError, ParseError, PatternError, PreconditionError

GROUP_TOL = 1e-10
PATTERN_TOL = 1e-12
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class Bicomplex:
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.components):
            raise ValueError("non-finite bicomplex component")

    @classmethod
    def from_array(cls, a):
        return cls(*map(float, np.asarray(a, dtype=float)))

    @property
    def components(self):
        return (self.x1, self.x2, self.x3, self.x4)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.components, dtype=dtype)

    def __add__(self, other):
        return bc_add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return bc_add(self, bc_scale(-1.0, _lift(other)))

    def __neg__(self):
        return bc_scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, Bicomplex):
            return bc_mul(self, other)
        return bc_scale(other, self)

    def __rmul__(self, other):
        return bc_scale(other, self)

    def norm(self):
        return math.sqrt(sum(v * v for v in self.components))

    def __str__(self):
        return format_bicomplex(self)


ONE = Bicomplex(1.0)
I = Bicomplex(0.0, 1.0)
J = Bicomplex(0.0, 0.0, 1.0)
IJ = Bicomplex(0.0, 0.0, 0.0, 1.0)


def _lift(v):
    return v if isinstance(v, Bicomplex) else Bicomplex(float(v))


def bc_add(x, y):
    return Bicomplex(*(a + b for a, b in zip(x.components, y.components)))


def bc_scale(lam, x):
    return Bicomplex(*(lam * a for a in x.components))


def mul_arrays(x, y):
    """Bicomplex product on arrays with trailing axis 4."""
    x = np.asarray(x)
    y = np.asarray(y)
    x1, x2, x3, x4 = (x[..., k] for k in range(4))
    y1, y2, y3, y4 = (y[..., k] for k in range(4))
    return np.stack([
        x1 * y1 - x2 * y2 - x3 * y3 + x4 * y4,
        x1 * y2 + x2 * y1 - x3 * y4 - x4 * y3,
        x1 * y3 + x3 * y1 - x2 * y4 - x4 * y2,
        x1 * y4 + x4 * y1 + x2 * y3 + x3 * y2,
    ], axis=-1)


def bc_mul(x, y):
    return Bicomplex.from_array(mul_arrays(np.array(x), np.array(y)))


def matrix_arrays(x):
    x = np.asarray(x)
    x1, x2, x3, x4 = (x[..., k] for k in range(4))
    rows = [
        [x1, -x2, -x3, x4],
        [x2, x1, -x4, -x3],
        [x3, -x4, x1, -x2],
        [x4, x3, x2, x1],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def to_matrix(x):
    """The 4x4 real matrix of x; a faithful representation of the algebra."""
    return matrix_arrays(np.array(x))


def from_matrix(M, tol=PATTERN_TOL):
    M = np.asarray(M, dtype=float)
    if M.shape != (4, 4):
        raise PatternError(f"expected a 4x4 matrix, got shape {M.shape}")
    x = Bicomplex.from_array(M[:, 0])
    deviation = float(np.max(np.abs(to_matrix(x) - M)))
    scale = max(1.0, float(np.max(np.abs(M))))
    if deviation > tol * scale:
        raise PatternError(f"matrix lacks the bicomplex pattern (deviation {deviation:.3g})")
    return x


def conjugate(x, which):
    """Conjugations t1 (i -> -i), t2 (j -> -j) and t3 (both)."""
    x1, x2, x3, x4 = x.components
    if which == "t1":
        return Bicomplex(x1, -x2, x3, -x4)
    if which == "t2":
        return Bicomplex(x1, x2, -x3, -x4)
    if which == "t3":
        return Bicomplex(x1, -x2, -x3, x4)
    raise ValueError(f"unknown conjugation {which!r}; expected t1, t2 or t3")


def hyperquadric_residual(x):
    x = np.asarray(x)
    return x[..., 0] * x[..., 3] - x[..., 1] * x[..., 2]


def in_hyperquadric(x, tol=1e-12):
    """Membership in P, with tolerance relative to the squared component scale."""
    a = np.array(x, dtype=float)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return False
    return abs(float(hyperquadric_residual(a))) <= tol * scale * scale


def bc_inverse(x):
    """Inverse via the matrix image; zero divisors raise :class:`InversionError`."""
    scale = max(abs(v) for v in x.components)
    if scale == 0.0:
        raise InversionError("0 is not invertible")
    # work with x / scale so the singularity test is scale free and cannot underflow
    M = to_matrix(x) / scale
    det = float(np.linalg.det(M))
    if abs(det) < SINGULAR_TOL:
        raise InversionError(f"{format_bicomplex(x)} is a zero divisor (det g(x/|x|) = {det:.3g})")
    with np.errstate(over="ignore"):
        inv = np.linalg.inv(M) / scale
    if not np.all(np.isfinite(inv)):
        raise InversionError(f"inverse of {format_bicomplex(x)} overflows")
    return from_matrix(inv, tol=1e-9)


# --- literals ---------------------------------------------------------------

_TERM_RE = re.compile(r"\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(ij|ji|i|j)?")


def parse_bicomplex(text):
    """Parse literals such as ``1+2i-3j+0.5ij``, ``i``, ``-ij`` or ``2``."""
    if text.strip() == "":
        raise ParseError("empty bicomplex literal", 0)
    comps = [0.0, 0.0, 0.0, 0.0]
    slot = {None: 0, "i": 1, "j": 2, "ij": 3, "ji": 3}
    pos = 0
    first = True
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TERM_RE.match(text, pos)
        sign, number, unit = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or (number is None and unit is None):
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()))
        if not sign and not first:
            raise ParseError("expected '+' or '-' between terms", pos)
        value = float(number) if number is not None else 1.0
        comps[slot[unit]] += -value if sign == "-" else value
        pos = m.end()
        first = False
    return Bicomplex(*comps)


def _fmt(v):
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def format_bicomplex(x):
    """Canonical ``a+bi+cj+dij`` with all four terms."""
    x1, x2, x3, x4 = (0.0 if v == 0 else v for v in x.components)
    out = _fmt(x1)
    for v, unit in ((x2, "i"), (x3, "j"), (x4, "ij")):
        out += ("-" if v < 0 else "+") + _fmt(abs(v)) + unit
    return out


# --- group structure of rotation surfaces -----------------------------------


@dataclass
class GroupCheckReport:
    closure_residual: float
    inverse_residual: float
    identity_residual: float
    pairs: int
    tol: float = GROUP_TOL
    scale: float = 1.0
    errors: list = field(default_factory=list)

    def _passes(self, r):
        return math.isfinite(r) and r <= self.tol * max(1.0, self.scale)

    @property
    def closure(self):
        return self._passes(self.closure_residual)

    @property
    def inverse(self):
        return self._passes(self.inverse_residual)

    @property
    def identity(self):
        return self._passes(self.identity_residual)

    @property
    def passed(self):
        return self.closure and self.inverse and self.identity and not self.errors

    def as_dict(self):
        return {
            "closure_residual": self.closure_residual,
            "inverse_residual": self.inverse_residual,
            "identity_residual": self.identity_residual,
            "closure": self.closure,
            "inverse": self.inverse,
            "identity": self.identity,
            "pass": self.passed,
            "pairs": self.pairs,
            "tol": self.tol,
            "scale": self.scale,
            "errors": list(self.errors),
        }


def group_axiom_check(X, s_values, t_values, tol=GROUP_TOL):
    """Residuals of X(s1,t1) X(s2,t2) = X(s1+s2, t1+t2), X(s,t) X(-s,-t) = 1 and X(0,0) = 1.

    ``X`` is a vectorized surface map; all pairs of the (s, t) grid are used.
    """
    S, T = np.meshgrid(np.asarray(s_values, float), np.asarray(t_values, float), indexing="ij")
    S, T = S.ravel(), T.ravel()
    errors = []
    nan = float("nan")
    try:
        P = X(S, T)
        scale = float(np.max(np.abs(P)))
        prod = mul_arrays(P[:, None, :], P[None, :, :])
        target = X(S[:, None] + S[None, :], T[:, None] + T[None, :])
        closure = float(np.max(np.linalg.norm(prod - target, axis=-1)))
    except Exception as exc:  # evaluation errors belong in the report
        errors.append(f"closure: {exc}")
        closure, scale = nan, 1.0
    one = np.array([1.0, 0.0, 0.0, 0.0])
    try:
        inv = mul_arrays(X(S, T), X(-S, -T))
        inverse = float(np.max(np.linalg.norm(inv - one, axis=-1)))
    except Exception as exc:
        errors.append(f"inverse: {exc}")
        inverse = nan
    try:
        identity = float(np.linalg.norm(np.asarray(X(0.0, 0.0)) - one))
    except Exception as exc:
        errors.append(f"identity: {exc}")
        identity = nan
    return GroupCheckReport(closure, inverse, identity, len(S) ** 2, tol, scale, errors)


def polar_surface_map(u, theta):
    """X(s, t) for the meridian (u(s) cos theta(s), u(s) sin theta(s))."""

    def X(s, t):
        r, th = u(s), theta(s)
        x, y = r * np.cos(th), r * np.sin(th)
        ct, st = np.cos(t), np.sin(t)
        return np.stack(np.broadcast_arrays(x * ct, x * st, y * ct, y * st), axis=-1)

    return X


@dataclass
class LieVerdict:
    subgroup: bool
    rule: str
    homomorphism_residual: float
    linearity_residual: float
    group_check: GroupCheckReport
    agree: bool


def lie_subgroup_verdict(u, theta, s_values=None, t_values=None, tol=GROUP_TOL):
    """Rule-based verdict for polar meridians, cross-checked against the group axioms.

    Passes when u(s1 + s2) = u(s1) u(s2) with u > 0 and theta is additive
    (linear through the origin) on all sampled pairs.
    """
    if not (callable(u) and callable(theta)):
        raise PreconditionError("profile must be given in polar form by callables u and theta")
    s = np.linspace(-2.0, 2.0, 9) if s_values is None else np.asarray(s_values, float)
    t = np.linspace(-math.pi, math.pi, 7) if t_values is None else np.asarray(t_values, float)
    s1, s2 = np.meshgrid(s, s, indexing="ij")
    us = np.broadcast_to(np.asarray(u(s), float), s.shape)
    hom_abs = np.abs(np.asarray(u(s1 + s2), float) - np.outer(us, us))
    hom = float(np.max(hom_abs / np.maximum(1.0, np.abs(np.outer(us, us)))))
    th = np.broadcast_to(np.asarray(theta(s), float), s.shape)
    lin = float(np.max(np.abs(np.asarray(theta(s1 + s2), float) - th[:, None] - th[None, :])))
    positive = bool(np.all(us > 0))
    ok = hom <= tol and lin <= tol and positive
    if ok:
        rule = "u is a homomorphism (R,+) -> (R+,*) and theta is linear: Lie subgroup of P"
    elif not positive:
        rule = "u takes non-positive values"
    elif hom > tol:
        rule = "u is not multiplicative; for constant u = lambda this forces lambda = 1"
    else:
        rule = "theta is not linear"
    report = group_axiom_check(polar_surface_map(u, theta), s, t, tol)
    return LieVerdict(ok, rule, hom, lin, report, ok == report.passed)
