"""Truncated Taylor jets of order 3.

A :class:`Jet3` carries a value and its first three derivatives with respect
to one parameter. Components may be floats or numpy arrays, so one jet can
describe a whole batch of sample points.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError


def _first_bad(s, mask):
    """Parameter value to report with a domain violation."""
    if s is None:
        return None
    s = np.broadcast_to(np.asarray(s), np.shape(mask))
    bad = np.asarray(s)[np.asarray(mask)]
    return float(bad.flat[0]) if bad.size else None


@dataclass(frozen=True)
class Jet3:
    value: object
    d1: object = 0.0
    d2: object = 0.0
    d3: object = 0.0

    @classmethod
    def variable(cls, s):
        s = np.asarray(s, dtype=float) if np.ndim(s) else float(s)
        return cls(s, 1.0, 0.0, 0.0)

    @classmethod
    def constant(cls, c):
        return cls(c, 0.0, 0.0, 0.0)

    def as_tuple(self):
        return (self.value, self.d1, self.d2, self.d3)

    def chain(self, f0, f1, f2, f3):
        """Compose an outer function with derivatives f0..f3 (at self.value) with this jet."""
        u1, u2, u3 = self.d1, self.d2, self.d3
        return Jet3(
            f0,
            f1 * u1,
            f2 * u1 * u1 + f1 * u2,
            f3 * u1 * u1 * u1 + 3.0 * f2 * u1 * u2 + f1 * u3,
        )

    def __add__(self, other):
        o = _lift(other)
        return Jet3(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.value, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        o = _lift(other)
        u0, u1, u2, u3 = self.as_tuple()
        v0, v1, v2, v3 = o.as_tuple()
        return Jet3(
            u0 * v0,
            u0 * v1 + u1 * v0,
            u0 * v2 + 2.0 * u1 * v1 + u2 * v0,
            u0 * v3 + 3.0 * u1 * v2 + 3.0 * u2 * v1 + u3 * v0,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * reciprocal(_lift(other))

    def __rtruediv__(self, other):
        return _lift(other) * reciprocal(self)

    def __pow__(self, other):
        return power(self, _lift(other))

    def __rpow__(self, other):
        return power(_lift(other), self)


def _lift(x):
    return x if isinstance(x, Jet3) else Jet3.constant(x)


def reciprocal(u, s=None):
    x = u.value
    zero = np.asarray(x) == 0
    if np.any(zero):
        raise EvaluationError("division by zero", _first_bad(s, zero))
    r = 1.0 / x
    return u.chain(r, -r * r, 2.0 * r**3, -6.0 * r**4)


def sin(u):
    sv, cv = np.sin(u.value), np.cos(u.value)
    return u.chain(sv, cv, -sv, -cv)


def cos(u):
    sv, cv = np.sin(u.value), np.cos(u.value)
    return u.chain(cv, -sv, -cv, sv)


def exp(u):
    ev = np.exp(u.value)
    return u.chain(ev, ev, ev, ev)


def ln(u, s=None):
    x = u.value
    bad = np.asarray(x) <= 0
    if np.any(bad):
        raise EvaluationError("ln of non-positive argument", _first_bad(s, bad))
    r = 1.0 / x
    return u.chain(np.log(x), r, -r * r, 2.0 * r**3)


def sqrt(u, s=None):
    x = u.value
    bad = np.asarray(x) <= 0
    if np.any(bad):
        # derivatives blow up at 0, so the jet needs a strictly positive argument
        raise EvaluationError("sqrt of non-positive argument", _first_bad(s, bad))
    q = np.sqrt(x)
    return u.chain(q, 0.5 / q, -0.25 / (q * x), 0.375 / (q * x * x))


def _is_integer_constant(v):
    if not (np.all(np.asarray(v.d1) == 0) and np.all(np.asarray(v.d2) == 0)
            and np.all(np.asarray(v.d3) == 0)):
        return False
    n = np.asarray(v.value)
    return n.ndim == 0 and float(n).is_integer()


def power(u, v, s=None):
    """u ** v for jets.

    Integer constant exponents accept any base (negative exponents need a
    nonzero base); a real constant exponent needs a positive base; a
    non-constant exponent goes through exp(v ln u).
    """
    if _is_integer_constant(v):
        n = int(float(np.asarray(v.value)))
        if n == 0:
            return Jet3.constant(np.ones_like(np.asarray(u.value, dtype=float)) * 1.0)
        if n < 0:
            return power(reciprocal(u, s), Jet3.constant(-n), s)
        x = u.value
        coeffs = [1.0, n, n * (n - 1), n * (n - 1) * (n - 2)]
        fs = [c * x ** (n - k) if (c != 0 and n - k >= 0) else 0.0 * x for k, c in enumerate(coeffs)]
        return u.chain(*fs)
    const_exponent = all(np.all(np.asarray(d) == 0) for d in (v.d1, v.d2, v.d3))
    if const_exponent:
        x = u.value
        bad = np.asarray(x) <= 0
        if np.any(bad):
            raise EvaluationError("non-integer power of non-positive base", _first_bad(s, bad))
        p = v.value
        return u.chain(x**p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2),
                       p * (p - 1) * (p - 2) * x ** (p - 3))
    return exp(v * ln(u, s))
