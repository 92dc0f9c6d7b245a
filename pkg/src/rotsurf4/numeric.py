"""Numerical differential geometry of an arbitrary immersion X(s, t) into E^4.

Nothing here knows about rotation surfaces; these routines are the oracle the
closed forms in :mod:`rotsurf4.surface` are checked against. A surface map is
any vectorized callable ``X(s, t) -> array (..., 4)``.

The tangent frame is ordered (t, s): e1 is along X_t and e2 is the unit
residual of X_s, which reproduces the moving frame used for rotation surfaces.
"""

from dataclasses import dataclass

import numpy as np

from .errors import FrameError
from .exterior import wedge
from .surface import SecondFundamental

DEFAULT_JET_STEP = 1e-4
DEFAULT_LAPLACIAN_STEP = 1e-3
METRIC_FLOOR = 1e-12
_COMPLEX_STEP = 1e-20
_FD4_STEP = 1e-3


@dataclass(frozen=True)
class ImmersionSample:
    position: np.ndarray
    Xs: np.ndarray
    Xt: np.ndarray
    Xss: np.ndarray
    Xst: np.ndarray
    Xtt: np.ndarray


@dataclass(frozen=True)
class MetricComponents:
    """First fundamental form in the (t, s) coordinate order of the frame.

    E = <X_t, X_t>, F = <X_t, X_s>, G = <X_s, X_s>.
    """

    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    det: np.ndarray


def _dot(u, v):
    return np.sum(u * v, axis=-1)


def numeric_jets(X, s, t, h=DEFAULT_JET_STEP):
    """Second-order central differences for all first and second partials."""
    if h <= 0:
        raise ValueError("step must be positive")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    c = X(s, t)
    sp, sm = X(s + h, t), X(s - h, t)
    tp, tm = X(s, t + h), X(s, t - h)
    pp, pm = X(s + h, t + h), X(s + h, t - h)
    mp, mm = X(s - h, t + h), X(s - h, t - h)
    return ImmersionSample(
        position=c,
        Xs=(sp - sm) / (2 * h),
        Xt=(tp - tm) / (2 * h),
        Xss=(sp - 2 * c + sm) / h**2,
        Xst=(pp - pm - mp + mm) / (4 * h * h),
        Xtt=(tp - 2 * c + tm) / h**2,
    )


def metric(sample):
    E = _dot(sample.Xt, sample.Xt)
    F = _dot(sample.Xt, sample.Xs)
    G = _dot(sample.Xs, sample.Xs)
    return MetricComponents(E, F, G, E * G - F * F)


def _normalize(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def gram_schmidt_frame(sample, normal_hint=None):
    """Orthonormal frame (..., 4, 4): e1 ~ X_t, e2 from X_s, e3 and e4 normal.

    The normal pair is obtained by orthonormalizing ``normal_hint`` (two
    vectors, shape (..., 2, 4)) against the tangent plane when given. Without a
    hint the standard basis vectors with the largest normal components are
    used, and e4 is oriented so that det(e1, e2, e3, e4) = +1.
    """
    g = metric(sample)
    if np.any(g.det <= METRIC_FLOOR) or np.any(g.E <= 0):
        raise FrameError("degenerate metric: X_s and X_t are (nearly) dependent")
    e1 = _normalize(sample.Xt)
    e2 = _normalize(sample.Xs - _dot(sample.Xs, e1)[..., None] * e1)
    tangent = np.stack([e1, e2], axis=-2)

    def reject(v, basis):
        for b in basis:
            v = v - _dot(v, b)[..., None] * b
        return v

    if normal_hint is not None:
        hint = np.broadcast_to(np.asarray(normal_hint, dtype=float), e1.shape[:-1] + (2, 4))
        e3 = reject(hint[..., 0, :], (e1, e2))
        if np.any(np.linalg.norm(e3, axis=-1) < 1e-8):
            raise FrameError("normal hint is tangent")
        e3 = _normalize(e3)
        e4 = reject(hint[..., 1, :], (e1, e2, e3))
        if np.any(np.linalg.norm(e4, axis=-1) < 1e-8):
            raise FrameError("normal hint is degenerate")
        e4 = _normalize(e4)
        return np.stack([e1, e2, e3, e4], axis=-2)

    eye = np.broadcast_to(np.eye(4), e1.shape[:-1] + (4, 4))
    # rows: normal components of eps_1..eps_4
    proj = eye - np.einsum("...ia,...ib->...ab", tangent, tangent)
    k3 = np.argmax(np.linalg.norm(proj, axis=-1), axis=-1)
    e3 = _normalize(np.take_along_axis(proj, k3[..., None, None], axis=-2)[..., 0, :])
    rest = proj - _dot(proj, e3[..., None, :])[..., None] * e3[..., None, :]
    k4 = np.argmax(np.linalg.norm(rest, axis=-1), axis=-1)
    e4 = _normalize(np.take_along_axis(rest, k4[..., None, None], axis=-2)[..., 0, :])
    frame = np.stack([e1, e2, e3, e4], axis=-2)
    sign = np.sign(np.linalg.det(frame))
    return np.concatenate([frame[..., :3, :], frame[..., 3:, :] * sign[..., None, None]], axis=-2)


def _tangent_coefficients(sample, frame):
    """P with e_i = P[i, 0] X_t + P[i, 1] X_s, i = 1, 2."""
    g = metric(sample)
    gmat = np.stack([np.stack([g.E, g.F], -1), np.stack([g.F, g.G], -1)], -2)
    coords = np.stack([sample.Xt, sample.Xs], axis=-2)
    T = np.einsum("...ia,...ba->...ib", frame[..., :2, :], coords)
    return T @ np.linalg.inv(gmat)


def second_fundamental_numeric(sample, frame):
    """h^r_ik = <X(e_i, e_k) second derivative, e_r> for r = 3, 4."""
    P = _tangent_coefficients(sample, frame)
    # second partials in (t, s) order
    H = np.stack([np.stack([sample.Xtt, sample.Xst], -2), np.stack([sample.Xst, sample.Xss], -2)], -3)
    out = []
    for r in (2, 3):
        normal = frame[..., r, :]
        Hr = np.einsum("...abj,...j->...ab", H, normal)
        h = np.einsum("...ia,...ab,...kb->...ik", P, Hr, P)
        out.append(0.5 * (h + np.swapaxes(h, -1, -2)))
    return SecondFundamental(out[0], out[1])


def gaussian_curvature_numeric(sample, frame):
    """Gauss equation: K = sum over normals of det(h^r)."""
    sff = second_fundamental_numeric(sample, frame)
    return np.linalg.det(sff.h3) + np.linalg.det(sff.h4)


def gauss_map(sample, frame):
    return wedge(frame[..., 0, :], frame[..., 1, :])


def first_partials(X, s, t, complex_step=True):
    """(X_s, X_t) to near machine precision.

    Complex-step differentiation needs X to extend holomorphically to complex
    arguments; otherwise fourth-order central differences are used.
    """
    if complex_step:
        h = _COMPLEX_STEP
        Xs = np.imag(X(s + 1j * h, t)) / h
        Xt = np.imag(X(s, t + 1j * h)) / h
        return Xs, Xt
    h = _FD4_STEP
    Xs = (-X(s + 2 * h, t) + 8 * X(s + h, t) - 8 * X(s - h, t) + X(s - 2 * h, t)) / (12 * h)
    Xt = (-X(s, t + 2 * h) + 8 * X(s, t + h) - 8 * X(s, t - h) + X(s, t - 2 * h)) / (12 * h)
    return Xs, Xt


def _gauss_and_metric(X, s, t, complex_step):
    Xs, Xt = first_partials(X, s, t, complex_step)
    gss, gst, gtt = _dot(Xs, Xs), _dot(Xs, Xt), _dot(Xt, Xt)
    det = gss * gtt - gst * gst
    if np.any(det <= METRIC_FLOOR):
        raise FrameError("degenerate metric on the Laplacian stencil")
    root = np.sqrt(det)
    G = wedge(Xt, Xs) / root[..., None]
    # sqrt(det) * inverse metric, coordinates (s, t)
    m = (gtt / root, -gst / root, gss / root)
    return G, m, root


def laplacian_numeric(X, s, t, h=DEFAULT_LAPLACIAN_STEP, complex_step=True):
    """Laplace-Beltrami operator applied to the Gauss map, componentwise.

    Uses the coordinate form

        Delta f = -(1/sqrt(g)) d_a (sqrt(g) g^ab d_b f)

    with the positive (geometers') sign, expanded and discretized with
    second-order central differences of step ``h``. Gauss map values at the
    stencil nodes come from first partials accurate to rounding, so the
    truncation error is O(h^2).
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    s, t = np.broadcast_arrays(s, t)
    offsets = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    ss = np.stack([s + i * h for i, _ in offsets])
    tt = np.stack([t + j * h for _, j in offsets])
    G, m, root = _gauss_and_metric(X, ss, tt, complex_step)
    c, sp, sm, tp, tm, pp, pm, mp, mm = range(9)

    f_s = (G[sp] - G[sm]) / (2 * h)
    f_t = (G[tp] - G[tm]) / (2 * h)
    f_ss = (G[sp] - 2 * G[c] + G[sm]) / h**2
    f_tt = (G[tp] - 2 * G[c] + G[tm]) / h**2
    f_st = (G[pp] - G[pm] - G[mp] + G[mm]) / (4 * h * h)

    m_ss, m_st, m_tt = m
    d_s = lambda q: (q[sp] - q[sm]) / (2 * h)
    d_t = lambda q: (q[tp] - q[tm]) / (2 * h)
    div_s = d_s(m_ss) + d_t(m_st)
    div_t = d_s(m_st) + d_t(m_tt)

    total = (m_ss[c][..., None] * f_ss + 2 * m_st[c][..., None] * f_st + m_tt[c][..., None] * f_tt
             + div_s[..., None] * f_s + div_t[..., None] * f_t)
    return -total / root[c][..., None]


def gauss_map_numeric(X, s, t, complex_step=True):
    """Unit Gauss map X_t ^ X_s / |X_t ^ X_s| from accurate first partials."""
    G, _, _ = _gauss_and_metric(X, np.asarray(s, dtype=float), np.asarray(t, dtype=float), complex_step)
    return G
