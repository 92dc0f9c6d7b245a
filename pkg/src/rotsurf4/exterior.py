"""Linear algebra of E^4 and its bivector space.

Vectors are float arrays with a trailing axis of length 4 and bivectors are
arrays with a trailing axis of length 6, in the lexicographic basis

    E12, E13, E14, E23, E24, E34      (Ekl = eps_k ^ eps_l)

Every function broadcasts over leading axes.
"""

import numpy as np

from .errors import FrameError

BASIS_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
BASIS_LABELS = ("E12", "E13", "E14", "E23", "E24", "E34")

_I = np.array([p[0] for p in BASIS_PAIRS])
_J = np.array([p[1] for p in BASIS_PAIRS])


def vec4(*components):
    v = np.asarray(components if len(components) > 1 else components[0], dtype=float)
    if v.shape[-1] != 4:
        raise ValueError(f"expected 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vector component")
    return v


def bivector(*components):
    p = np.asarray(components if len(components) > 1 else components[0], dtype=float)
    if p.shape[-1] != 6:
        raise ValueError(f"expected 6 components, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("non-finite bivector component")
    return p


def basis_vector(k):
    e = np.zeros(4)
    e[k] = 1.0
    return e


def basis_bivector(label):
    p = np.zeros(6)
    p[BASIS_LABELS.index(label)] = 1.0
    return p


def wedge(u, v):
    """Bivector u ^ v."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., _I] * v[..., _J] - u[..., _J] * v[..., _I]


def biv_inner(p, q):
    """Induced inner product; the basis above is orthonormal."""
    return np.sum(np.asarray(p) * np.asarray(q), axis=-1)


def biv_norm(p):
    return np.sqrt(biv_inner(p, p))


def pluecker_residual(p):
    """p12 p34 - p13 p24 + p14 p23, which vanishes exactly on simple bivectors."""
    p = np.asarray(p)
    return p[..., 0] * p[..., 5] - p[..., 1] * p[..., 4] + p[..., 2] * p[..., 3]


def gram(frame):
    """Gram matrix of a sequence of vectors stacked on axis -2."""
    f = np.asarray(frame)
    return np.einsum("...ik,...jk->...ij", f, f)


def frame_biv_to_fixed(coefficients, frame, tol=1e-10):
    """Convert bivector coefficients on (ei ^ ej) of a moving frame to fixed coordinates.

    ``frame`` has shape (..., 4, 4) with the frame vectors on axis -2.
    """
    frame = np.asarray(frame, dtype=float)
    coefficients = np.asarray(coefficients, dtype=float)
    deviation = np.max(np.abs(gram(frame) - np.eye(4)))
    if deviation > tol:
        raise FrameError(f"frame is not orthonormal (Gram deviation {deviation:.3g})")
    out = np.zeros(np.broadcast_shapes(coefficients.shape, frame.shape[:-2] + (6,)))
    for k, (i, j) in enumerate(BASIS_PAIRS):
        out = out + coefficients[..., k, None] * wedge(frame[..., i, :], frame[..., j, :])
    return out
