"""Pointwise 1-type test for Gauss maps: Delta G = f (G + C).

The fitter only sees samples (G_i, Delta G_i); it does not know where they came
from. ``classify_theorem1`` ties it back to rotation surfaces by comparing the
numerical verdict with the shape of the meridian.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .exterior import biv_inner, biv_norm, pluecker_residual, wedge
from .numeric import DEFAULT_LAPLACIAN_STEP, gauss_map_numeric, laplacian_numeric
from .surface import closed_frame, gaussian_curvature, invariants, surface_map

EPS_RESIDUAL = 1e-3
EPS_C = 1e-4
EPS_HARMONIC = 1e-6
MAX_ITER = 200
STOP_TOL = 1e-12

FIRST, SECOND, HARMONIC, NONE = "first", "second", "harmonic", "none"


@dataclass(frozen=True)
class GaussSampleSet:
    G: np.ndarray
    dG: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        if self.G.shape != self.dG.shape or self.G.ndim != 2 or self.G.shape[1] != 6:
            raise ValueError("G and Delta G must both have shape (n, 6)")
        if len(self.G) == 0:
            raise ValueError("empty sample set")

    def __len__(self):
        return len(self.G)

    def check(self, tol=1e-8):
        """Max deviations from unit norm and from decomposability."""
        norm_dev = float(np.max(np.abs(biv_norm(self.G) - 1.0)))
        pl = float(np.max(np.abs(pluecker_residual(self.G))))
        return norm_dev <= tol and pl <= tol, norm_dev, pl


@dataclass(frozen=True)
class Thresholds:
    residual: float = EPS_RESIDUAL
    c_norm: float = EPS_C
    harmonic: float = EPS_HARMONIC

    def as_dict(self):
        return {"eps_R": self.residual, "eps_C": self.c_norm, "eps_H": self.harmonic}


@dataclass
class PointwiseFit:
    kind: str
    C: np.ndarray
    f_samples: np.ndarray
    residual: float
    iterations: int
    converged: bool = True
    excluded: int = 0
    thresholds: Thresholds = field(default_factory=Thresholds)
    diagnostics: list = field(default_factory=list)

    @property
    def c_norm(self):
        return float(np.linalg.norm(self.C))


def sample_surface(X, s, t, h=DEFAULT_LAPLACIAN_STEP, complex_step=True):
    """Gauss map and its Laplacian from the numerical oracle at matching (s, t) arrays."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    s, t = s.ravel(), t.ravel()
    G = gauss_map_numeric(X, s, t, complex_step)
    dG = laplacian_numeric(X, s, t, h, complex_step)
    return GaussSampleSet(G, dG, np.stack([s, t], axis=-1))


def grid(s_range, t_range, shape):
    """Tensor grid; t is treated as periodic when the range spans 2 pi."""
    ns, nt = shape
    s = np.linspace(s_range[0], s_range[1], ns)
    periodic = math.isclose(t_range[1] - t_range[0], 2 * math.pi)
    t = np.linspace(t_range[0], t_range[1], nt, endpoint=not periodic)
    S, T = np.meshgrid(s, t, indexing="ij")
    return S.ravel(), T.ravel()


def first_kind_test(samples, eps=EPS_RESIDUAL):
    """Is Delta G_i parallel to G_i everywhere? Returns (verdict, f_i = <Delta G_i, G_i>)."""
    G, dG = samples.G, samples.dG
    f = biv_inner(dG, G)
    perp = np.linalg.norm(dG - f[:, None] * G, axis=-1)
    ok = perp <= eps * np.linalg.norm(dG, axis=-1)
    return bool(np.all(ok)), f


def _objective(G, dG, f, C):
    r = dG - f[:, None] * (G + C)
    return float(np.sum(r * r))


def _alternate(G, dG, C, max_iter, stop_tol):
    total = float(np.sum(dG * dG))
    prev = math.inf
    f = np.zeros(len(G))
    for it in range(1, max_iter + 1):
        GC = G + C
        f = np.sum(dG * GC, axis=-1) / np.sum(GC * GC, axis=-1)
        ff = float(np.sum(f * f))
        if ff == 0.0:
            return C, f, math.sqrt(_objective(G, dG, f, C) / total), it, True
        # minimizer of sum |dG_i - f_i G_i - f_i C|^2 over C
        C = np.sum(f[:, None] * (dG - f[:, None] * G), axis=0) / ff
        res = math.sqrt(_objective(G, dG, f, C) / total)
        if abs(prev - res) < stop_tol:
            return C, f, res, it, True
        prev = res
    return C, f, res, max_iter, False


def second_kind_fit(samples, thresholds=None, max_iter=MAX_ITER, stop_tol=STOP_TOL):
    """Fit Delta G_i = f_i (G_i + C) by alternating least squares.

    Starts from C = 0, and retries once from an averaged estimate of C when the
    first run does not reach the residual threshold. Points with
    |Delta G_i| <= eps_H carry no information about f and are left out.
    """
    th = thresholds or Thresholds()
    n = len(samples)
    if n < 7:
        raise PreconditionError(f"need at least 7 samples, got {n}")
    G, dG = samples.G, samples.dG
    scale = float(np.max(biv_norm(G)))
    active = biv_norm(dG) > th.harmonic * scale
    excluded = int(n - np.count_nonzero(active))
    f_all = np.zeros(n)
    if not np.any(active):
        return PointwiseFit(HARMONIC, np.zeros(6), f_all, 0.0, 0, True, excluded, th)
    Ga, dGa = G[active], dG[active]

    best = _alternate(Ga, dGa, np.zeros(6), max_iter, stop_tol)
    diagnostics = []
    if best[2] > th.residual:
        proj = biv_inner(dGa, Ga)
        usable = np.abs(proj) > 1e-3 * np.max(np.abs(proj))
        if np.any(usable):
            C0 = np.mean(dGa[usable] / proj[usable, None] - Ga[usable], axis=0)
            retry = _alternate(Ga, dGa, C0, max_iter, stop_tol)
            diagnostics.append(f"retry from averaged C: residual {retry[2]:.6g} vs {best[2]:.6g}")
            if retry[2] < best[2]:
                best = retry
    C, f, res, iters, converged = best
    f_all[active] = f
    if res <= th.residual:
        kind = FIRST if np.linalg.norm(C) <= th.c_norm else SECOND
        if not converged:
            diagnostics.append(f"stopped after {iters} iterations below the residual threshold")
    else:
        kind = NONE
        if not converged:
            diagnostics.append(f"did not converge in {iters} iterations")
    if excluded:
        diagnostics.append(f"{excluded} point(s) with |Delta G| <= eps_H excluded")
    return PointwiseFit(kind, C, f_all, res, iters, converged, excluded, th, diagnostics)


# --- rotation surfaces ------------------------------------------------------


@dataclass
class Theorem1Verdict:
    profile_class: str  # "flat_family", "totally_geodesic" or "other"
    expected_kind: str
    fit: PointwiseFit
    agree: bool
    details: dict = field(default_factory=dict)

    @property
    def pointwise_1_type(self):
        return self.fit.kind != NONE


def profile_class(surf, n=64, tol=1e-8):
    """Classify the meridian: circle with b0^2 lambda^2 = 1, line through the axis, or other."""
    s = np.linspace(*surf.s_range, n)
    inv = invariants(surf, s)
    a, b, c = map(np.asarray, (inv.a, inv.b, inv.c))
    if np.max(np.abs(b)) <= tol and np.max(np.abs(c)) <= tol:
        return "totally_geodesic", {}
    x, y = surf.profile.point(s)
    r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
    b0 = float(np.mean(b))
    constant = (np.max(np.abs(a)) <= tol and np.ptp(b) <= tol and np.max(np.abs(c - b)) <= tol
                and np.ptp(r2) <= tol * max(1.0, float(np.mean(r2))))
    if constant and abs(b0 * b0 * float(np.mean(r2)) - 1.0) <= 1e-6:
        return "flat_family", {"b0": b0, "lambda": math.sqrt(float(np.mean(r2)))}
    return "other", {}


_EXPECTED = {"flat_family": FIRST, "totally_geodesic": HARMONIC, "other": NONE}


def classify_theorem1(surf, shape=(16, 16), h=DEFAULT_LAPLACIAN_STEP, thresholds=None,
                      flat_tol=1e-8):
    """Check the numerical pointwise 1-type verdict against the meridian shape."""
    s_chk = np.linspace(*surf.s_range, 200)
    K = float(np.max(np.abs(gaussian_curvature(surf, s_chk))))
    if K > flat_tol:
        raise PreconditionError(f"surface is not flat (max |K| = {K:.3g})")
    cls, details = profile_class(surf)
    t_range = surf.t_range if all(map(math.isfinite, surf.t_range)) else (0.0, 2 * math.pi)
    s, t = grid(surf.s_range, t_range, shape)
    samples = sample_surface(surface_map(surf.profile), s, t, h, surf.profile.analytic)
    fit = second_kind_fit(samples, thresholds)
    expected = _EXPECTED[cls]
    details = {**details, "max_abs_K": K}
    return Theorem1Verdict(cls, expected, fit, fit.kind == expected, details)


def mu_branch_diagnostics(surf, s, t, C, f=None):
    """Relations a fitted (f, C) would have to satisfy on the b = c = mu a branch.

    Returns the components of C on the moving frame that must vanish, the sum
    <C, e1^e3> + <C, e2^e4>, and, when ``f`` is given, the deviation of f from
    4 (a^2 + mu^2 a^2) = 4 (a^2 + b^2).
    """
    frame = closed_frame(surf, s, t)
    e = [frame[..., k, :] for k in range(4)]
    comp = lambda i, j: biv_inner(C, wedge(e[i], e[j]))
    out = {
        "C.e14": comp(0, 3),
        "C.e23": comp(1, 2),
        "C.e34": comp(2, 3),
        "C.e13+C.e24": comp(0, 2) + comp(1, 3),
    }
    if f is not None:
        inv = invariants(surf, s)
        out["f-4(a^2+b^2)"] = np.asarray(f) - 4.0 * (inv.a**2 + inv.b**2)
    return out
