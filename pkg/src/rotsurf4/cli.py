"""Command-line front end.

    rotsurf4 analyze --profile "family:circle(lambda=1,b0=1,d=0)" --grid 32x32
    rotsurf4 classify --profile "family:logspiral(mu=1,s0=1)"
    rotsurf4 laplacian --profile "expr:x=cos(s);y=sin(s);s=0:6" --format csv
    rotsurf4 group-check --surface clifford
    rotsurf4 bicomplex mul "1+1i" "1+1j"

Exit codes: 0 success, 2 input error, 3 numerical degeneracy.
"""

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bicomplex import (
    bc_inverse,
    bc_mul,
    conjugate,
    format_bicomplex,
    group_axiom_check,
    lie_subgroup_verdict,
    parse_bicomplex,
    to_matrix,
)
from .errors import DegeneracyError, InputError, ParseError, PreconditionError, RotSurfError
from .numeric import (
    DEFAULT_JET_STEP,
    gaussian_curvature_numeric,
    gram_schmidt_frame,
    laplacian_numeric,
    numeric_jets,
)
from .pointwise import (
    Thresholds,
    classify_theorem1,
    first_kind_test,
    grid,
    sample_surface,
    second_kind_fit,
)
from .profiles import arclength_reparametrize, parse_profile_spec
from .report import SCHEMA_VERSION, dumps, records_to_csv
from .surface import (
    closed_frame,
    gauss_codazzi_residual,
    gaussian_curvature,
    invariants,
    laplacian_gauss_fixed,
    rotation_surface,
    surface_map,
)

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3


@dataclass
class AnalysisConfig:
    profile: str
    grid: tuple = (16, 16)
    s_range: tuple = None
    t_range: tuple = (0.0, 2 * math.pi)
    step: float = 1e-3
    thresholds: Thresholds = field(default_factory=Thresholds)
    out: str = None
    format: str = "json"

    def validate(self):
        if min(self.grid) < 2:
            raise InputError("grid counts must be at least 2")
        if not self.step > 0:
            raise InputError("step must be positive")
        for name, r in (("s", self.s_range), ("t", self.t_range)):
            if r is not None and not r[0] < r[1]:
                raise InputError(f"{name} range must satisfy lo < hi")

    def as_dict(self):
        return {
            "profile": self.profile,
            "grid": list(self.grid),
            "s_range": list(self.s_range) if self.s_range else None,
            "t_range": list(self.t_range),
            "step": self.step,
            "thresholds": self.thresholds.as_dict(),
            "format": self.format,
        }


def _parse_grid(text):
    try:
        r, c = text.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like RxC, got {text!r}") from None


def _parse_range(text):
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}") from None


def _build_surface(cfg):
    profile = parse_profile_spec(cfg.profile)
    reparam = False
    if cfg.s_range is not None:
        profile = profile.with_domain(*cfg.s_range)
    if profile.max_speed_residual() > 1e-8:
        profile = arclength_reparametrize(profile)
        reparam = True
    return rotation_surface(profile, t_range=cfg.t_range), reparam


def _report(command, cfg, **blocks):
    return {"schema_version": SCHEMA_VERSION, "tool": "rotsurf4", "version": __version__,
            "command": command, "config": cfg.as_dict() if cfg else None, **blocks}


def _sweep(cfg, with_records=True):
    surf, reparam = _build_surface(cfg)
    s, t = grid(surf.s_range, cfg.t_range, cfg.grid)
    analytic = surf.profile.analytic
    X = surface_map(surf.profile)
    inv = invariants(surf, s)
    K = gaussian_curvature(surf, s)
    gauss_r, codazzi_r = gauss_codazzi_residual(surf, s)
    dG_closed = laplacian_gauss_fixed(surf, s, t)
    dG_num = laplacian_numeric(X, s, t, cfg.step, analytic)
    sample = numeric_jets(X, s, t, DEFAULT_JET_STEP)
    K_num = gaussian_curvature_numeric(sample, gram_schmidt_frame(sample))
    disc = np.linalg.norm(dG_num - dG_closed, axis=-1)
    records = []
    if with_records:
        for k in range(len(s)):
            records.append({
                "s": float(s[k]), "t": float(t[k]),
                "K": float(K[k]), "K_numeric": float(K_num[k]),
                "a": float(inv.a[k]), "b": float(inv.b[k]), "c": float(inv.c[k]),
                "gauss_residual": float(gauss_r[k]), "codazzi_residual": float(codazzi_r[k]),
                "dG_closed": dG_closed[k].tolist(), "dG_numeric": dG_num[k].tolist(),
                "discrepancy": float(disc[k]),
            })
    summary = {
        "points": int(len(s)),
        "reparametrized": reparam,
        "max_abs_K": float(np.max(np.abs(K))),
        "max_abs_K_numeric": float(np.max(np.abs(K_num))),
        "max_K_discrepancy": float(np.max(np.abs(K - K_num))),
        "max_gauss_residual": float(np.max(gauss_r)),
        "max_codazzi_residual": float(np.max(codazzi_r)),
        "max_laplacian_discrepancy": float(np.max(disc)),
    }
    return surf, records, summary


def _fit_block(fit, first_kind):
    f = fit.f_samples
    return {
        "kind": fit.kind,
        "C": fit.C.tolist(),
        "C_norm": fit.c_norm,
        "residual": fit.residual,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "excluded": fit.excluded,
        "f_min": float(np.min(f)), "f_max": float(np.max(f)), "f_mean": float(np.mean(f)),
        "first_kind_test": first_kind,
        "thresholds": fit.thresholds.as_dict(),
        "diagnostics": list(fit.diagnostics),
    }


def cmd_analyze(cfg):
    _, records, summary = _sweep(cfg)
    return _report("analyze", cfg, records=records, summary=summary)


def cmd_laplacian(cfg):
    _, records, summary = _sweep(cfg)
    keep = ("s", "t", "dG_closed", "dG_numeric", "discrepancy")
    table = [{k: r[k] for k in keep} for r in records]
    return _report("laplacian", cfg, records=table,
                   summary={"points": summary["points"],
                            "max_laplacian_discrepancy": summary["max_laplacian_discrepancy"]})


def cmd_classify(cfg):
    surf, reparam = _build_surface(cfg)
    s, t = grid(surf.s_range, cfg.t_range, cfg.grid)
    samples = sample_surface(surface_map(surf.profile), s, t, cfg.step, surf.profile.analytic)
    fit = second_kind_fit(samples, cfg.thresholds)
    first, _ = first_kind_test(samples, cfg.thresholds.residual)
    block = {"classification": _fit_block(fit, first)}
    try:
        verdict = classify_theorem1(surf, cfg.grid, cfg.step, cfg.thresholds)
        block["theorem1"] = {
            "flat": True,
            "profile_class": verdict.profile_class,
            "expected_kind": verdict.expected_kind,
            "fitted_kind": verdict.fit.kind,
            "agree": verdict.agree,
        }
    except PreconditionError as exc:
        block["theorem1"] = {"flat": False, "note": str(exc)}
    block["summary"] = {"points": len(samples), "reparametrized": reparam}
    return _report("classify", cfg, **block)


def _group_target(spec):
    text = spec.strip()
    if text == "clifford":
        text = "family:circle(lambda=1,b0=1,d=0)"
    elif not text.startswith(("family:", "expr:")):
        text = "family:" + text
    profile = parse_profile_spec(text)
    polar = None
    if profile.label == "circle":
        lam, b0, d = (profile.params[k] for k in ("lambda", "b0", "d"))
        polar = (lambda s, lam=lam: lam + 0.0 * np.asarray(s), lambda s: b0 * np.asarray(s) + d)
    elif profile.label == "vranceanu":
        k = profile.params["k"]
        polar = (lambda s: np.exp(k * np.asarray(s)), lambda s: np.asarray(s, dtype=float))
    return text, profile, polar


def cmd_group_check(spec, grid_shape=(9, 7), s_range=(-2.0, 2.0), t_range=(-math.pi, math.pi)):
    text, profile, polar = _group_target(spec)
    s = np.linspace(*s_range, grid_shape[0])
    t = np.linspace(*t_range, grid_shape[1])
    check = group_axiom_check(surface_map(profile), s, t)
    X = surface_map(profile)
    rows = X(*[a.ravel() for a in np.meshgrid(s, t, indexing="ij")])
    quad = np.abs(rows[:, 0] * rows[:, 3] - rows[:, 1] * rows[:, 2])
    block = {"group_check": check.as_dict(),
             "hyperquadric_max_residual": float(np.max(quad))}
    if polar is not None:
        v = lie_subgroup_verdict(*polar, s, t)
        block["lie_subgroup"] = {"subgroup": v.subgroup, "rule": v.rule,
                                 "homomorphism_residual": v.homomorphism_residual,
                                 "linearity_residual": v.linearity_residual,
                                 "agrees_with_group_check": v.agree}
    cfg = {"surface": spec, "profile": text, "grid": list(grid_shape),
           "s_range": list(s_range), "t_range": list(t_range)}
    return {"schema_version": SCHEMA_VERSION, "tool": "rotsurf4", "version": __version__,
            "command": "group-check", "config": cfg, **block}


def cmd_bicomplex(op, operands, which="t1"):
    values = [parse_bicomplex(o) for o in operands]
    if op == "mul":
        out = values[0]
        for v in values[1:]:
            out = bc_mul(out, v)
        return format_bicomplex(out)
    if op == "inv":
        return format_bicomplex(bc_inverse(values[0]))
    if op == "conj":
        return format_bicomplex(conjugate(values[0], which))
    if op == "matrix":
        M = to_matrix(values[0])
        return "\n".join(" ".join(f"{v:g}" for v in row) for row in M)
    raise InputError(f"unknown bicomplex operation {op!r}")


# --- argument handling --------------------------------------------------------


def _add_sweep_args(p):
    p.add_argument("--profile", required=True, help="family:name(k=v,...) or expr:x=..;y=..;s=lo:hi")
    p.add_argument("--grid", type=_parse_grid, default=(16, 16), help="RxC sample grid (s by t)")
    p.add_argument("--s", dest="s_range", type=_parse_range, default=None, help="s range lo:hi")
    p.add_argument("--t", dest="t_range", type=_parse_range, default=(0.0, 2 * math.pi),
                   help="t range lo:hi (default 0:2pi, periodic)")
    p.add_argument("--step", type=float, default=1e-3, help="Laplacian finite-difference step")
    p.add_argument("--eps-residual", type=float, default=Thresholds.residual)
    p.add_argument("--eps-c", type=float, default=Thresholds.c_norm)
    p.add_argument("--eps-harmonic", type=float, default=Thresholds.harmonic)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="rotsurf4", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"rotsurf4 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("analyze", "invariants, curvature and Laplacian sweep"),
                            ("classify", "pointwise 1-type classification of the Gauss map"),
                            ("laplacian", "closed-form vs numerical Laplacian of the Gauss map")):
        _add_sweep_args(sub.add_parser(name, help=help_text))
    g = sub.add_parser("group-check", help="Lie subgroup checks under the bicomplex product")
    g.add_argument("--surface", required=True, help="clifford, family spec, or e.g. circle(lambda=2)")
    g.add_argument("--grid", type=_parse_grid, default=(9, 7))
    g.add_argument("--s", dest="s_range", type=_parse_range, default=(-2.0, 2.0))
    g.add_argument("--t", dest="t_range", type=_parse_range, default=(-math.pi, math.pi))
    g.add_argument("--out", default=None)
    b = sub.add_parser("bicomplex", help="bicomplex calculator")
    b.add_argument("op", choices=("mul", "inv", "conj", "matrix"))
    b.add_argument("operands", nargs="+")
    b.add_argument("--which", choices=("t1", "t2", "t3"), default="t1")
    return parser


def _config(args):
    return AnalysisConfig(
        profile=args.profile,
        grid=args.grid,
        s_range=args.s_range,
        t_range=args.t_range,
        step=args.step,
        thresholds=Thresholds(args.eps_residual, args.eps_c, args.eps_harmonic),
        out=args.out,
        format=args.format,
    )


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, ParseError):
        payload["offset"] = exc.offset
    sys.stderr.write(dumps(payload) + "\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bicomplex":
            if args.op == "mul" and len(args.operands) < 2:
                raise InputError("mul needs at least two operands")
            if args.op != "mul" and len(args.operands) != 1:
                raise InputError(f"{args.op} takes exactly one operand")
            print(cmd_bicomplex(args.op, args.operands, args.which))
            return EXIT_OK
        if args.command == "group-check":
            report = cmd_group_check(args.surface, args.grid, args.s_range, args.t_range)
            _emit(dumps(report) + "\n", args.out)
            return EXIT_OK
        cfg = _config(args)
        cfg.validate()
        command = {"analyze": cmd_analyze, "classify": cmd_classify,
                   "laplacian": cmd_laplacian}[args.command]
        report = command(cfg)
        if cfg.format == "csv":
            if "records" not in report:
                raise InputError(f"{args.command} has no per-point records to write as CSV")
            text = records_to_csv(report["records"])
        else:
            text = dumps(report) + "\n"
        _emit(text, cfg.out)
        return EXIT_OK
    except DegeneracyError as exc:
        return _error(exc, EXIT_DEGENERATE)
    except (InputError, RotSurfError) as exc:
        return _error(exc, EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
