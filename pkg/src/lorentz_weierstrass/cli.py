"""Command line entry point.

Exit codes: 0 when every invariant holds, 1 on a pipeline error or a failed
invariant, 2 when the configuration or an input file cannot be parsed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracle
from .algebra import LorentzNum
from .clifford import Mat2A, vec_to_herm
from .dirac import CharacteristicData, solve_goursat
from .errors import LorentzGeometryError
from .expr import ExprError, parse
from .flat import (
    ConformalOneForm,
    ads_immersion,
    flat_metric_shape,
    frame_equation_residual,
    integrate_frame,
    product_curves_decompose,
    s12_immersion,
)
from .grid import GridField, GridSpec, diff, is_conformal_samples
from .io import (
    CSVFormatError,
    read_frames,
    read_gridfield,
    read_immersion,
    write_curves,
    write_frames,
    write_immersion,
    write_json,
    write_obj,
)
from .weierstrass import (
    ConformalMap1D,
    Immersion22,
    conformal_1form_criterion,
    immersion_1form_coefficients,
    integrate_immersion,
    konderak_form,
    metric_formula,
    minimal_dirac_data,
    minimal_immersion,
    r21_dirac_data,
    r21_immersion,
)

MODES = ("minimal", "dirac", "r21", "konderak", "ads-flat", "s12-flat")
REQUIRED = {
    "minimal": ("psi1", "psi2", "phihat1", "phihat2"),
    "dirac": ("phi1", "phi2", "psi1", "psi2", "p", "q"),
    "r21": ("phi2", "psi2", "p"),
    "konderak": ("chi1", "chi2"),
    "ads-flat": ("theta", "omega"),
    "s12-flat": ("theta", "omega"),
}
DEFAULT_TOLERANCES = {
    "fd": 10.0,  # multiplied by h**2
    "membership": 1e-8,
    "exact": 1e-10,
}


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    mode: str
    grid: GridSpec
    inputs: dict
    basepoint: np.ndarray
    tolerances: dict
    sign: int = 1
    base_dir: Path = field(default_factory=Path.cwd)

    def fd_tol(self, tol_scale: float = 1.0) -> float:
        return self.tolerances["fd"] * tol_scale * self.grid.h**2


def _grid(raw) -> GridSpec:
    if not isinstance(raw, dict):
        raise ConfigError("'grid' must be an object")
    try:
        if "n" in raw:
            return GridSpec(float(raw["lo"]), float(raw["hi"]), float(raw["lo"]), float(raw["hi"]), int(raw["n"]), int(raw["n"]))
        return GridSpec(
            float(raw["s0"]), float(raw["s1"]), float(raw["t0"]), float(raw["t1"]), int(raw["Ns"]), int(raw["Nt"])
        )
    except KeyError as exc:
        raise ConfigError(f"grid is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from None


def load_config(path, refine: int = 0) -> ScenarioConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or not raw:
        raise ConfigError("config is empty")
    mode = raw.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}")
    if "grid" not in raw:
        raise ConfigError("config has no 'grid'")
    spec = _grid(raw["grid"])
    if refine:
        spec = spec.refine(int(refine))
    inputs = raw.get("inputs", {})
    if not isinstance(inputs, dict):
        raise ConfigError("'inputs' must be an object")
    missing = [k for k in REQUIRED[mode] if k not in inputs]
    if missing:
        raise ConfigError(f"mode {mode} needs inputs: {', '.join(missing)}")
    base = np.asarray(raw.get("basepoint", [0.0, 0.0, 0.0, 0.0]), dtype=float)
    if base.shape != (4,):
        raise ConfigError("basepoint must have four coordinates")
    tol = dict(DEFAULT_TOLERANCES)
    extra = raw.get("tolerances", {})
    unknown = set(extra) - set(tol)
    if unknown:
        raise ConfigError(f"unknown tolerances: {', '.join(sorted(unknown))}")
    tol.update({k: float(v) for k, v in extra.items()})
    sign = int(raw.get("sign", 1))
    if sign not in (1, -1):
        raise ConfigError("sign must be 1 or -1")
    cfg = ScenarioConfig(mode, spec, inputs, base, tol, sign, path.parent)
    # parse every expression up front so syntax errors are config errors
    for k in REQUIRED[mode]:
        v = inputs[k]
        if not isinstance(v, dict):
            try:
                parse(v)
            except ExprError as exc:
                raise ConfigError(f"input {k}: {exc}") from None
    return cfg


# -- input resolution -------------------------------------------------------------

def _field_csv(cfg: ScenarioConfig, value: dict) -> GridField:
    f = read_gridfield(cfg.base_dir / value["csv"])
    if f.spec != cfg.grid:
        raise ConfigError(f"{value['csv']} lives on a different grid")
    return f


def _lorentz_fn(cfg: ScenarioConfig, name: str):
    """Callable ``a -> LorentzNum`` for a Dirac-mode input."""
    value = cfg.inputs[name]
    if isinstance(value, dict):
        if "csv" not in value:
            raise ConfigError(f"input {name}: expected an expression or {{'csv': path}}")
        return _field_csv(cfg, value)
    return parse(value)


def _conformal(cfg: ScenarioConfig, name: str) -> ConformalMap1D:
    value = cfg.inputs[name]
    if isinstance(value, dict):
        f = _lorentz_fn(cfg, name)
        rep = is_conformal_samples(f, 1e-10 * max(1.0, float(np.max(np.abs(f.values.plus)))))
        if not rep.conformal:
            raise ConfigError(f"input {name} is not conformal (residual {rep.residual:.3e})")
        return ConformalMap1D(np.array(f.values.plus[:, 0]), np.array(f.values.minus[0, :]))
    e = parse(value)
    try:
        return ConformalMap1D(*e.profiles())
    except ExprError as exc:
        raise ConfigError(f"input {name}: {exc}") from None


def _real(cfg: ScenarioConfig, name: str) -> np.ndarray:
    src = _lorentz_fn(cfg, name)
    vals = src.values if isinstance(src, GridField) else src(cfg.grid.a())
    if np.max(np.abs(np.asarray(vals.v))) > 1e-14:
        raise ConfigError(f"input {name} must be real valued")
    return np.broadcast_to(np.asarray(vals.u, float), cfg.grid.shape).copy()


def _characteristic(cfg: ScenarioConfig, names) -> CharacteristicData:
    sp = cfg.grid
    fns = [_lorentz_fn(cfg, n) for n in names]
    if any(isinstance(f, GridField) for f in fns):
        lines = {}
        for key, f in zip(("phi1", "phi2", "psi1", "psi2"), fns):
            vals = f.values if isinstance(f, GridField) else f(sp.a())
            vals = LorentzNum(np.broadcast_to(vals.u, sp.shape), np.broadcast_to(vals.v, sp.shape))
            lines[key] = (vals[0, :], vals[:, 0])
        return CharacteristicData(
            sp,
            phi_s0=(lines["phi1"][0], lines["phi2"][0]),
            phi_t0=(lines["phi1"][1], lines["phi2"][1]),
            psi_s0=(lines["psi1"][0], lines["psi2"][0]),
            psi_t0=(lines["psi1"][1], lines["psi2"][1]),
        )
    return CharacteristicData.from_functions(sp, *fns)


# -- report building ------------------------------------------------------------------

class Report:
    def __init__(self, cfg: ScenarioConfig, tol_scale: float):
        self.cfg = cfg
        self.tol_scale = tol_scale
        self.invariants: dict = {}
        self.observations: dict = {}

    def check(self, name: str, value: float, tol: float):
        value = float(value)
        self.invariants[name] = {"value": value, "tol": float(tol), "pass": bool(value <= tol)}

    def note(self, name: str, value):
        self.observations[name] = value

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.invariants.values())

    def payload(self, oracle_summary: dict) -> dict:
        g = self.cfg.grid
        return {
            "kind": "generate",
            "mode": self.cfg.mode,
            "grid": {"s0": g.s0, "s1": g.s1, "t0": g.t0, "t1": g.t1, "Ns": g.Ns, "Nt": g.Nt},
            "tol_scale": self.tol_scale,
            "invariants": self.invariants,
            "observations": self.observations,
            "oracle": oracle_summary,
            "passed": self.passed,
        }


def _imax(a, ring: int = 1) -> float:
    return oracle._imax(np.asarray(a), ring)


def _metric_check(rep: Report, F: Immersion22, lam: np.ndarray, tol: float):
    E, Fm, G = oracle.first_form(F)
    scale = np.maximum(np.abs(lam), 1e-300)
    err = max(_imax((E + lam) / scale), _imax((G - lam) / scale), _imax(Fm / scale))
    rep.check("metric_agreement_rel", err, tol)


def _curvature_observation(rep: Report, F: Immersion22, formula: np.ndarray):
    _, H2 = oracle.mean_curvature_vector(F)
    rep.note(
        "mean_curvature",
        {
            "formula_max_abs": _imax(formula),
            "oracle_max_abs": _imax(H2),
            "max_abs_difference": _imax(H2 - formula),
        },
    )


def _run_minimal(cfg, rep, tol):
    maps = [_conformal(cfg, k) for k in REQUIRED["minimal"]]
    F = minimal_immersion(*maps, basepoint=cfg.basepoint, spec=cfg.grid)
    D = minimal_dirac_data(*maps, spec=cfg.grid)
    lam = metric_formula(D).lambda_sq
    rep.check("degeneracy_margin", -float(np.min(np.abs(lam))), -1e-8)
    _metric_check(rep, F, lam, tol)
    H, _ = oracle.mean_curvature_vector(F)
    rep.check("oracle_mean_curvature_vector", _imax(H), tol * max(1.0, _imax(lam)))
    crit = conformal_1form_criterion(immersion_1form_coefficients(F), tol)
    rep.check("conformal_1form_residual", max(crit.residuals), tol)
    return F, None


def _run_dirac(cfg, rep, tol):
    init = _characteristic(cfg, ("phi1", "phi2", "psi1", "psi2"))
    D = solve_goursat(_real(cfg, "p"), _real(cfg, "q"), init)
    F = integrate_immersion(D, cfg.basepoint, tol=tol)
    rep.check("dirac_residual", F.diagnostics["dirac_residual"], tol)
    rep.check("path_defect", F.diagnostics["path_defect"], tol)
    rep.check("degeneracy_margin", -F.diagnostics["min_abs_lambda_sq"], -1e-8)
    scale = max(1.0, _imax(F.points))
    for k in ("imag_F0_plus_F1", "imag_F0_minus_F1", "conjugate_mismatch"):
        rep.check(k, F.diagnostics[k], cfg.tolerances["exact"] * scale)
    mr = metric_formula(D)
    _metric_check(rep, F, mr.lambda_sq, tol)
    _curvature_observation(rep, F, mr.H_sqnorm_formula)
    return F, None


def _run_r21(cfg, rep, tol):
    phi_fn, psi_fn = _lorentz_fn(cfg, "phi2"), _lorentz_fn(cfg, "psi2")
    p = _real(cfg, "p")
    sp = cfg.grid
    if isinstance(phi_fn, GridField) or isinstance(psi_fn, GridField):
        raise ConfigError("r21 mode takes expressions for phi2 and psi2")
    init = CharacteristicData.from_functions(sp, phi_fn, phi_fn, psi_fn, psi_fn)
    D2 = solve_goursat(p, p, init)
    F = r21_immersion(D2.phi2, D2.psi2, p, cfg.sign, basepoint=cfg.basepoint, tol=tol)
    rep.check("dirac_residual", F.diagnostics["dirac_residual"], tol)
    rep.check("degeneracy_margin", -F.diagnostics["min_abs_gap"], -1e-8)
    rep.check("F0_variation", float(np.ptp(F.points[..., 0])), cfg.tolerances["exact"])
    full = integrate_immersion(r21_dirac_data(D2.phi2, D2.psi2, p, cfg.sign), cfg.basepoint, check=False)
    scale = max(1.0, _imax(F.points))
    rep.check(
        "reduction_consistency",
        float(np.max(np.abs(full.points - F.points))),
        cfg.tolerances["exact"] * scale,
    )
    _metric_check(rep, F, F.diagnostics["lambda_sq"], tol)
    _curvature_observation(rep, F, F.diagnostics["H_sq"])
    return F, None


def _run_konderak(cfg, rep, tol):
    K = konderak_form(_conformal(cfg, "chi1"), _conformal(cfg, "chi2"), cfg.grid, cfg.basepoint)
    scale = max(1.0, _imax(K.F_eq12.points))
    rep.check(
        "chi_vs_g_phi_forms",
        float(np.max(np.abs(K.F_eq12.points - K.F_eq13.points))),
        cfg.tolerances["exact"] * scale,
    )
    F = K.F_eq12
    H, _ = oracle.mean_curvature_vector(F)
    E, _, _ = oracle.first_form(F)
    rep.check("oracle_mean_curvature_vector", _imax(H), tol * max(1.0, _imax(E)))
    rep.check("conformality_defect", oracle.conformality_defect(F), tol * max(1.0, _imax(E)))
    return F, None


def _flat_frame(cfg):
    theta = ConformalOneForm(_conformal(cfg, "theta"))
    omega = ConformalOneForm(_conformal(cfg, "omega"))
    B0 = cfg.inputs.get("B0")
    if B0 is None:
        B0m = Mat2A.identity()
    else:
        try:
            B0m = Mat2A.from_split(np.array(B0["plus"], float), np.array(B0["minus"], float))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"B0 must be {{'plus': 2x2, 'minus': 2x2}}: {exc}") from None
    return theta, omega, integrate_frame(theta, omega, B0m, cfg.grid)


def _run_flat(cfg, rep, tol, target):
    theta, omega, B = _flat_frame(cfg)
    F = ads_immersion(B) if target == "ads" else s12_immersion(B)
    F = Immersion22(cfg.grid, F.points, F.basepoint, F.diagnostics)
    rep.check("membership_defect", F.diagnostics["membership_defect"], cfg.tolerances["membership"])
    rep.check("frame_det_defect", B.det_defect(), cfg.tolerances["membership"])
    ms = flat_metric_shape(theta, omega, cfg.grid, B, target=target)
    scale = max(1.0, _imax(np.abs(ms.g_ss) + np.abs(ms.g_st) + np.abs(ms.g_tt)))
    E, Fm, G = oracle.first_form_st(F)
    rep.check(
        "metric_agreement",
        max(_imax(E - ms.g_ss), _imax(2 * Fm - ms.g_st), _imax(G - ms.g_tt)),
        tol * scale,
    )
    rep.check("frame_equation_residual", frame_equation_residual(B), tol * scale)
    K = oracle.gauss_curvature(F)
    rep.check("gauss_curvature", _imax(K, oracle.CURVATURE_RING), tol * scale)
    # S is the differential of the S^{1,2} map
    N = vec_to_herm(s12_immersion(B, check=False).points).split()[0]
    Sp = ms.S_s.split()[0]
    dN = diff(N, cfg.grid.hs, 0)
    rep.check("shape_operator_agreement", _imax(np.max(np.abs(dN - Sp), axis=(-1, -2))), tol * scale)
    return F, B


def run_pipeline(cfg: ScenarioConfig, tol_scale: float = 1.0):
    rep = Report(cfg, tol_scale)
    tol = cfg.fd_tol(tol_scale)
    runners = {
        "minimal": _run_minimal,
        "dirac": _run_dirac,
        "r21": _run_r21,
        "konderak": _run_konderak,
        "ads-flat": lambda c, r, t: _run_flat(c, r, t, "ads"),
        "s12-flat": lambda c, r, t: _run_flat(c, r, t, "s12"),
    }
    F, B = runners[cfg.mode](cfg, rep, tol)
    summary = oracle.curvature_report(F).summary()
    return F, B, rep.payload(summary)


# -- commands ----------------------------------------------------------------------------

def _fail(out: Path | None, code: int, exc: BaseException) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if out is not None:
        try:
            write_json(out / "error.json", err)
        except OSError:
            pass
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def cmd_generate(args) -> int:
    out = Path(args.out)
    try:
        cfg = load_config(args.config, args.refine)
    except (ConfigError, ExprError, CSVFormatError) as exc:
        return _fail(out, 2, exc)
    try:
        F, B, report = run_pipeline(cfg, args.tol_scale)
    except (ConfigError, ExprError, CSVFormatError) as exc:
        return _fail(out, 2, exc)
    except (LorentzGeometryError, ValueError, FloatingPointError) as exc:
        return _fail(out, 1, exc)
    write_immersion(out / "immersion.csv", F)
    if B is not None:
        write_frames(out / "frames.csv", B)
    write_json(out / "report.json", report)
    print(json.dumps({"passed": report["passed"], "out": str(out)}, sort_keys=True))
    return 0 if report["passed"] else 1


def verify_report(F: Immersion22) -> dict:
    g = F.spec
    return {
        "kind": "verify",
        "grid": {"s0": g.s0, "s1": g.s1, "t0": g.t0, "t1": g.t1, "Ns": g.Ns, "Nt": g.Nt},
        "oracle": oracle.curvature_report(F).summary(),
    }


def cmd_verify(args) -> int:
    out = Path(args.out)
    try:
        F = read_immersion(args.immersion)
    except CSVFormatError as exc:
        return _fail(out, 2, exc)
    try:
        report = verify_report(F)
    except (LorentzGeometryError, ValueError) as exc:
        return _fail(out, 1, exc)
    write_json(out / "verify.json", report)
    print(json.dumps(report["oracle"], sort_keys=True))
    return 0


def cmd_decompose(args) -> int:
    out = Path(args.out)
    try:
        B = read_frames(args.frames)
    except CSVFormatError as exc:
        return _fail(out, 2, exc)
    try:
        pair = product_curves_decompose(B)
    except LorentzGeometryError as exc:
        return _fail(out, 1, exc)
    write_curves(out, pair)
    write_json(
        out / "decompose.json",
        {"kind": "decompose", "reconstruction_error": pair.reconstruction_error, "Ns": len(pair.s), "Nt": len(pair.t)},
    )
    return 0


def cmd_export_mesh(args) -> int:
    out = Path(args.out)
    try:
        F = read_immersion(args.immersion)
        coords = tuple(int(c) for c in args.coords.split(","))
    except (CSVFormatError, ValueError) as exc:
        return _fail(out, 2, exc)
    try:
        write_obj(out / "mesh.obj", F, coords)
    except ValueError as exc:
        return _fail(out, 2, exc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lorentz-weierstrass", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="run a scenario and write immersion.csv and report.json")
    g.add_argument("--config", required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--tol-scale", type=float, default=1.0)
    g.add_argument("--refine", type=int, default=0, help="dyadic refinements of the grid")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="run the finite-difference oracle on an immersion CSV")
    v.add_argument("immersion")
    v.add_argument("--out", required=True)
    v.add_argument("--tol-scale", type=float, default=1.0)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="split a flat anti-de Sitter frame into two curves")
    d.add_argument("frames")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decompose)

    m = sub.add_parser("export-mesh", help="write an OBJ mesh of a 3-coordinate projection")
    m.add_argument("immersion")
    m.add_argument("--out", required=True)
    m.add_argument("--coords", default="1,2,3", help="three of 0..3, comma separated")
    m.set_defaults(func=cmd_export_mesh)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
