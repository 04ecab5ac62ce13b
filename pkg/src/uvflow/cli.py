"""Command-line harness for the reduction/flow pipeline.

Subcommands:
    analyze      large-cutoff flow prediction vs oracle, one row per model
    flow         sample or integrate a running coupling, write the trajectory
    kh-scan      dressed-kernel growth fit plus the two limiting energies
    oracle       solve one model on a grid
    paper-suite  run the acceptance checks, print one PASS/FAIL line each

Configuration is a JSON file (--config) holding the same keys as the flags;
flags win over the file.  Reports are deterministic: floats are written
with 12 significant digits, row and column order is fixed, and no
timestamps are emitted, so identical configs give byte-identical files.
If UVFLOW_OUTPUT_DIR is set, relative output paths land under it.

Exit codes: 0 success, 1 computation error, 2 config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import kh, suite
from .eigensolver import Grid, Parity, eigenvalue_by_index
from .errors import ConfigError, IntegrationAbortError, UVFlowError
from .flow import (LAMBDA_FLOOR, LogFlow, PowerLawFlow, SignPolicy,
                   beta_closed_form, beta_numeric, integrate_flow,
                   pipeline_ground_energy, solve_fixed_point,
                   uv_limit_energy)
from .potentials import (PotentialSpec, coulomb, kramers_henneberger, morse,
                         quartic, soft_coulomb)

CASE_STUDIES = ("morse", "quartic", "coulomb", "kh")
MODELS = ("morse", "quartic", "coulomb", "soft-coulomb", "kh")

# per-model oracle defaults: (half_width, n, parity)
_ORACLE_DEFAULTS = {
    "morse": (30.0, 4001, None),
    "quartic": (6.0, 4001, None),
    "coulomb": (30.0, 4001, "odd"),
    "soft-coulomb": (30.0, 4001, "odd"),
}

ANALYZE_COLUMNS = ("model", "rg_energy", "oracle_energy", "rel_error",
                   "sign_branch", "flow_law", "notes")
FLOW_COLUMNS = ("lambda", "coupling", "beta", "energy")
KH_SCAN_COLUMNS = ("lambda", "c0", "c2", "c0_over_log", "c2_over_log",
                   "small_field_energy", "strong_field_energy")
ORACLE_COLUMNS = ("model", "half_width", "n", "parity", "level",
                  "eigenvalue", "refinement_estimate", "convergence_ratio")


def _fmt(value) -> str:
    """One cell: 12 significant digits for floats, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _resolve_output(path: Optional[str], default_name: str) -> str:
    path = path or default_name
    root = os.environ.get("UVFLOW_OUTPUT_DIR")
    if root and not os.path.isabs(path):
        path = os.path.join(root, path)
    return path


def _write_report(path: str, columns: Sequence[str], rows: list[dict],
                  fmt: str, extra: Optional[dict] = None,
                  comments: Sequence[str] = ()) -> None:
    parent = os.path.dirname(path)
    if parent:
        try:
            os.makedirs(parent, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {parent}: {exc}") from exc
    if fmt == "json":
        payload = {"rows": [{k: _round12(r.get(k)) for k in columns}
                            for r in rows]}
        if extra:
            payload.update(extra)
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r.get(k)) for k in columns])
        for line in comments:
            fh.write(f"# {line}\n")


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return cfg


def _setting(args, cfg: dict, key: str, default=None):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in cfg:
        return cfg[key]
    return default


def _params(args, cfg: dict) -> dict:
    params = dict(cfg.get("params", {}))
    for key in ("A", "a", "m", "g", "alpha", "lam", "eps_exp", "K"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    return params


def build_spec(model: str, params: dict) -> PotentialSpec:
    if model == "morse":
        return morse(params.get("A", 4.0), params.get("a", 1.0),
                     params.get("m", 1.0))
    if model == "quartic":
        return quartic(params.get("g", 1.0))
    if model == "coulomb":
        return coulomb(params.get("alpha", 1.0))
    if model == "soft-coulomb":
        return soft_coulomb(params.get("alpha", 1.0), params.get("lam", 1000.0))
    if model == "kh":
        return kramers_henneberger(params.get("alpha", 1.0),
                                   params.get("eps_exp", 1.0),
                                   params.get("lam", 1.0e4))
    raise ConfigError(f"unknown model {model!r} (expected one of {MODELS})")


def _parity_from(name: Optional[str]) -> Optional[Parity]:
    if name is None or name == "none":
        return None
    try:
        return Parity(name)
    except ValueError as exc:
        raise ConfigError(f"unknown parity {name!r}") from exc


def _flow_label(flow) -> str:
    if isinstance(flow, PowerLawFlow):
        return f"g(lam) = {flow.coefficient:.12g} lam^{flow.exponent:g}"
    if isinstance(flow, LogFlow):
        return f"g(lam) = {flow.K ** 2:.12g} / ln(lam)"
    return f"tabulated on [{flow.lam_min:.12g}, {flow.lam_max:.12g}]"


# -- analyze -----------------------------------------------------------------

def _analyze_row(model: str, params: dict, policy: Optional[SignPolicy],
                 half_width: Optional[float], n: Optional[int]) -> dict:
    if model == "kh":
        K = params.get("K", 1.0)
        eps = params.get("eps_exp", 1.0)
        rg = kh.scaled_energy_from_K(K, eps)
        return {"model": model, "rg_energy": rg, "oracle_energy": None,
                "rel_error": None, "sign_branch": "ambiguous",
                "flow_law": f"g(lam) = {K * K:.12g} / ln(lam)",
                "notes": "root sign absorbed into K**2; printed form has no "
                         "direct eigensolve target, see kh-scan"}
    spec = build_spec(model, params)
    if model == "morse":
        # the depth does not run at leading order; the flow is a constant
        flow = PowerLawFlow(spec.coupling, 0.0)
    else:
        flow = solve_fixed_point(spec)
    est = uv_limit_energy(spec, flow, policy=policy)
    dl, dn, dparity = _ORACLE_DEFAULTS[model]
    grid = Grid(half_width if half_width is not None else dl,
                n if n is not None else dn)
    oracle = eigenvalue_by_index(spec, grid, 0,
                                 parity=_parity_from(dparity)).refinement_estimate
    rel = abs(est.energy - oracle) / abs(oracle)
    notes = ""
    if model == "morse":
        notes = f"oracle minus flow limit = {oracle - est.energy:.12g}"
    return {"model": model, "rg_energy": est.energy, "oracle_energy": oracle,
            "rel_error": rel, "sign_branch": est.sign_branch.value,
            "flow_law": _flow_label(flow), "notes": notes}


def cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    if args.model is not None:
        models = [args.model]
    else:
        models = cfg.get("models", list(CASE_STUDIES))
    policy_name = _setting(args, cfg, "sign-policy")
    policy = SignPolicy(policy_name) if policy_name else None
    params = _params(args, cfg)
    half_width = _setting(args, cfg, "half-width")
    n = _setting(args, cfg, "n")
    fmt = _setting(args, cfg, "format", "csv")
    rows, failed = [], False
    for model in models:
        try:
            rows.append(_analyze_row(model, params, policy, half_width, n))
        except UVFlowError as exc:
            failed = True
            rows.append({"model": model, "rg_energy": None,
                         "oracle_energy": None, "rel_error": None,
                         "sign_branch": "", "flow_law": "",
                         "notes": f"analyze/{model}: {type(exc).__name__}: {exc}"})
    path = _resolve_output(_setting(args, cfg, "output"), f"analyze.{fmt}")
    _write_report(path, ANALYZE_COLUMNS, rows, fmt)
    for r in rows:
        print(f"{r['model']:12s} rg={_fmt(r['rg_energy']):>18s} "
              f"oracle={_fmt(r['oracle_energy']):>18s} "
              f"rel={_fmt(r['rel_error'])} {r['notes']}")
    print(f"wrote {path}")
    return 1 if failed else 0


# -- flow --------------------------------------------------------------------

def cmd_flow(args) -> int:
    cfg = _load_config(args.config)
    model = args.model
    params = _params(args, cfg)
    fmt = _setting(args, cfg, "format", "csv")
    lam0 = _setting(args, cfg, "lam0", 10.0)
    lam1 = _setting(args, cfg, "lam1", 1.0e4)
    points = _setting(args, cfg, "points", 41)
    beta_name = _setting(args, cfg, "beta", "closed")
    beta_method = {"closed": "closed-form", "numeric": "numeric"}.get(beta_name)
    if beta_method is None:
        raise ConfigError(f"unknown beta choice {beta_name!r}")
    path = _resolve_output(_setting(args, cfg, "output"), f"flow_{model}.{fmt}")
    rows = []
    if model == "kh":
        K = params.get("K", 1.0)
        eps = params.get("eps_exp", 1.0)
        flow = kh.cs_solution(K)
        for lam in np.geomspace(lam0, lam1, points):
            alpha = flow(lam)
            rows.append({"lambda": float(lam), "coupling": alpha,
                         "beta": flow.derivative_wrt_log(lam),
                         "energy": kh.scaled_ground_energy(alpha, lam, eps)})
        _write_report(path, FLOW_COLUMNS, rows, fmt)
        print(f"wrote {path}")
        return 0
    spec = build_spec(model, params)
    if args.start_on_fixed_point:
        g0 = solve_fixed_point(spec)(lam0)
    else:
        g0 = _setting(args, cfg, "g0", spec.coupling)
    try:
        traj = integrate_flow(spec, g0, lam0, lam1, beta=beta_method,
                              n_points=points)
        lams, gs = traj.lams, traj.couplings
        aborted = None
    except IntegrationAbortError as exc:
        lams, gs = exc.partial if exc.partial is not None else ([], [])
        aborted = exc
    for lam, g in zip(lams, gs):
        rows.append({"lambda": float(lam), "coupling": float(g),
                     "beta": (beta_closed_form(spec, g, lam)
                              if beta_method == "closed-form"
                              else beta_numeric(spec, g, lam)),
                     "energy": pipeline_ground_energy(spec, g, lam)})
    _write_report(path, FLOW_COLUMNS, rows, fmt)
    if aborted is not None:
        print(f"flow/{model}: IntegrationAbortError: {aborted}", file=sys.stderr)
        print(f"wrote partial trajectory to {path}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


# -- kh-scan -----------------------------------------------------------------

def cmd_kh_scan(args) -> int:
    cfg = _load_config(args.config)
    fmt = _setting(args, cfg, "format", "csv")
    eps = _setting(args, cfg, "eps_exp", 1.0)
    z_window = _setting(args, cfg, "z-window", 0.2)
    n_fit = _setting(args, cfg, "n-fit", 9)
    lambdas = _setting(args, cfg, "lambdas")
    if lambdas is None:
        lambdas = list(np.geomspace(_setting(args, cfg, "lam0", 1.0e2),
                                    _setting(args, cfg, "lam1", 1.0e6),
                                    _setting(args, cfg, "points", 5)))
    elif isinstance(lambdas, str):
        lambdas = [float(tok) for tok in lambdas.split(",") if tok]
    if any(l <= LAMBDA_FLOOR for l in lambdas):
        raise ConfigError(f"all cutoffs must exceed {LAMBDA_FLOOR}")
    small = kh.ground_energy_limits(eps, kh.FieldRegime.SMALL_FIELD)
    strong = kh.ground_energy_limits(eps, kh.FieldRegime.STRONG_FIELD)
    rows = []
    for f in kh.log_divergence_fit(lambdas, z_window=z_window, n_fit=n_fit):
        s = math.log(f.lam)
        rows.append({"lambda": f.lam, "c0": f.c0, "c2": f.c2,
                     "c0_over_log": f.c0 / s, "c2_over_log": f.c2 / s,
                     "small_field_energy": small.energy,
                     "strong_field_energy": strong.energy})
    extra = {"limits": {
        "eps_exp": _round12(float(eps)),
        "small_field": {"energy": _round12(small.energy),
                        "K": _round12(small.constant)},
        "strong_field": {"energy": _round12(strong.energy),
                         "K_squared": _round12(strong.constant),
                         "branches": [_round12(b) for b in strong.branches]},
    }}
    comments = (
        f"small-field(eps_exp={_fmt(float(eps))}): energy={_fmt(small.energy)} "
        f"K={_fmt(small.constant)}",
        f"strong-field(eps_exp={_fmt(float(eps))}): energy={_fmt(strong.energy)} "
        f"branches={_fmt(strong.branches[0])},{_fmt(strong.branches[1])}",
    )
    path = _resolve_output(_setting(args, cfg, "output"), f"kh_scan.{fmt}")
    _write_report(path, KH_SCAN_COLUMNS, rows, fmt, extra=extra,
                  comments=comments)
    print(f"wrote {path}")
    return 0


# -- oracle ------------------------------------------------------------------

def cmd_oracle(args) -> int:
    cfg = _load_config(args.config)
    model = args.model
    params = _params(args, cfg)
    fmt = _setting(args, cfg, "format", "csv")
    dl, dn, dparity = _ORACLE_DEFAULTS.get(model, (12.0, 4001, None))
    half_width = _setting(args, cfg, "half-width", dl)
    n = _setting(args, cfg, "n", dn)
    parity = _parity_from(_setting(args, cfg, "parity", dparity))
    level = _setting(args, cfg, "level", 0)
    spec = build_spec(model, params)
    res = eigenvalue_by_index(spec, Grid(half_width, n), level, parity=parity)
    row = {"model": model, "half_width": float(half_width), "n": int(n),
           "parity": res.parity.value if res.parity else "none",
           "level": int(level), "eigenvalue": res.eigenvalue,
           "refinement_estimate": res.refinement_estimate,
           "convergence_ratio": res.convergence_ratio}
    path = _resolve_output(_setting(args, cfg, "output"), f"oracle_{model}.{fmt}")
    _write_report(path, ORACLE_COLUMNS, [row], fmt)
    print(f"{model}: level {level} = {_fmt(res.refinement_estimate)} "
          f"(raw {_fmt(res.eigenvalue)}, ratio {_fmt(res.convergence_ratio)})")
    print(f"wrote {path}")
    return 0


# -- paper-suite -------------------------------------------------------------

def cmd_paper_suite(args) -> int:
    results = suite.run_all()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.index}  {r.name}: {r.details}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


# -- parser ------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--output", help="output path (default per command)")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--A", type=float, help="Morse well depth")
    p.add_argument("--a", type=float, help="Morse range parameter")
    p.add_argument("--m", type=float, help="Morse mass")
    p.add_argument("--g", type=float, help="quartic coupling")
    p.add_argument("--alpha", type=float, help="Coulomb-family coupling")
    p.add_argument("--lam", type=float, help="shape cutoff (soft-coulomb, kh)")
    p.add_argument("--eps-exp", dest="eps_exp", type=float,
                   help="drive-strength parameter")
    p.add_argument("--K", type=float, help="log-flow integration constant")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uvflow",
        description="cutoff reductions, running couplings and oracles "
                    "for one-dimensional quantum systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="flow prediction vs oracle per model")
    p.add_argument("model", nargs="?", choices=MODELS,
                   help="single model (default: the four case studies)")
    _add_common(p)
    _add_params(p)
    p.add_argument("--sign-policy", dest="sign_policy",
                   choices=[s.value for s in SignPolicy])
    p.add_argument("--half-width", dest="half_width", type=float,
                   help="oracle box half width")
    p.add_argument("--n", type=int, help="oracle grid points (odd)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("flow", help="write a running-coupling trajectory")
    p.add_argument("model", choices=MODELS)
    _add_common(p)
    _add_params(p)
    p.add_argument("--g0", type=float, help="starting coupling at lam0")
    p.add_argument("--lam0", type=float, help="starting cutoff (default 10)")
    p.add_argument("--lam1", type=float, help="final cutoff (default 1e4)")
    p.add_argument("--points", type=int, help="rows in the trajectory")
    p.add_argument("--beta", choices=("closed", "numeric"),
                   help="beta evaluation route (default closed)")
    p.add_argument("--start-on-fixed-point", action="store_true",
                   help="set g0 from the canonical-oscillator matching")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("kh-scan", help="dressed-kernel growth fit and limits")
    _add_common(p)
    p.add_argument("--lambdas", help="comma-separated cutoff list")
    p.add_argument("--lam0", type=float, help="scan start (default 1e2)")
    p.add_argument("--lam1", type=float, help="scan end (default 1e6)")
    p.add_argument("--points", type=int, help="scan points (default 5)")
    p.add_argument("--z-window", dest="z_window", type=float,
                   help="fit half-width (default 0.2)")
    p.add_argument("--n-fit", dest="n_fit", type=int,
                   help="fit samples (default 9)")
    p.add_argument("--eps-exp", dest="eps_exp", type=float,
                   help="drive-strength parameter (default 1)")
    p.set_defaults(func=cmd_kh_scan)

    p = sub.add_parser("oracle", help="solve one model on a grid")
    p.add_argument("model", choices=MODELS)
    _add_common(p)
    _add_params(p)
    p.add_argument("--half-width", dest="half_width", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--parity", choices=("even", "odd", "none"))
    p.add_argument("--level", type=int, help="eigenvalue index (default 0)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("paper-suite", help="run all acceptance criteria")
    p.set_defaults(func=cmd_paper_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"uvflow {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    except UVFlowError as exc:
        print(f"uvflow {args.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
