"""Command-line front end.

Usage::

    hessian-kk <workflow> --config <path> [--seed N] [--out <dir>] [--override key=value]

The configuration is one JSON document.  ``--override`` takes dotted keys
(``pair.p=15``); the value is read as JSON when possible and as a string
otherwise.  Every report embeds the fully resolved configuration and is
written with sorted keys, so identical inputs give byte-identical files.

Exit status: 0 on a completed run, 2 for invalid input, 3 for numerical
failure, 4 for non-convergence.
"""
import argparse
import copy
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import fields
from .errors import ConfigError, ConvergenceError, DomainError, NumericError
from .growth import ARParams, LimitProbe, _json_safe, classification_report
from .pairs import pair_from_config
from .pohozaev import EPS_POS, default_z_grid, nonexistence_scan
from .radial import big_lambda1, lambda1_ball, solve_transformed_and_map
from .transform import get_transform

WORKFLOWS = ("verify-identity", "transform", "classify", "solve", "eigen", "pohozaev")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CONVERGENCE = 0, 2, 3, 4
THREADS_ENV = "HESSIAN_KK_THREADS"

DEFAULTS = {
    "verify-identity": {"trials": 100, "max_degree": 4, "n_min": 2, "n_max": 5, "tol": 1e-6},
    "transform": {"z_min": -10.0, "z_max": -0.01, "points": 101, "s_min": -50.0},
    "classify": {"lambda1": None, "Lambda1": None, "ar": None},
    "solve": {"N": 128, "tol": 1e-6, "radii": None, "s_min": -50.0},
    "eigen": {"N": 128, "N_quotient": 512, "cross_check": True},
    "pohozaev": {"z_min": -1e4, "z_max": -1e-3, "points": 60, "shells": 16, "eps": EPS_POS, "csv": True},
}
NEEDS_PAIR = ("transform", "classify", "solve", "pohozaev")
TOP_LEVEL = {"workflow", "n", "k", "pair", "probe", "seed", *WORKFLOWS}


# -- configuration -------------------------------------------------------------
def load_config(path):
    """Read the JSON document at `path`; syntax errors report line and column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


def apply_override(config, item):
    """Set ``a.b.c=value`` in `config` (in place)."""
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {item!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = config
    for i, part in enumerate(parts[:-1]):
        nxt = node.setdefault(part, {})
        if nxt is None:
            nxt = node[part] = {}
        if not isinstance(nxt, dict):
            raise ConfigError(f"override {key!r}: field {'.'.join(parts[:i + 1])!r} is not an object")
        node = nxt
    node[parts[-1]] = value


def _positive_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"field {where!r} must be a positive integer, got {value!r}")
    return value


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {where!r} must be a number, got {value!r}")
    return float(value)


def resolve_config(workflow, raw, seed=None, overrides=()):
    """Merge defaults, file contents, overrides and the seed; validate fields."""
    if workflow not in WORKFLOWS:
        raise ConfigError(f"unknown workflow {workflow!r} (expected one of {', '.join(WORKFLOWS)})")
    cfg = copy.deepcopy(raw)
    for item in overrides:
        apply_override(cfg, item)
    unknown = sorted(set(cfg) - TOP_LEVEL)
    if unknown:
        raise ConfigError(f"unknown field(s) {unknown}; allowed: {sorted(TOP_LEVEL)}")
    named = cfg.get("workflow", workflow)
    if named != workflow:
        raise ConfigError(f"field 'workflow' is {named!r} but {workflow!r} was requested")
    cfg["workflow"] = workflow
    if seed is not None:
        cfg["seed"] = seed
    cfg["seed"] = cfg.get("seed", 0)
    if isinstance(cfg["seed"], bool) or not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError(f"field 'seed' must be a non-negative integer, got {cfg['seed']!r}")

    section = cfg.get(workflow) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"field {workflow!r} must be an object")
    bad = sorted(set(section) - set(DEFAULTS[workflow]))
    if bad:
        raise ConfigError(f"unknown field(s) {[f'{workflow}.{b}' for b in bad]}")
    cfg[workflow] = {**DEFAULTS[workflow], **section}

    if workflow != "verify-identity":
        for key in ("n", "k"):
            if key not in cfg:
                raise ConfigError(f"workflow {workflow!r} needs field {key!r}")
            _positive_int(cfg[key], key)
        if cfg["k"] > cfg["n"]:
            raise ConfigError(f"fields 'n', 'k' need 1 <= k <= n, got n={cfg['n']}, k={cfg['k']}")
    if workflow in NEEDS_PAIR and "pair" not in cfg:
        raise ConfigError(f"workflow {workflow!r} needs field 'pair'")

    probe = cfg.get("probe") or {}
    if not isinstance(probe, dict):
        raise ConfigError("field 'probe' must be an object")
    allowed = set(LimitProbe.__dataclass_fields__)
    bad = sorted(set(probe) - allowed)
    if bad:
        raise ConfigError(f"unknown field(s) {[f'probe.{b}' for b in bad]}; allowed: {sorted(allowed)}")
    if workflow == "classify":
        cfg["probe"] = {**probe, "seed": probe.get("seed", cfg["seed"])}
    threads = os.environ.get(THREADS_ENV)
    if threads is not None:
        try:
            cfg["threads"] = _positive_int(int(threads), THREADS_ENV)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {threads!r}") from None
    return cfg


def _pair(cfg):
    try:
        return pair_from_config(cfg["n"], cfg["k"], cfg["pair"])
    except (ConfigError, DomainError) as exc:
        raise ConfigError(f"field 'pair': {exc}") from exc


# -- workflows ---------------------------------------------------------------
def run_verify_identity(cfg, out):
    """Composition-identity residuals on random polynomial fields and maps."""
    s = cfg["verify-identity"]
    trials = _positive_int(s["trials"], "verify-identity.trials")
    deg = _positive_int(s["max_degree"], "verify-identity.max_degree")
    n_lo = _positive_int(s["n_min"], "verify-identity.n_min")
    n_hi = _positive_int(s["n_max"], "verify-identity.n_max")
    if n_lo > n_hi:
        raise ConfigError("verify-identity.n_min exceeds verify-identity.n_max")
    tol = _number(s["tol"], "verify-identity.tol")
    rng = np.random.default_rng(cfg["seed"])
    records = []
    for _ in range(trials):
        n = int(rng.integers(n_lo, n_hi + 1))
        k = int(rng.integers(1, n + 1))
        d = int(rng.integers(1, deg + 1))
        u = fields.random_polynomial_field(n, d, rng, scale=0.5)
        if rng.random() < 0.5:
            name, A = "cubic", fields.cubic_map()
        else:
            a = float(rng.uniform(0.5, 2.0))
            name, A = f"exp(a={a:.6g})", fields.exp_map(a)
        x = rng.uniform(-1.0, 1.0, size=n)
        res = fields.lemma1_residual(A, u, x, k, relative=True)
        records.append({"n": n, "k": k, "degree": d, "map": name, "residual": float(res)})
    worst = max(r["residual"] for r in records)
    return {
        "trials": trials,
        "max_residual": worst,
        "mean_residual": float(np.mean([r["residual"] for r in records])),
        "tolerance": tol,
        "passed": bool(worst < tol),
        "records": records,
    }


def _write_table(path, z, value):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["z", "value"])
        for a, b in zip(z, value):
            w.writerow([repr(float(a)), repr(float(b))])


def run_transform(cfg, out):
    """Tables of G, A_g, A_g^{-1} and h as (z, value) CSV files."""
    s = cfg["transform"]
    z_min = _number(s["z_min"], "transform.z_min")
    z_max = _number(s["z_max"], "transform.z_max")
    pts = _positive_int(s["points"], "transform.points")
    s_min = _number(s["s_min"], "transform.s_min")
    if not z_min < z_max <= 0:
        raise ConfigError("transform grid needs z_min < z_max <= 0")
    pair = _pair(cfg)
    tr = get_transform(pair, min(s_min, z_min))
    z = np.linspace(z_min, z_max, pts)
    G = tr.G(z)
    A = tr.A(z)
    back = tr.A_inv(A)
    x0 = np.zeros(pair.n)
    h = tr.h(x0, z)
    ode = np.asarray(tr.ode_residual(z, relative=True), dtype=float)
    tables = {"G": G, "A": A, "A_inv": tr.A_inv(z) if np.all(z >= tr.v_floor) else None, "h": h}
    files = {}
    for name, vals in tables.items():
        if vals is None:
            continue
        path = out / f"transform_{name}.csv"
        _write_table(path, z, vals)
        files[name] = path.name
    return {
        "files": files,
        "points": pts,
        "v_floor": float(tr.v_floor),
        "max_ode_residual_relative": float(np.max(np.abs(ode))),
        "max_roundtrip_error": float(np.max(np.abs(back - z))),
        "h_at_x": "origin",
    }


def run_classify(cfg, out):
    """All hypothesis verdicts for the configured pair."""
    s = cfg["classify"]
    pair = _pair(cfg)
    try:
        probe = LimitProbe(**cfg["probe"])
    except DomainError as exc:
        raise ConfigError(f"field 'probe': {exc}") from None
    ar = None
    if s["ar"] is not None:
        if not isinstance(s["ar"], dict):
            raise ConfigError("field 'classify.ar' must be an object")
        try:
            ar = ARParams(**s["ar"])
        except TypeError as exc:
            raise ConfigError(f"field 'classify.ar': {exc}") from None
    lam1 = None if s["lambda1"] is None else _number(s["lambda1"], "classify.lambda1")
    Lam1 = None if s["Lambda1"] is None else _number(s["Lambda1"], "classify.Lambda1")
    return classification_report(pair, probe, lam1, Lam1, ar)


def run_solve(cfg, out):
    """Radial solve of the transformed problem, mapped back and verified."""
    s = cfg["solve"]
    N = _positive_int(s["N"], "solve.N")
    tol = _number(s["tol"], "solve.tol")
    pair = _pair(cfg)
    result = solve_transformed_and_map(pair, N=N, tol=tol, radii=s["radii"], seed=cfg["seed"],
                                       s_min=_number(s["s_min"], "solve.s_min"))
    result["v"].to_csv(out / "profile_v.csv")
    result["u"].to_csv(out / "profile_u.csv")
    return {"files": {"v": "profile_v.csv", "u": "profile_u.csv"}, **result["report"]}


def run_eigen(cfg, out):
    """Both first eigenvalues with their convergence histories."""
    s = cfg["eigen"]
    n, k = cfg["n"], cfg["k"]
    cc = bool(s["cross_check"])
    lam = lambda1_ball(n, k, N=_positive_int(s["N"], "eigen.N"), cross_check=cc)
    Lam = big_lambda1(n, k, N=_positive_int(s["N_quotient"], "eigen.N_quotient"), cross_check=cc)

    def summary(e):
        return {
            "value": e.value,
            "method": e.method,
            "iterations": e.iterations,
            "history": e.history,
            "cross_check": e.cross_check,
            "cross_method": e.cross_method,
            "agreement": e.agreement,
        }

    return {"lambda1": summary(lam), "Lambda1": summary(Lam)}


def run_pohozaev(cfg, out):
    """Sign scan of the non-existence density."""
    s = cfg["pohozaev"]
    pair = _pair(cfg)
    z = default_z_grid(_positive_int(s["points"], "pohozaev.points"),
                       _number(s["z_min"], "pohozaev.z_min"), _number(s["z_max"], "pohozaev.z_max"))
    path = out / "pohozaev.csv" if s["csv"] else None
    v = nonexistence_scan(pair, z, shells=_positive_int(s["shells"], "pohozaev.shells"),
                          eps=_number(s["eps"], "pohozaev.eps"), seed=cfg["seed"], csv_path=path)
    d = v.to_dict()
    d.pop("evidence")
    if path is not None:
        d["file"] = path.name
    return d


RUNNERS = {
    "verify-identity": run_verify_identity,
    "transform": run_transform,
    "classify": run_classify,
    "solve": run_solve,
    "eigen": run_eigen,
    "pohozaev": run_pohozaev,
}


def dumps(obj):
    """Deterministic JSON: sorted keys, no NaN or infinity literals."""
    return json.dumps(_json_safe(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def run(workflow, config, seed=None, out=".", overrides=()):
    """Run one workflow and write ``<out>/<workflow>.json``; returns the report."""
    cfg = resolve_config(workflow, config, seed, overrides)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    result = RUNNERS[workflow](cfg, out)
    report = {"config": cfg, "result": result}
    (out / f"{workflow}.json").write_text(dumps(report))
    return report


# -- entry point -----------------------------------------------------------------
def build_parser():
    p = argparse.ArgumentParser(prog="hessian-kk", description="k-Hessian equations with a gradient term.")
    p.add_argument("workflow", choices=WORKFLOWS)
    p.add_argument("--config", required=True, help="JSON problem file")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="set a dotted config field, may be repeated")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = run(args.workflow, load_config(args.config), args.seed, args.out, args.override)
    except (ConfigError, DomainError) as exc:
        print(f"hessian-kk: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"hessian-kk: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except NumericError as exc:
        print(f"hessian-kk: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{args.workflow}: wrote {Path(args.out) / (args.workflow + '.json')}")
    res = report["result"]
    if args.workflow == "classify":
        for name, label in sorted(res["conditions"].items()):
            print(f"  {name}: {label}")
    elif args.workflow == "pohozaev":
        print(f"  verdict: {res['label']}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
