"""Command-line front end.

Every command writes a CSV table: ``#`` comment rows (run parameters and
summary values), one header row, then data rows with floats printed to 17
significant digits. Output goes to ``--output``, else to
``$KGSHARP_OUTPUT_DIR/<command>.csv`` when that variable is set, else stdout.

Exit status: 0 success, 1 usage or domain error, 2 a mathematical check failed.
"""

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__, constants, experiments, kernels, verification
from .kernels import KernelExponents, PairGeometry, Params

OUTPUT_DIR_ENV = "KGSHARP_OUTPUT_DIR"

COMMANDS = ("constants", "kernel", "ratio-scan", "verify", "counterexample", "knapp",
            "plusplus", "export")

# built-in defaults for options that a config file may also set
DEFAULTS = {
    "d": 3, "s": 1.0, "beta": 0.0, "tol": 1e-3, "mc_samples": 200_000, "seed": 0,
    "kind": "F", "regime": "wave", "a_grid": None, "L_grid": "10,30,100,300",
    "delta": None, "r1": 1.0, "r2": 0.5, "cos": 0.0, "a_exp": 0.5, "b_exp": None,
    "tau": 3.0, "xi_norm": 0.0, "table": "constants",
}

CONVERTERS = {
    "d": int, "s": float, "beta": float, "tol": float, "mc_samples": int, "seed": int,
    "kind": str, "regime": str, "a_grid": str, "L_grid": str, "delta": float, "r1": float,
    "r2": float, "cos": float, "a_exp": float, "b_exp": float, "tau": float, "xi_norm": float,
    "table": str,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int
    s: float
    beta: float
    tol: float
    mc_samples: int
    seed: int
    grid: Optional[list] = None
    delta: Optional[float] = None
    output_path: str = ""
    options: dict = field(default_factory=dict)

    @property
    def params(self):
        return Params(self.d, self.s, self.beta)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--d", type=int, help="space dimension (integer >= 2)")
    common.add_argument("--s", type=float, help="mass s > 0")
    common.add_argument("--beta", type=float, help="exponent of the |box|^beta weight")
    common.add_argument("--tol", type=float, help="relative tolerance for pass/fail checks")
    common.add_argument("--mc-samples", dest="mc_samples", type=int, help="Monte Carlo samples")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--output", "-o", default="", help="CSV output path")
    common.add_argument("--config", help="key=value file; explicit flags take precedence")

    p = _Parser(prog="kgsharp", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="evaluate a sharp constant")
    c.add_argument("--kind", help="one of " + ", ".join(constants.KINDS))

    k = sub.add_parser("kernel", parents=[common], help="evaluate a kernel at one geometry")
    k.add_argument("--kind", help="K, KBV, theta, J or h")
    k.add_argument("--r1", type=float)
    k.add_argument("--r2", type=float)
    k.add_argument("--cos", type=float, help="cosine of the angle (kappa for h)")
    k.add_argument("--a-exp", dest="a_exp", type=float, help="denominator exponent a")
    k.add_argument("--b-exp", dest="b_exp", type=float, help="numerator exponent b")

    r = sub.add_parser("ratio-scan", parents=[common], help="trial-family sharpness scan")
    r.add_argument("--regime", help="wave, wave_refined, half or one")
    r.add_argument("--a-grid", dest="a_grid", help="comma-separated a values")

    v = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    v.add_argument("--full", action="store_true", help="full sample sizes (minutes)")

    g = sub.add_parser("counterexample", parents=[common], help="annulus pair inside the gap")
    g.add_argument("--delta", type=float, help="annulus scale; omitted: search by halving")

    n = sub.add_parser("knapp", parents=[common], help="Knapp box scaling")
    n.add_argument("--L-grid", dest="L_grid", help="comma-separated L values (>= 10)")

    q = sub.add_parser("plusplus", parents=[common], help="(++) shell measure or range check")
    q.add_argument("--tau", type=float)
    q.add_argument("--xi-norm", dest="xi_norm", type=float)
    q.add_argument("--range", action="store_true", help="report finiteness around (3-2d)/4")

    e = sub.add_parser("export", parents=[common], help="export an evidence table")
    e.add_argument("--table", help="constants, gap or open-cases")
    return p


def read_config(path):
    """Parse a key=value file; '#' starts a comment, dashes in keys become underscores."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for i, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise UsageError(f"{path}:{i}: unknown key {key!r}")
        out[key] = val
    return out


def _grid(text, name):
    try:
        vals = [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed {name}: {text!r}") from None
    if not vals or any(not (math.isfinite(v) and v > 0) for v in vals):
        raise UsageError(f"{name} needs positive comma-separated numbers, got {text!r}")
    return vals


def _resolve(ns, config):
    vals = {}
    for key, default in DEFAULTS.items():
        explicit = getattr(ns, key, None)
        if explicit is not None:
            vals[key] = explicit
        elif key in config:
            try:
                vals[key] = CONVERTERS[key](config[key])
            except ValueError:
                raise UsageError(f"config value for {key} is malformed: {config[key]!r}") from None
        else:
            vals[key] = default
    return vals


def _validate(cmd, v):
    d, s, beta = v["d"], v["s"], v["beta"]
    if d < 2:
        raise UsageError(f"--d must be an integer >= 2, got {d}")
    if not (math.isfinite(s) and s > 0):
        raise UsageError(f"--s must be positive, got {s}")
    if v["mc_samples"] < 2:
        raise UsageError("--mc-samples must be at least 2")
    if not v["tol"] > 0:
        raise UsageError("--tol must be positive")
    if cmd == "constants" and v["kind"] not in constants.KINDS:
        raise UsageError(f"--kind must be one of {', '.join(constants.KINDS)}")
    if cmd == "ratio-scan":
        if v["regime"] not in experiments.REGIMES:
            raise UsageError(f"--regime must be one of {', '.join(experiments.REGIMES)}")
        if v["regime"] == "wave" and not beta > max((1 - d) / 4, (2 - d) / 2):
            raise UsageError(f"wave scan needs beta > {max((1 - d) / 4, (2 - d) / 2)}, got {beta}")
    if cmd == "counterexample" and not beta > (1 - d) / 4:
        raise UsageError(f"beta must exceed (1-d)/4 = {(1 - d) / 4}, got {beta}")
    if cmd == "counterexample" and not (3 - d) / 4 < beta < (5 - d) / 4:
        raise UsageError(f"beta must lie in the gap ({(3 - d) / 4}, {(5 - d) / 4}), got {beta}")
    if cmd == "knapp" and d not in (2, 3):
        raise UsageError("knapp supports d = 2 or 3")
    if cmd == "kernel" and v["kind"] not in ("K", "KBV", "theta", "J", "h"):
        raise UsageError("--kind for kernel must be K, KBV, theta, J or h")
    if cmd == "kernel" and v["kind"] in ("theta", "J") and not beta > (1 - d) / 4:
        raise UsageError(f"beta must exceed (1-d)/4 = {(1 - d) / 4}, got {beta}")
    if cmd == "plusplus" and not v.get("range_mode"):
        if not v["tau"] ** 2 - v["xi_norm"] ** 2 > 4 * s * s:
            raise UsageError("need tau^2 - |xi|^2 > (2s)^2")
    if cmd == "export" and v["table"] not in ("constants", "gap", "open-cases"):
        raise UsageError("--table must be constants, gap or open-cases")


def parse_args(argv):
    """Parse and validate ``argv`` into a :class:`RunConfig`; raises UsageError."""
    ns = _build_parser().parse_args(argv)
    config = read_config(ns.config) if getattr(ns, "config", None) else {}
    v = _resolve(ns, config)
    v["range_mode"] = bool(getattr(ns, "range", False))
    v["full"] = bool(getattr(ns, "full", False))
    _validate(ns.command, v)
    grid = None
    if ns.command == "ratio-scan":
        default = "0.1,0.05,0.025" if v["regime"].startswith("wave") else "10,20,40"
        grid = _grid(v["a_grid"] or default, "--a-grid")
        decreasing = v["regime"].startswith("wave")
        ordered = all((x > y) if decreasing else (x < y) for x, y in zip(grid, grid[1:]))
        if not ordered:
            raise UsageError("--a-grid must be strictly " + ("decreasing" if decreasing else "increasing"))
    elif ns.command == "knapp":
        grid = _grid(v["L_grid"], "--L-grid")
        if min(grid) < 10 or not all(x < y for x, y in zip(grid, grid[1:])):
            raise UsageError("--L-grid must be increasing with every L >= 10")
    if v["delta"] is not None and not v["delta"] > 0:
        raise UsageError("--delta must be positive")
    options = {k: v[k] for k in ("kind", "regime", "r1", "r2", "cos", "a_exp", "b_exp", "tau",
                                 "xi_norm", "table", "range_mode", "full")}
    return RunConfig(ns.command, v["d"], v["s"], v["beta"], v["tol"], v["mc_samples"], v["seed"],
                     grid, v["delta"], ns.output, options)


# ---------------------------------------------------------------------------
# output


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


class Table:
    def __init__(self, cfg, columns):
        self.cfg = cfg
        self.columns = list(columns)
        self.rows = []
        self.notes = []

    def add(self, *row):
        self.rows.append(row)

    def note(self, key, value):
        self.notes.append((key, value))

    def render(self):
        c = self.cfg
        buf = io.StringIO()
        buf.write(f"# command={c.command} d={c.d} s={_fmt(c.s)} beta={_fmt(c.beta)} "
                  f"tol={_fmt(c.tol)} seed={c.seed} version={__version__}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        for key, value in self.notes:
            buf.write(f"# {key}={_fmt(value)}\n")
        return buf.getvalue()


def _write(cfg, text):
    path = cfg.output_path
    if not path and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{cfg.command}.csv")
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _cmd_constants(cfg):
    c = constants.constant(cfg.options["kind"], cfg.params)
    t = Table(cfg, ["kind", "d", "s", "beta", "value"])
    t.add(c.kind, c.d, c.s, c.beta, c.value)
    return t, True


def _cmd_kernel(cfg):
    o, p = cfg.options, cfg.params
    kind = o["kind"]
    g = PairGeometry(o["r1"], o["r2"], o["cos"])
    b = o["b_exp"] if o["b_exp"] is not None else p.kernel_exponent
    if kind == "K":
        val = kernels.kernel_K(p, KernelExponents(o["a_exp"], b), g)
    elif kind == "KBV":
        val = kernels.kernel_KBV(p, g)
    elif kind == "theta":
        val = kernels.theta(p, KernelExponents(o["a_exp"], b), o["r1"], o["r2"])
    elif kind == "J":
        val = kernels.j_closed(p, g)
    else:
        val = kernels.h(o["a_exp"], b, o["cos"])
    t = Table(cfg, ["kind", "r1", "r2", "cos", "a", "b", "value"])
    t.add(kind, o["r1"], o["r2"], o["cos"], o["a_exp"], b, val)
    return t, True


def _cmd_ratio_scan(cfg):
    regime = cfg.options["regime"]
    if regime in ("wave", "wave_refined"):
        res = experiments.wave_limit_scan(cfg.params, cfg.grid, refined=regime == "wave_refined")
    else:
        res = experiments.nonwave_limit_scan(cfg.params, cfg.grid, regime)
    t = Table(cfg, ["a", "ratio", "error_estimate"])
    for a, v, e in zip(res.grid, res.values, res.error_estimates):
        t.add(a, v, e)
    t.note("regime", regime)
    t.note("beta_used", res.labels["beta"])
    t.note("extrapolated_limit", res.extrapolated_limit)
    t.note("target", res.target)
    t.note("rel_error", res.rel_error)
    ok = res.rel_error is None or res.rel_error <= cfg.tol
    t.note("within_tol", ok)
    return t, ok


def _cmd_verify(cfg):
    results = verification.run_suite(quick=not cfg.options["full"], seed=cfg.seed)
    t = Table(cfg, ["check", "passed", "seconds", "detail"])
    for r in results:
        print(r.line(), file=sys.stderr)
        t.add(r.name, r.passed, round(r.seconds, 3), r.detail)
    ok = all(r.passed for r in results)
    t.note("all_passed", ok)
    return t, ok


def _cmd_counterexample(cfg):
    p = cfg.params
    t = Table(cfg, ["delta", "lhs_value", "rhs_value", "ratio"])
    if cfg.delta is not None:
        lhs, rhs = experiments.gap_counterexample(p, cfg.delta)
        t.add(cfg.delta, lhs, rhs, lhs / rhs)
        ok = lhs > rhs
    else:
        delta, lhs, rhs = experiments.gap_threshold(p)
        t.add(delta, lhs, rhs, lhs / rhs)
        ok = delta is not None
    t.note("strict_inequality", ok)
    t.note("gamma_ratio", constants.gap_ratio(p.beta, p.d))
    return t, ok


def _cmd_knapp(cfg):
    p = cfg.params
    res = experiments.knapp_scan(p, cfg.grid, cfg.mc_samples, cfg.seed)
    t = Table(cfg, ["L", "ratio", "std_error"])
    for L, v, e in zip(res.grid, res.values, res.error_estimates):
        t.add(L, v, e)
    for key in ("slope", "expected_slope", "slope_threshold"):
        t.note(key, res.labels[key])
    phase, limit = experiments.knapp_phase_bound(p, cfg.grid[-1], samples=cfg.mc_samples,
                                                 seed=cfg.seed)
    t.note("max_phase", phase)
    t.note("phase_limit", limit)
    lo, hi = experiments.knapp_comparability(p, cfg.grid[-1], seed=cfg.seed)
    t.note("comparability_min", lo)
    t.note("comparability_max", hi)
    return t, True


def _cmd_plusplus(cfg):
    p = cfg.params
    if cfg.options["range_mode"]:
        rep = experiments.plusplus_range_check(p)
        t = Table(cfg, ["d", "beta", "threshold", "inner_exponent", "divergence_flag",
                        "inner_sup", "rhs_value"])
        t.add(rep.d, rep.beta, rep.threshold, rep.inner_exponent, rep.divergence_flag,
              rep.inner_sup, rep.rhs_value)
        return t, True
    o = cfg.options
    closed, est = experiments.plusplus_j0_check(p, o["tau"], o["xi_norm"], cfg.mc_samples, cfg.seed)
    t = Table(cfg, ["tau", "xi_norm", "closed", "mc", "std_error", "bias"])
    t.add(o["tau"], o["xi_norm"], closed, est.value, est.std_error, est.bias)
    ok = abs(est.value - closed) <= 3 * (est.std_error + est.bias)
    t.note("agrees_3sigma", ok)
    return t, True


def _cmd_export(cfg):
    table = cfg.options["table"]
    if table == "constants":
        t = Table(cfg, ["kind", "d", "beta", "s", "value"])
        for d in range(2, 8):
            for beta in (0.0, 0.25, 0.5, 1.0):
                p = Params(d, cfg.s, beta)
                for kind in constants.KINDS:
                    try:
                        c = constants.constant(kind, p)
                    except ValueError:
                        continue
                    t.add(kind, d, c.beta, cfg.s, c.value)
        return t, True
    if table == "gap":
        t = Table(cfg, ["d", "beta", "gamma_ratio"])
        for d in range(2, 7):
            betas, inner, ends = experiments.gap_gamma_scan(d, 50)
            t.add(d, (3 - d) / 4, ends[0])
            for b, r in zip(betas, inner):
                t.add(d, b, r)
            t.add(d, (5 - d) / 4, ends[1])
        return t, True
    # evidence for cases whose sharpness is open: wave scan at (beta, d) = (0, 4),
    # scans inside the gap, and the refined non-wave case
    t = Table(cfg, ["case", "d", "beta", "a", "ratio", "target"])
    grid = [0.1, 0.05, 0.025, 0.0125]
    for d, beta in ((4, 0.0), (3, 0.25), (2, 0.5)):
        res = experiments.wave_limit_scan(Params(d, cfg.s, beta), grid)
        for a, v in zip(res.grid, res.values):
            t.add(f"wave d={d}", d, beta, a, v, res.target)
        t.add(f"wave d={d} extrapolated", d, beta, 0.0, res.extrapolated_limit, res.target)
    res = experiments.nonwave_limit_scan(Params(4, cfg.s), [10.0, 20.0, 40.0, 80.0], "one")
    for a, v in zip(res.grid, res.values):
        t.add("refined non-wave d=4", 4, res.labels["beta"], a, v, res.target)
    return t, True


HANDLERS = {
    "constants": _cmd_constants, "kernel": _cmd_kernel, "ratio-scan": _cmd_ratio_scan,
    "verify": _cmd_verify, "counterexample": _cmd_counterexample, "knapp": _cmd_knapp,
    "plusplus": _cmd_plusplus, "export": _cmd_export,
}


def run(cfg):
    """Execute ``cfg``; returns the exit status."""
    try:
        table, ok = HANDLERS[cfg.command](cfg)
    except ValueError as exc:
        print(f"kgsharp: {exc}", file=sys.stderr)
        return 1
    _write(cfg, table.render())
    return 0 if ok else 2


def main(argv=None):
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
