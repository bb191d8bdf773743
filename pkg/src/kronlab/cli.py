"""Command-line front end: one subcommand per experiment, CSV + JSON sidecar output.

Every run writes ``<out>/<command>.csv`` and ``<out>/<command>.json``.  Exit
codes: 0 when every checked row passes, 2 on any contract violation, 1 on
usage or domain errors.
"""
from __future__ import annotations

import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click
import mpmath
import numpy as np

from . import __version__
from .birkhoff import (
    DEFAULT_SEED,
    DecaySpec,
    LogPowerPhi,
    colzani_probe,
    default_colzani_series,
    integral_bound_probe,
    koksma_probe,
    rational_window_bound_probe,
    sidorov_probe,
    theorem5_trend,
    weyl_probe,
)
from .constructions import (
    SigmaSequence,
    build_kochergin,
    build_smooth,
    certify_growth,
    certify_smooth_growth,
)
from .core import PrecisionContext, RealVector, harmonic
from .diophantine import (
    cf_best_approximations,
    convergent_denominators,
    enumerate_best_approximations,
    estimate_exponents,
    g_n_star,
    jarnik_transfer,
    marnat_root,
    minkowski_ok,
    simultaneous_best,
)
from .errors import DomainError, KronlabError
from .poincare import (
    certify_discrete_identity,
    certify_F1_inequalities,
    certify_F2_oscillation,
    find_f2_seed,
    lambda_power_residuals,
    pell_fundamental,
    pell_powers,
)

SCHEMA_VERSION = 1
COMMANDS = ("best-approx", "exponents", "poincare", "pell", "kochergin", "smooth", "koksma", "probes", "report")
PROBES = ("weyl", "sidorov", "integral", "window", "theorem5", "colzani")


@dataclass
class ExperimentConfig:
    command: str
    alpha: str | None = None
    bits: int | None = None
    budgets: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    out: str = "."
    seed: int = DEFAULT_SEED
    plot: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        for k, v in self.budgets.items():
            if v is not None and not v > 0:
                raise DomainError(f"budget {k} must be positive, got {v}")
        if self.alpha is not None:
            RealVector.parse(self.alpha)

    def context(self) -> PrecisionContext:
        return PrecisionContext() if self.bits is None else PrecisionContext(self.bits)


@dataclass
class Outcome:
    columns: list
    rows: list
    passed: bool
    meta: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)  # name -> (columns, rows)
    trace: object = None


# ---------------------------------------------------------------------------
# formatting


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, mpmath.mpf):
        if mpmath.isinf(v) or mpmath.isnan(v):
            return str(float(v))
        return mpmath.nstr(v, 20, strip_zeros=False, min_fixed=-4, max_fixed=20)
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".20g")
    if isinstance(v, (tuple, list)):
        return " ".join(fmt(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating, mpmath.mpf)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if v is None or isinstance(v, str):
        return v
    return str(v)


def write_csv(path: Path, columns: list, rows: list):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in columns])


def emit_plot(trace, path, width: int = 640, height: int = 400) -> Path:
    """Log-x SVG line plot of the S and bound columns of a trace."""
    rows = list(getattr(trace, "rows", trace) or [])
    if not rows:
        raise DomainError("cannot plot an empty trace")
    pts = [(float(r["t"]), float(r["S"]), float(r["bound"])) for r in rows if float(r["t"]) > 0]
    if not pts:
        raise DomainError("trace has no rows with t > 0")
    xs = [math.log10(p[0]) for p in pts]
    ys = [v for p in pts for v in p[1:] if math.isfinite(v)]
    x0, x1 = min(xs), max(xs)
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 40

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    def polyline(col, colour):
        coords = " ".join(f"{px(x):.3f},{py(p[col]):.3f}" for x, p in zip(xs, pts) if math.isfinite(p[col]))
        return f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}"/>'

    name = getattr(trace, "probe", None) or getattr(trace, "name", "") or ""
    svg = "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="12">log10 t</text>',
        f'<text x="{pad}" y="{pad - 12}" font-size="12">{name}: S (blue), bound (red)</text>',
        f'<text x="{pad}" y="{height - pad + 14}" font-size="10">{x0:.3g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 14}" font-size="10" text-anchor="end">{x1:.3g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{pad - 4}" y="{pad}" font-size="10" text-anchor="end">{y1:.3g}</text>',
        polyline(1, "blue"),
        polyline(2, "red"),
        "</svg>",
        "",
    ])
    path = Path(path)
    path.write_text(svg)
    return path


# ---------------------------------------------------------------------------
# pipelines


def _alpha(cfg: ExperimentConfig) -> RealVector:
    if cfg.alpha is None:
        raise DomainError(f"{cfg.command} needs --alpha")
    return RealVector.parse(cfg.alpha)


def _best_approx(alpha, M_max, ctx, method="auto"):
    if method == "cf" or (method == "auto" and alpha.n == 1):
        return cf_best_approximations(alpha, M_max, ctx)
    return enumerate_best_approximations(alpha, M_max, ctx)


def _report_rows(rep, keys):
    return [dict({k: r.get(k) for k in keys}, **{"pass": r["pass"]}) for r in rep.rows]


def run_best_approx(cfg, ctx):
    alpha = _alpha(cfg)
    ba = _best_approx(alpha, cfg.budgets["m_max"], ctx, cfg.options.get("method", "auto"))
    flags = minkowski_ok(ba)
    rows = [{"nu": r.nu, "M": r.M, "zeta": r.zeta, "minkowski_ok": ok, "m": r.m} for r, ok in zip(ba, flags)]
    return Outcome(["nu", "M", "zeta", "minkowski_ok", "m"], rows, all(flags),
                   {"records": len(ba), "limit": ba.limit})


def run_exponents(cfg, ctx):
    alpha = _alpha(cfg)
    n = alpha.n
    ba = _best_approx(alpha, cfg.budgets["m_max"], ctx)
    q_max = cfg.budgets.get("q_max")
    sa = simultaneous_best(alpha, q_max, ctx) if q_max else None
    est = estimate_exponents(ba, sa)
    rows = [
        {"quantity": "omega_est", "value": est.omega_est},
        {"quantity": "omega_hat_est", "value": est.omega_hat_est},
        {"quantity": "lambda_hat_est", "value": est.lambda_hat_est},
        {"quantity": "depth", "value": est.depth},
        {"quantity": "consistent", "value": est.consistent(n)},
    ]
    if n >= 2:
        w = max(est.omega_hat_est, float(n))
        rows.append({"quantity": "marnat_G", "value": marnat_root(n, w)})
        rows.append({"quantity": "jarnik_lambda_lower", "value": jarnik_transfer(n, w)})
    for k in range(2, cfg.options.get("g_table", 0) + 1):
        g_star, g_max, arg = g_n_star(k)
        rows.append({"quantity": f"g_star[{k}]", "value": g_star})
        rows.append({"quantity": f"g_grid_max[{k}]", "value": g_max})
    return Outcome(["quantity", "value"], rows, est.consistent(n), {"n": n})


def run_poincare(cfg, ctx):
    o = cfg.options
    A = o["A"]
    cols = ["check", "n", "t", "lhs", "rhs", "pass"]
    if o.get("certify_f1"):
        rep = certify_F1_inequalities(A, o["t0"], o["n_max"], cfg.budgets["grid"], ctx=ctx)
    elif o.get("certify_f2"):
        t_seed, h = find_f2_seed(A, ctx=ctx)
        rep = certify_F2_oscillation(A, t_seed, h, o["n_max"], ctx=ctx,
                                     grid_points=cfg.budgets["grid"])
    else:
        raise click.UsageError("poincare needs --certify-f1 or --certify-f2")
    return Outcome(cols, _report_rows(rep, cols[:-1]), rep.passed, rep.meta)


def run_pell(cfg, ctx):
    D, N = cfg.options["D"], cfg.budgets["n_max"]
    p = pell_powers(pell_fundamental(D), N)
    res = lambda_power_residuals(p, N, ctx.bits)
    rows = []
    ok = True
    for n, ((u, v), r) in enumerate(zip(p.powers, res), start=1):
        ident = u * u - D * v * v == 1
        good = ident and r <= mpmath.mpf("1e-40")
        ok &= good
        rows.append({"n": n, "u": u, "v": v, "identity": ident, "lambda_residual": r, "pass": good})
    out = Outcome(["n", "u", "v", "identity", "lambda_residual", "pass"], rows, ok,
                  {"D": D, "u1": p.u, "v1": p.v})
    t_max = cfg.budgets.get("t_max")
    if t_max:
        rep = certify_discrete_identity(cfg.options["A"], p, t_max, ctx=ctx)
        cols = ["t", "lhs", "rhs", "residual", "bound", "pass"]
        out.extra["pell_discrete"] = (cols, _report_rows(rep, cols[:-1]))
        out.passed = out.passed and rep.passed
        out.meta["max_residual"] = rep.meta.get("max_residual")
    return out


def run_kochergin(cfg, ctx):
    alpha = _alpha(cfg)
    sigma = SigmaSequence.parse(cfg.options["sigma"])
    ba = _best_approx(alpha, cfg.budgets["m_max"], ctx)
    c = build_kochergin(alpha, ba, sigma, cfg.budgets["k_max"], ctx)
    meta = {"chosen": [list(x) for x in c.chosen], "t0": c.t0, "r_last": c.r_last}
    if not cfg.options.get("certify"):
        rows = [{"k": k, "nu": nu, "r": r, "M": ba[nu - 1].M, "zeta": ba[nu - 1].zeta} for k, nu, r in c.chosen]
        return Outcome(["k", "nu", "r", "M", "zeta"], rows, True, meta)
    rep = certify_growth(c, c.t0, c.r_last, ctx)
    cols = ["t", "S", "bound", "tail", "ratio_2tsigma", "pass"]
    return Outcome(cols, _report_rows(rep, cols[:-1]), rep.passed, meta, trace=rep)


def run_smooth(cfg, ctx):
    alpha = _alpha(cfg)
    ba = _best_approx(alpha, cfg.budgets["m_max"], ctx)
    s = build_smooth(alpha, ba, cfg.options["d"], cfg.budgets["n_terms"], ctx)
    rep = certify_smooth_growth(s, cfg.budgets["t_max"], ctx)
    cols = ["nu", "M", "t_left", "t_right", "min_S", "argmin_t", "prediction", "pass"]
    return Outcome(cols, _report_rows(rep, cols[:-1]), rep.passed, {"margin": s.margin})


def run_koksma(cfg, ctx):
    alpha = _alpha(cfg)
    f = harmonic("cos", cfg.options.get("freq", 1))
    tr = koksma_probe(f, alpha, cfg.budgets["t_max"], ctx)
    cols = ["t", "S", "bound", "discrepancy", "pass"]
    return Outcome(cols, tr.rows, tr.passed, tr.meta, trace=tr)


def run_probes(cfg, ctx):
    o, b = cfg.options, cfg.budgets
    probe = o["probe"]
    trace_cols = ["t", "S", "bound", "pass"]
    if probe == "weyl":
        alpha = _alpha(cfg)
        ts = [int(v) for v in np.unique(np.geomspace(1, b["t_max"], 6).round().astype(np.int64))]
        tr = weyl_probe(harmonic("cos", 1 if alpha.n == 1 else (1,) * alpha.n), alpha, None, ts, ctx)
        return Outcome(trace_cols, tr.rows, tr.passed, tr.meta, trace=tr)
    if probe == "sidorov":
        alpha = _alpha(cfg)
        qs = convergent_denominators(alpha, b["q_max"], ctx)
        tr = sidorov_probe(harmonic("cos", 1), alpha, qs, b["grid"], ctx)
        return Outcome(trace_cols, tr.rows, tr.passed, tr.meta, trace=tr)
    if probe == "integral":
        rows = []
        cases = [
            ("cos(x)", harmonic("cos", 1), [(0.0, 1.0)]),
            ("cos(x) on [0,0.3]", harmonic("cos", 1), [(0.0, 0.3)]),
            ("cos(x1+x2) on [0,0.3]^2", harmonic("cos", (1, 1)), [(0.0, 0.3), (0.0, 0.3)]),
        ]
        for label, f, box in cases:
            r = integral_bound_probe(f, box, b["t_max"], ctx=ctx)
            rows.append({"case": label, "t": r["t"], "value": r["value"], "bound": r["bound"], "pass": r["pass"]})
        return Outcome(["case", "t", "value", "bound", "pass"], rows, all(r["pass"] for r in rows))
    if probe == "window":
        rows = []
        for q, a in ((3, 1), (5, 2)):
            for t in (10, 100, 1000):
                r = rational_window_bound_probe(harmonic("cos", 1), a, q, t, ctx)
                rows.append({"q": q, "a": a, "t": t, "value": r["value"], "bound": r["bound"], "pass": r["pass"]})
        return Outcome(["q", "a", "t", "value", "bound", "pass"], rows, all(r["pass"] for r in rows))
    if probe == "theorem5":
        alpha = _alpha(cfg)
        spec = DecaySpec(1.0, o["gamma"], seed=cfg.seed)
        res = theorem5_trend(spec.realize(alpha.n), alpha, [10**2, 10**3, 10**4], b["grid"], ctx, gamma=o["gamma"])
        cols = ["Q", "t", "r", "observed", "bound", "nu", "warning", "pass"]
        return Outcome(cols, res["rows"], res["pass"], {"monotone": res["monotone"]})
    if probe == "colzani":
        phi = LogPowerPhi(o["phi_a"], o["phi_b"])
        res = colzani_probe(default_colzani_series(), None, phi, b["t_max"], ctx, seed=cfg.seed)
        cols = ["alpha", "c_emp", "c_emp_doubled", "ratio", "stable"]
        meta = {k: v for k, v in res.items() if k != "rows"}
        return Outcome(cols, res["rows"], res["pass"], meta)
    raise click.UsageError(f"unknown probe {probe!r}")


def run_report(cfg, ctx):
    rows = []
    for p in sorted(Path(cfg.out).glob("*.json")):
        if p.stem == "report":
            continue
        try:
            side = json.loads(p.read_text())
        except json.JSONDecodeError:
            continue
        if "exit_code" not in side:
            continue
        rows.append({"command": side.get("command"), "schema": side.get("schema"), "rows": side.get("rows"),
                     "exit_code": side["exit_code"], "pass": side["exit_code"] == 0})
    return Outcome(["command", "schema", "rows", "exit_code", "pass"], rows, all(r["pass"] for r in rows))


PIPELINES = {
    "best-approx": run_best_approx,
    "exponents": run_exponents,
    "poincare": run_poincare,
    "pell": run_pell,
    "kochergin": run_kochergin,
    "smooth": run_smooth,
    "koksma": run_koksma,
    "probes": run_probes,
    "report": run_report,
}


def run(cfg: ExperimentConfig) -> int:
    """Dispatch one experiment, write its artifacts, and return the exit code."""
    cfg.validate()
    ctx = cfg.context()
    start = time.perf_counter()
    out = PIPELINES[cfg.command](cfg, ctx)
    wall = time.perf_counter() - start
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = cfg.command if cfg.command != "probes" else f"probes-{cfg.options['probe']}"
    write_csv(out_dir / f"{name}.csv", out.columns, out.rows)
    for extra, (cols, rows) in out.extra.items():
        write_csv(out_dir / f"{extra}.csv", cols, rows)
    code = 0 if out.passed else 2
    side = {
        "command": cfg.command, "schema": f"{name}/{SCHEMA_VERSION}", "schema_version": SCHEMA_VERSION,
        "config": asdict(cfg), "version": __version__, "precision_bits": ctx.bits, "tol": ctx.tol,
        "wall_time_s": wall, "rows": len(out.rows), "exit_code": code, "meta": out.meta,
    }
    (out_dir / f"{name}.json").write_text(json.dumps(_jsonable(side), indent=2, sort_keys=True) + "\n")
    if cfg.plot:
        if out.trace is None:
            raise click.UsageError(f"{name} has no trace to plot")
        emit_plot(out.trace, cfg.plot)
    status = "PASS" if code == 0 else "FAIL"
    click.echo(f"{name}: {status} ({len(out.rows)} rows, {wall:.2f}s) -> {out_dir / (name + '.csv')}")
    return code


# ---------------------------------------------------------------------------
# click wiring


def _common(fn):
    fn = click.option("--out", "out", default=".", show_default=True, type=click.Path(file_okay=False),
                      help="Output directory.")(fn)
    fn = click.option("--bits", type=click.IntRange(min=64), default=None,
                      help="Working precision in bits (default: $KRONLAB_BITS or 256).")(fn)
    fn = click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)(fn)
    return fn


def _alpha_opt(required=True):
    return click.option("--alpha", required=required,
                        help="sqrt<D>, golden, (a+b*sqrt(D))/c, dec:<digits>, or a comma list.")


def _plot_opt(fn):
    return click.option("--plot", type=click.Path(dir_okay=False), default=None, help="Write an SVG plot.")(fn)


@click.group()
@click.version_option(__version__)
def cli():
    """Experiments on Birkhoff sums over Kronecker sequences."""


@cli.command("best-approx")
@_alpha_opt()
@click.option("--m-max", type=click.IntRange(min=1), required=True)
@click.option("--method", type=click.Choice(["auto", "cf", "enum"]), default="auto", show_default=True)
@_common
def best_approx_cmd(alpha, m_max, method, out, bits, seed):
    """Best approximation vectors with the Minkowski check."""
    return run(ExperimentConfig("best-approx", alpha, bits, {"m_max": m_max}, {"method": method}, out, seed))


@cli.command("exponents")
@_alpha_opt()
@click.option("--m-max", type=click.IntRange(min=1), default=10**6, show_default=True)
@click.option("--q-max", type=click.IntRange(min=1), default=None)
@click.option("--g-table", type=click.IntRange(min=0), default=0, help="Tabulate g_star for n = 2..N.")
@_common
def exponents_cmd(alpha, m_max, q_max, g_table, out, bits, seed):
    """Finite-sample Diophantine exponent estimates."""
    return run(ExperimentConfig("exponents", alpha, bits, {"m_max": m_max, "q_max": q_max},
                                {"g_table": g_table}, out, seed))


@cli.command("poincare")
@click.option("--certify-f1", is_flag=True)
@click.option("--certify-f2", is_flag=True)
@click.option("--A", "A", type=float, required=True)
@click.option("--t0", type=float, default=0.5, show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), default=12, show_default=True)
@click.option("--grid", type=click.IntRange(min=1), default=None,
              help="Points per octave (F1, default 64) or grid points (F2, default 5000).")
@_common
def poincare_cmd(certify_f1, certify_f2, A, t0, n_max, grid, out, bits, seed):
    """Certify the functional inequalities of the lacunary sine series."""
    if certify_f1 == certify_f2:
        raise click.UsageError("pass exactly one of --certify-f1 / --certify-f2")
    grid = grid or (64 if certify_f1 else 5000)
    return run(ExperimentConfig("poincare", None, bits, {"grid": grid},
                                {"A": A, "t0": t0, "n_max": n_max, "certify_f1": certify_f1,
                                 "certify_f2": certify_f2}, out, seed))


@cli.command("pell")
@click.option("--D", "D", type=int, required=True)
@click.option("--n-max", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--A", "A", type=float, default=2.0, show_default=True)
@click.option("--t-max", type=click.IntRange(min=1), default=None, help="Also check the discrete identity.")
@_common
def pell_cmd(D, n_max, A, t_max, out, bits, seed):
    """Pell powers, conjugate residuals and the discrete sum identity."""
    return run(ExperimentConfig("pell", None, bits, {"n_max": n_max, "t_max": t_max}, {"D": D, "A": A}, out, seed))


@cli.command("kochergin")
@_alpha_opt()
@click.option("--sigma", default="power:0.25", show_default=True)
@click.option("--k-max", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--m-max", type=click.IntRange(min=1), default=10**7, show_default=True)
@click.option("--certify", is_flag=True, help="Check S_t >= t sigma_t on the certified window.")
@_plot_opt
@_common
def kochergin_cmd(alpha, sigma, k_max, m_max, certify, plot, out, bits, seed):
    """Continuous telescoping construction with prescribed growth."""
    return run(ExperimentConfig("kochergin", alpha, bits, {"k_max": k_max, "m_max": m_max},
                                {"sigma": sigma, "certify": certify}, out, seed, plot))


@cli.command("smooth")
@_alpha_opt()
@click.option("--d", type=float, default=1.0, show_default=True)
@click.option("--n-terms", type=click.IntRange(min=1), default=16, show_default=True)
@click.option("--t-max", type=click.IntRange(min=1), default=10**4, show_default=True)
@click.option("--m-max", type=click.IntRange(min=1), default=10**9, show_default=True)
@_common
def smooth_cmd(alpha, d, n_terms, t_max, m_max, out, bits, seed):
    """Smooth telescoping construction and its windowed lower bounds."""
    return run(ExperimentConfig("smooth", alpha, bits, {"n_terms": n_terms, "t_max": t_max, "m_max": m_max},
                                {"d": d}, out, seed))


@cli.command("koksma")
@_alpha_opt()
@click.option("--t-max", type=click.IntRange(min=1), default=10**4, show_default=True)
@click.option("--freq", type=click.IntRange(min=1), default=1, show_default=True)
@_plot_opt
@_common
def koksma_cmd(alpha, t_max, freq, plot, out, bits, seed):
    """|S_t| against V[f] D_t for f = cos(2 pi freq x)."""
    return run(ExperimentConfig("koksma", alpha, bits, {"t_max": t_max}, {"freq": freq}, out, seed, plot))


@cli.command("probes")
@click.option("--probe", type=click.Choice(PROBES), required=True)
@_alpha_opt(required=False)
@click.option("--t-max", type=click.IntRange(min=1), default=None)
@click.option("--q-max", type=click.IntRange(min=1), default=10**5, show_default=True)
@click.option("--grid", type=click.IntRange(min=8), default=1024, show_default=True)
@click.option("--gamma", type=float, default=7.0, show_default=True)
@click.option("--phi-a", type=float, default=1.0, show_default=True)
@click.option("--phi-b", type=float, default=1.1, show_default=True)
@_plot_opt
@_common
def probes_cmd(probe, alpha, t_max, q_max, grid, gamma, phi_a, phi_b, plot, out, bits, seed):
    """Weyl, Sidorov, integral, rational-window, special-time and Colzani probes."""
    if t_max is None:
        t_max = {"weyl": 10**5, "integral": 10, "colzani": 10**4}.get(probe, 1000)
    return run(ExperimentConfig("probes", alpha, bits, {"t_max": t_max, "q_max": q_max, "grid": grid},
                                {"probe": probe, "gamma": gamma, "phi_a": phi_a, "phi_b": phi_b},
                                out, seed, plot))


@cli.command("report")
@_common
def report_cmd(out, bits, seed):
    """Summarise the JSON sidecars found in the output directory."""
    return run(ExperimentConfig("report", None, bits, {}, {}, out, seed))


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="kronlab", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except KronlabError as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
