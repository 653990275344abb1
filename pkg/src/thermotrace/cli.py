"""Command line interface.

Subcommands mirror the library modules: kernel evaluation tables, transfer
and Nyquist/Popov curves, the critical gain by both routes, Volterra and
spectral simulations, eigenvalue listings, stability sweeps, and a report
aggregator that renders figures next to the delimited artifacts.

Every subcommand accepts --config PATH pointing at a flat JSON object
whose keys are option names (with underscores); explicit command line
flags override config values, and the config may also carry the
subcommand itself under the key "subcommand".

Exit codes: 0 success, 2 domain or configuration error, 3 tolerance or
numerical failure, 64 unknown subcommand, 66 unreadable config file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .errors import (
    DomainError,
    MissingArtifactError,
    NonFiniteError,
    ToleranceError,
)
from .frequency import (
    OmegaGrid,
    beta_sup,
    crossing_omega0,
    m_of_q,
    nyquist_curve,
    popov_closed,
    popov_curve,
    transfer_loc,
    transfer_nloc,
)
from .kernels import (
    DEFAULT_POLICY,
    InitialData,
    SeriesPolicy,
    kernel_a_grid,
    kernel_as_prime_grid,
    shifted_kernel_as_grid,
)
from .pde import SimConfig, integrate, project_initial_data, snapshot_table
from .report import build_report, curve_segment_rows
from .spectrum import linearized_eigenvalues, lyapunov_threshold, lyapunov_verdict
from .tables import write_record, write_table
from .volterra import (
    VolterraProblem,
    decay_diagnostic,
    energy_ledger,
    solve_volterra,
    tail_sign_changes,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_UNKNOWN_COMMAND = 64
EXIT_UNREADABLE_CONFIG = 66


def parse_u0(text: str) -> InitialData:
    """Parse an initial profile like "cos", "cos:2:0.5", "mean:1,cos:3".

    Terms are comma separated; "cos[:k[:amp]]" adds amp * cos(k x) and
    "mean:v" sets the constant part.
    """
    mean = 0.0
    modes = {}
    for term in text.split(","):
        term = term.strip()
        if not term:
            continue
        parts = term.split(":")
        if parts[0] == "mean":
            if len(parts) != 2:
                raise DomainError(f"bad mean term {term!r}")
            mean = float(parts[1])
        elif parts[0] == "cos":
            k = int(parts[1]) if len(parts) > 1 else 1
            amp = float(parts[2]) if len(parts) > 2 else 1.0
            if k < 1:
                raise DomainError(f"cosine index must be >= 1 in {term!r}")
            modes[k] = modes.get(k, 0.0) + amp
        else:
            raise DomainError(f"unknown initial data term {term!r}")
    if modes:
        kmax = max(modes)
        mode_list = [modes.get(k, 0.0) for k in range(1, kmax + 1)]
    else:
        mode_list = []
    return InitialData(mean=mean, modes=tuple(mode_list))


def parse_beta_range(text: str) -> list:
    """Parse "start:stop:step" (inclusive) or a comma list of gains."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0 or stop < start:
            raise DomainError(f"bad range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _policy(ns) -> SeriesPolicy:
    if getattr(ns, "tail_tol", None):
        return SeriesPolicy(tail_tol=ns.tail_tol)
    return DEFAULT_POLICY


def _out_path(ns, stem: str) -> Path:
    """Resolve the output path; an unset --format follows the extension."""
    path = Path(ns.out) if ns.out else None
    if ns.format is None:
        ns.format = "json" if path is not None and path.suffix == ".json" else "csv"
    return path if path is not None else Path(f"{stem}.{ns.format}")


# ---------------------------------------------------------------------------
# Subcommand implementations.  Each builder returns an ArgumentParser and
# each runner takes the parsed namespace, writes its artifact, prints a
# short summary, and raises package errors on failure.
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", default=None,
                   help="output path (default: <subcommand>.<format> in cwd)")
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="delimited output format (default: follow --out "
                        "extension, else csv)")
    p.add_argument("--tol", type=float, default=None,
                   help="override the subcommand's main tolerance")
    p.add_argument("--tail-tol", dest="tail_tol", type=float, default=None,
                   help="series truncation tolerance for kernel evaluations")


def _build_kernel():
    p = argparse.ArgumentParser(prog="thermotrace kernel")
    p.add_argument("--t-min", dest="t_min", type=float, default=1e-3)
    p.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    _add_common(p)
    return p


def _run_kernel(ns):
    if not (0.0 < ns.t_min < ns.t_max):
        raise DomainError("need 0 < t-min < t-max")
    if ns.n < 2:
        raise DomainError("need n >= 2")
    if ns.spacing == "log":
        ts = np.logspace(math.log10(ns.t_min), math.log10(ns.t_max), ns.n)
    else:
        ts = np.linspace(ns.t_min, ns.t_max, ns.n)
    policy = _policy(ns)
    a = kernel_a_grid(ts, policy)
    a_s = shifted_kernel_as_grid(ts, policy)
    apr = kernel_as_prime_grid(ts, policy)
    path = write_table(_out_path(ns, "kernel"), ["t", "a", "a_s", "as_prime"],
                       list(zip(ts, a, a_s, apr)), ns.format)
    print(f"kernel table: {path} ({ts.size} rows)")
    print(f"a({ts[0]:.6g}) = {a[0]:.12g}, a({ts[-1]:.6g}) = {a[-1]:.12g}")


def _build_transfer():
    p = argparse.ArgumentParser(prog="thermotrace transfer")
    p.add_argument("--which", choices=("nloc", "loc"), default="nloc")
    p.add_argument("--omega-min", dest="omega_min", type=float, default=0.2)
    p.add_argument("--omega-max", dest="omega_max", type=float, default=50.0)
    p.add_argument("--n", type=int, default=200)
    _add_common(p)
    return p


def _run_transfer(ns):
    if not (0.0 < ns.omega_min < ns.omega_max):
        raise DomainError("need 0 < omega-min < omega-max")
    if ns.n < 2:
        raise DomainError("need n >= 2")
    omegas = np.logspace(math.log10(ns.omega_min), math.log10(ns.omega_max), ns.n)
    fn = transfer_nloc if ns.which == "nloc" else transfer_loc
    vals = [fn(1j * w) for w in omegas]
    rows = [(w, v.real, v.imag) for w, v in zip(omegas, vals)]
    path = write_table(_out_path(ns, f"transfer_{ns.which}"),
                       ["omega", "re", "im"], rows, ns.format)
    print(f"transfer table ({ns.which}): {path} ({len(rows)} rows)")


def _build_nyquist():
    p = argparse.ArgumentParser(prog="thermotrace nyquist")
    p.add_argument("--which", choices=("nloc", "loc"), default="nloc")
    p.add_argument("--omega-min", dest="omega_min", type=float, default=0.2)
    p.add_argument("--omega-max", dest="omega_max", type=float, default=50.0)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--detour-radius", dest="detour_radius", type=float, default=0.2)
    p.add_argument("--n-detour", dest="n_detour", type=int, default=101)
    _add_common(p)
    return p


def _run_nyquist(ns):
    curve = nyquist_curve(ns.omega_min, ns.omega_max, ns.n, ns.detour_radius,
                          ns.which, ns.n_detour)
    rows = curve_segment_rows(curve)
    path = write_table(_out_path(ns, f"nyquist_{ns.which}"),
                       ["segment", "parameter", "re", "im"], rows, ns.format)
    print(f"nyquist table ({ns.which}): {path} ({len(rows)} rows)")
    res = [r[2] for r in rows]
    print(f"re range: [{min(res):.6g}, {max(res):.6g}]")


def _build_popov():
    p = argparse.ArgumentParser(prog="thermotrace popov")
    p.add_argument("--omega-min", dest="omega_min", type=float, default=1e-3)
    p.add_argument("--omega-max", dest="omega_max", type=float, default=50.0)
    p.add_argument("--n", type=int, default=400)
    _add_common(p)
    return p


def _run_popov(ns):
    curve = popov_curve(ns.omega_min, ns.omega_max, ns.n)
    rows = [(w, p.real, p.imag) for w, p in zip(curve.omegas, curve.points)]
    path = write_table(_out_path(ns, "popov"), ["omega", "re", "im"], rows,
                       ns.format)
    print(f"popov locus: {path} ({len(rows)} rows)")


def _build_beta0():
    p = argparse.ArgumentParser(prog="thermotrace beta0")
    p.add_argument("--bracket-lo", dest="bracket_lo", type=float, default=0.5)
    p.add_argument("--bracket-hi", dest="bracket_hi", type=float, default=2.0)
    _add_common(p)
    return p


def _run_beta0(ns):
    tol = ns.tol if ns.tol else 1e-12
    pair = crossing_omega0((ns.bracket_lo, ns.bracket_hi), tol, _policy(ns))
    from .frequency import nycond_sum

    record = {
        "omega0": pair.omega0,
        "beta0": pair.beta0,
        "residual": pair.residual,
        "nycond_residual": abs(nycond_sum(pair.omega0, _policy(ns)) - 0.5),
    }
    if ns.out is None:
        ns.out = "beta0.json"
    path = write_record(_out_path(ns, "beta0"), record, ns.format)
    print(f"omega0 = {pair.omega0:.15g}")
    print(f"beta0 = {pair.beta0:.15g}")
    print(f"record: {path}")


def _build_mq():
    p = argparse.ArgumentParser(prog="thermotrace mq")
    p.add_argument("--q-min", dest="q_min", type=float, default=0.0)
    p.add_argument("--q-max", dest="q_max", type=float, default=5.0)
    p.add_argument("--n", type=int, default=121)
    _add_common(p)
    return p


def _run_mq(ns):
    if not (0.0 <= ns.q_min < ns.q_max) or ns.n < 2:
        raise DomainError("need 0 <= q-min < q-max and n >= 2")
    grid = OmegaGrid()
    omegas = grid.values()
    table = (omegas,) + popov_closed(omegas)
    qs = np.linspace(ns.q_min, ns.q_max, ns.n)
    ms = np.array([m_of_q(q, grid, _table=table) for q in qs])
    path = write_table(_out_path(ns, "mq"), ["q", "m"], list(zip(qs, ms)),
                       ns.format)
    opt = beta_sup(combined_tol=ns.tol if ns.tol else 1e-3)
    opt_path = write_record(Path(path).with_name("mq_opt.json"), {
        "q_star": opt.q_star,
        "beta_star": opt.beta_star,
        "beta_crossing": opt.beta_crossing,
    })
    print(f"mq table: {path} ({ns.n} rows)")
    print(f"q_star = {opt.q_star:.9g}")
    print(f"beta_star = {opt.beta_star:.12g}")
    print(f"optimum record: {opt_path}")


def _build_volterra():
    p = argparse.ArgumentParser(prog="thermotrace volterra")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--u0", default="cos")
    p.add_argument("--horizon", type=float, default=40.0)
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--tail-fraction", dest="tail_fraction", type=float, default=0.25)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--fft", action="store_true",
                   help="use FFT convolution in the energy ledger")
    _add_common(p)
    return p


def _run_volterra(ns):
    problem = VolterraProblem(beta=ns.beta, u0=parse_u0(ns.u0),
                              horizon=ns.horizon, dt=ns.dt, policy=_policy(ns))
    traj = solve_volterra(problem)
    ledger = energy_ledger(traj, ns.q, use_fft=ns.fft)
    diag = decay_diagnostic(traj, ns.tail_fraction, ns.threshold)
    rows = list(zip(traj.times, traj.y, traj.g_values, ledger.W1, ledger.W2,
                    ledger.W3, ledger.V, ledger.R, ledger.residual))
    path = write_table(_out_path(ns, "volterra"),
                       ["t", "y", "g", "W1", "W2", "W3", "V", "R", "residual"],
                       rows, ns.format)
    print(f"trajectory: {path} ({len(rows)} rows)")
    print(f"tail_sup = {diag.tail_sup:.6g}")
    print(f"decayed = {'yes' if diag.decayed else 'no'}")
    print(f"w1_final = {diag.w1_final:.9g}")
    print(f"max_ledger_residual = {float(np.max(np.abs(ledger.residual))):.6g}")


def _build_simulate():
    p = argparse.ArgumentParser(prog="thermotrace simulate")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--u0", default="cos")
    p.add_argument("--modes", dest="modes", type=int, default=64,
                   help="spectral truncation K")
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--horizon", type=float, default=20.0)
    p.add_argument("--stepper", choices=("imex_euler", "imex_trapezoid"),
                   default="imex_trapezoid")
    p.add_argument("--snapshot-every", dest="snapshot_every", type=int, default=1)
    _add_common(p)
    return p


def _run_simulate(ns):
    if ns.beta < 0.0:
        raise DomainError("simulate requires beta >= 0")
    u0 = parse_u0(ns.u0)
    state0 = project_initial_data(u0, ns.modes, ns.beta)
    config = SimConfig(K=ns.modes, dt=ns.dt, horizon=ns.horizon,
                       stepper=ns.stepper, snapshot_every=ns.snapshot_every)
    snaps = integrate(state0, config)
    cols = snapshot_table(snaps)
    names = list(cols.keys())
    rows = list(zip(*(cols[c] for c in names)))
    path = write_table(_out_path(ns, "simulate"), names, rows, ns.format)
    print(f"snapshots: {path} ({len(rows)} rows)")
    print(f"final trace_pi = {cols['trace_pi'][-1]:.9g}")
    print(f"final h1 = {cols['h1'][-1]:.9g}")


def _build_lyapunov():
    p = argparse.ArgumentParser(prog="thermotrace lyapunov")
    p.add_argument("--alpha", type=float, default=None,
                   help="single gain to test; omit to scan and bisect")
    p.add_argument("--alpha-min", dest="alpha_min", type=float, default=0.5)
    p.add_argument("--alpha-max", dest="alpha_max", type=float, default=2.0)
    p.add_argument("--n", type=int, default=31)
    _add_common(p)
    return p


def _run_lyapunov(ns):
    if ns.alpha is not None:
        v = lyapunov_verdict(ns.alpha)
        rows = [(v.alpha, v.r_prime_at_zero,
                 v.fixed_point if v.fixed_point is not None else math.nan,
                 1 if v.concave_on_interval else 0)]
        path = write_table(_out_path(ns, "lyapunov"),
                           ["alpha", "r_prime_at_zero", "fixed_point", "concave"],
                           rows, ns.format)
        print(f"verdict: {path}")
        print(f"r_prime_at_zero = {v.r_prime_at_zero:.12g}")
        fp = "none" if v.fixed_point is None else f"{v.fixed_point:.12g}"
        print(f"fixed_point = {fp}")
        return
    if not (0.0 < ns.alpha_min < ns.alpha_max) or ns.n < 2:
        raise DomainError("need 0 < alpha-min < alpha-max and n >= 2")
    alphas = np.linspace(ns.alpha_min, ns.alpha_max, ns.n)
    rows = []
    for alpha in alphas:
        v = lyapunov_verdict(float(alpha))
        rows.append((v.alpha, v.r_prime_at_zero,
                     v.fixed_point if v.fixed_point is not None else math.nan,
                     1 if v.concave_on_interval else 0))
    path = write_table(_out_path(ns, "lyapunov"),
                       ["alpha", "r_prime_at_zero", "fixed_point", "concave"],
                       rows, ns.format)
    thr = lyapunov_threshold(ns.alpha_min, ns.alpha_max)
    print(f"scan: {path} ({len(rows)} rows)")
    print(f"threshold = {thr:.12g}")
    print(f"4/pi = {4.0 / math.pi:.12g}")


def _build_eigenvalues():
    p = argparse.ArgumentParser(prog="thermotrace eigenvalues")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--re-min", dest="re_min", type=float, default=-10.0)
    p.add_argument("--re-max", dest="re_max", type=float, default=50.0)
    p.add_argument("--im-min", dest="im_min", type=float, default=-50.0)
    p.add_argument("--im-max", dest="im_max", type=float, default=50.0)
    _add_common(p)
    return p


def _run_eigenvalues(ns):
    tol = ns.tol if ns.tol else 1e-10
    roots = linearized_eigenvalues(ns.beta,
                                   (ns.re_min, ns.re_max, ns.im_min, ns.im_max),
                                   tol)
    rows = [(r.lam.real, r.lam.imag, r.residual) for r in roots]
    path = write_table(_out_path(ns, "eigenvalues"), ["re", "im", "residual"],
                       rows, ns.format)
    print(f"eigenvalues: {path} ({len(rows)} roots)")
    if rows:
        print(f"max Re lambda = {max(r[0] for r in rows):.9g}")


def _build_sweep():
    p = argparse.ArgumentParser(prog="thermotrace sweep")
    p.add_argument("--beta", required=True,
                   help="gain range start:stop:step or comma list")
    p.add_argument("--observable",
                   choices=("tail_sup", "w1_final", "sign_changes"),
                   default="tail_sup")
    p.add_argument("--u0", default="cos")
    p.add_argument("--horizon", type=float, default=300.0)
    p.add_argument("--dt", type=float, default=0.02)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--tail-fraction", dest="tail_fraction", type=float, default=0.25)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    return p


def _sweep_one(payload):
    beta, mean, modes, horizon, dt, threshold, tail_fraction = payload
    u0 = InitialData(mean=mean, modes=modes)
    problem = VolterraProblem(beta=beta, u0=u0, horizon=horizon, dt=dt)
    traj = solve_volterra(problem)
    diag = decay_diagnostic(traj, tail_fraction, threshold)
    changes = tail_sign_changes(traj, tail_fraction)
    return (beta, diag.tail_sup, diag.w1_final, changes,
            1 if diag.decayed else 0)


def _run_sweep(ns):
    betas = parse_beta_range(ns.beta)
    if not betas:
        raise DomainError("empty gain range")
    u0 = parse_u0(ns.u0)
    payloads = [(b, u0.mean, u0.modes, ns.horizon, ns.dt, ns.threshold,
                 ns.tail_fraction) for b in betas]
    if ns.jobs > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            rows = list(pool.map(_sweep_one, payloads))
    else:
        rows = [_sweep_one(p) for p in payloads]
    path = write_table(_out_path(ns, "sweep"),
                       ["beta", "tail_sup", "w1_final", "sign_changes", "decayed"],
                       rows, ns.format)
    print(f"sweep: {path} ({len(rows)} rows)")
    col = {"tail_sup": 1, "w1_final": 2, "sign_changes": 3}[ns.observable]
    for row in rows:
        state = "decayed" if row[4] else "tail above threshold"
        print(f"beta = {row[0]:g}: {ns.observable} = {row[col]:.6g} ({state})")
    flags = [r[4] for r in rows]
    if 0 in flags and 1 in flags:
        last_dec = max(i for i, f in enumerate(flags) if f == 1)
        first_osc = min(i for i, f in enumerate(flags) if f == 0)
        if first_osc == last_dec + 1:
            print(f"stability split between beta = {rows[last_dec][0]:g} "
                  f"and beta = {rows[first_osc][0]:g}")
        else:
            print("warning: decay flags are not monotone across the range")


def _build_report():
    p = argparse.ArgumentParser(prog="thermotrace report")
    p.add_argument("--regen", action="store_true",
                   help="recompute every artifact even if present")
    p.add_argument("--no-regen", dest="no_regen", action="store_true",
                   help="strict mode: fail if any artifact file is missing")
    p.add_argument("--no-figures", dest="no_figures", action="store_true")
    _add_common(p)
    return p


def _run_report(ns):
    if ns.regen and ns.no_regen:
        raise DomainError("--regen and --no-regen are mutually exclusive")
    mode = "regen" if ns.regen else ("strict" if ns.no_regen else "auto")
    outdir = Path(ns.out) if ns.out else Path("artifacts")
    rep = build_report(outdir, mode=mode, render=not ns.no_figures)
    for key in sorted(rep["values"]):
        print(f"{key} = {rep['values'][key]:.12g}")
    for key in sorted(rep["checks"]):
        state = "pass" if rep["checks"][key] else "FAIL"
        print(f"check {key}: {state}")
    print(f"report: {outdir / 'report.json'}")


REGISTRY = {
    "kernel": (_build_kernel, _run_kernel),
    "transfer": (_build_transfer, _run_transfer),
    "nyquist": (_build_nyquist, _run_nyquist),
    "popov": (_build_popov, _run_popov),
    "beta0": (_build_beta0, _run_beta0),
    "mq": (_build_mq, _run_mq),
    "volterra": (_build_volterra, _run_volterra),
    "simulate": (_build_simulate, _run_simulate),
    "lyapunov": (_build_lyapunov, _run_lyapunov),
    "eigenvalues": (_build_eigenvalues, _run_eigenvalues),
    "sweep": (_build_sweep, _run_sweep),
    "report": (_build_report, _run_report),
}


def _load_config(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigUnreadable(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise _ConfigUnreadable(f"config {path} must hold a JSON object")
    return data


class _ConfigUnreadable(Exception):
    pass


def exit_code_for(exc: BaseException) -> int:
    """Map a raised exception to the documented exit code."""
    if isinstance(exc, (ToleranceError, NonFiniteError)):
        return EXIT_TOLERANCE
    if isinstance(exc, (MissingArtifactError, DomainError, ValueError)):
        return EXIT_CONFIG
    return EXIT_CONFIG


def main(argv=None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)

    config = {}
    if "--config" in args:
        i = args.index("--config")
        if i + 1 >= len(args):
            print("error: --config needs a path", file=sys.stderr)
            return EXIT_CONFIG
        cfg_path = args[i + 1]
        del args[i:i + 2]
        try:
            config = _load_config(cfg_path)
        except _ConfigUnreadable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_UNREADABLE_CONFIG

    sub = None
    if args and not args[0].startswith("-"):
        sub = args.pop(0)
    elif "subcommand" in config:
        sub = str(config["subcommand"])
    if sub is None:
        print("usage: thermotrace <subcommand> [options]", file=sys.stderr)
        print("subcommands: " + ", ".join(sorted(REGISTRY)), file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    if sub not in REGISTRY:
        print(f"error: unknown subcommand {sub!r}", file=sys.stderr)
        print("subcommands: " + ", ".join(sorted(REGISTRY)), file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND

    builder, runner = REGISTRY[sub]
    parser = builder()
    dests = {a.dest for a in parser._actions}
    overrides = {}
    for key, value in config.items():
        if key == "subcommand":
            continue
        dest = key.replace("-", "_")
        if dest not in dests:
            print(f"error: config key {key!r} is not an option of {sub!r}",
                  file=sys.stderr)
            return EXIT_CONFIG
        overrides[dest] = value
    if overrides:
        parser.set_defaults(**overrides)

    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_CONFIG
        return EXIT_CONFIG if code not in (0,) else 0

    try:
        runner(ns)
    except (ToleranceError, NonFiniteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (MissingArtifactError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
