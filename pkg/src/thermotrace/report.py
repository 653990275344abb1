"""Aggregate the headline numbers of both routes into one report.

The report directory holds delimited artifacts (one per subcommand), the
figures rendered from them, and report.json with the cross-route values
and pass/fail checks.  Three modes:

* "auto"   - reuse artifact files that exist, compute the rest (default);
* "regen"  - recompute everything from scratch;
* "strict" - only aggregate existing files, error listing any missing.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import figures
from .errors import MissingArtifactError
from .frequency import (
    OmegaGrid,
    beta_sup,
    crossing_omega0,
    m_of_q,
    nycond_sum,
    nyquist_curve,
    popov_closed,
    popov_curve,
)
from .kernels import InitialData
from .pde import compare_with_volterra
from .spectrum import lyapunov_threshold
from .tables import column, read_record, read_table, write_record, write_table

ARTIFACTS = {
    "beta0": "beta0.json",
    "mq": "mq.csv",
    "mq_opt": "mq_opt.json",
    "popov": "popov.csv",
    "nyquist_nloc": "nyquist_nloc.csv",
    "nyquist_loc": "nyquist_loc.csv",
    "tworoute": "tworoute.csv",
    "lyapunov": "lyapunov.json",
}

REPORT_NAME = "report.json"

TWO_ROUTE_BETA = 1.0
TWO_ROUTE_TOL = 2e-3
ROUTES_TOL = 1e-3


def curve_segment_rows(curve) -> list:
    """Flatten a Nyquist curve into (segment, parameter, re, im) rows.

    Rows follow the closed traversal: up the negative imaginary axis,
    around the pole detour, then up the positive axis.
    """
    n = curve.omegas.size // 2
    rows = []
    for w, p in zip(curve.omegas[:n], curve.points[:n]):
        rows.append(("axis_neg", w, p.real, p.imag))
    if curve.detour_phis is not None:
        for phi, p in zip(curve.detour_phis, curve.detour_points):
            rows.append(("detour", phi, p.real, p.imag))
    for w, p in zip(curve.omegas[n:], curve.points[n:]):
        rows.append(("axis_pos", w, p.real, p.imag))
    return rows


def _segments_from_rows(rows) -> dict:
    segs = {}
    for seg, param, re, im in rows:
        segs.setdefault(seg, []).append((param, re, im))
    return {
        name: (np.array([r[1] for r in vals]), np.array([r[2] for r in vals]))
        for name, vals in segs.items()
    }


def _compute_piece(name: str):
    """Compute one artifact's in-memory payload."""
    if name == "beta0":
        pair = crossing_omega0()
        return {
            "omega0": pair.omega0,
            "beta0": pair.beta0,
            "residual": pair.residual,
            "nycond_residual": abs(nycond_sum(pair.omega0) - 0.5),
        }
    if name == "mq":
        grid = OmegaGrid()
        omegas = grid.values()
        table = (omegas,) + popov_closed(omegas)
        qs = np.linspace(0.0, 5.0, 121)
        ms = np.array([m_of_q(q, grid, _table=table) for q in qs])
        return qs, ms
    if name == "mq_opt":
        opt = beta_sup()
        return {
            "q_star": opt.q_star,
            "beta_star": opt.beta_star,
            "beta_crossing": opt.beta_crossing,
        }
    if name == "popov":
        curve = popov_curve()
        return curve.omegas, curve.points.real, curve.points.imag
    if name == "nyquist_nloc":
        return curve_segment_rows(nyquist_curve(which="nloc"))
    if name == "nyquist_loc":
        return curve_segment_rows(nyquist_curve(which="loc"))
    if name == "tworoute":
        cmp = compare_with_volterra(TWO_ROUTE_BETA, InitialData.cosine(1))
        return cmp.times, cmp.trace_volterra, cmp.trace_pde
    if name == "lyapunov":
        return {"threshold": lyapunov_threshold()}
    raise KeyError(name)


def _write_piece(outdir: Path, name: str, payload) -> Path:
    path = outdir / ARTIFACTS[name]
    if name in ("beta0", "mq_opt", "lyapunov"):
        return write_record(path, payload, fmt="json")
    if name == "mq":
        qs, ms = payload
        return write_table(path, ["q", "m"], list(zip(qs, ms)))
    if name == "popov":
        omegas, re, im = payload
        return write_table(path, ["omega", "re", "im"], list(zip(omegas, re, im)))
    if name in ("nyquist_nloc", "nyquist_loc"):
        return write_table(path, ["segment", "parameter", "re", "im"], payload)
    if name == "tworoute":
        t, yv, yp = payload
        return write_table(path, ["t", "trace_volterra", "trace_pde"],
                           list(zip(t, yv, yp)))
    raise KeyError(name)


def _load_piece(outdir: Path, name: str):
    path = outdir / ARTIFACTS[name]
    if name in ("beta0", "mq_opt", "lyapunov"):
        return read_record(path)
    table = read_table(path)
    if name == "mq":
        return column(table, "q"), column(table, "m")
    if name == "popov":
        return column(table, "omega"), column(table, "re"), column(table, "im")
    if name in ("nyquist_nloc", "nyquist_loc"):
        _, rows = table
        return [tuple(r) for r in rows]
    if name == "tworoute":
        return (column(table, "t"), column(table, "trace_volterra"),
                column(table, "trace_pde"))
    raise KeyError(name)


def _popov_leftmost_crossing(omegas, re, im) -> float:
    """Real coordinate where the Popov locus first returns to the axis."""
    flips = np.nonzero(im[:-1] * im[1:] < 0.0)[0]
    if flips.size == 0:
        return math.nan
    i = int(flips[0])
    t = im[i] / (im[i] - im[i + 1])
    return float(re[i] + t * (re[i + 1] - re[i]))


def build_report(outdir, mode: str = "auto", render: bool = True) -> dict:
    """Assemble report.json (and figures) in the given directory.

    Returns the report mapping.  In strict mode every artifact file must
    already exist; the error lists the absent ones.
    """
    if mode not in ("auto", "regen", "strict"):
        raise ValueError(f"unknown report mode {mode!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    if mode == "strict":
        missing = [ARTIFACTS[n] for n in ARTIFACTS
                   if not (outdir / ARTIFACTS[n]).is_file()]
        if missing:
            raise MissingArtifactError(
                "report inputs missing from {}: {}".format(
                    outdir, ", ".join(sorted(missing))))

    pieces = {}
    generated = []
    for name in ARTIFACTS:
        path = outdir / ARTIFACTS[name]
        if mode != "regen" and path.is_file():
            pieces[name] = _load_piece(outdir, name)
        else:
            payload = _compute_piece(name)
            _write_piece(outdir, name, payload)
            generated.append(ARTIFACTS[name])
            pieces[name] = _load_piece(outdir, name)

    omega0 = float(pieces["beta0"]["omega0"])
    beta0 = float(pieces["beta0"]["beta0"])
    beta_popov = float(pieces["mq_opt"]["beta_star"])
    q_star = float(pieces["mq_opt"]["q_star"])
    threshold = float(pieces["lyapunov"]["threshold"])

    t, yv, yp = pieces["tworoute"]
    two_route_sup = float(np.max(np.abs(np.asarray(yv) - np.asarray(yp))))

    loc_segments = _segments_from_rows(pieces["nyquist_loc"])
    loc_min_re = float(min(re.min() for re, _ in loc_segments.values()))

    p_om, p_re, p_im = pieces["popov"]
    leftmost = _popov_leftmost_crossing(np.asarray(p_om), np.asarray(p_re),
                                        np.asarray(p_im))

    nycond_res = abs(nycond_sum(omega0) - 0.5)

    values = {
        "omega0": omega0,
        "beta0_crossing": beta0,
        "beta0_popov": beta_popov,
        "q_star": q_star,
        "routes_gap": abs(beta0 - beta_popov),
        "two_route_sup_diff": two_route_sup,
        "lyapunov_threshold": threshold,
        "loc_curve_min_re": loc_min_re,
        "popov_leftmost_re": leftmost,
        "nycond_residual": nycond_res,
    }
    checks = {
        "beta0_routes_agree": abs(beta0 - beta_popov) <= ROUTES_TOL,
        "two_route_agreement": two_route_sup <= TWO_ROUTE_TOL,
        "loc_curve_in_right_half_plane": loc_min_re > 0.0,
        "lyapunov_threshold_in_window": abs(threshold - 4.0 / math.pi) <= 0.01,
        "nyquist_condition": nycond_res <= 1e-8,
        "popov_leftmost_matches_beta0":
            math.isfinite(leftmost) and abs(leftmost + 1.0 / beta0) <= 2e-3,
    }
    report = {
        "values": values,
        "checks": checks,
        "all_checks_pass": all(checks.values()),
        "generated": sorted(generated),
        "mode": mode,
    }

    flat = {"mode": mode, "all_checks_pass": report["all_checks_pass"]}
    flat.update({f"value_{k}": v for k, v in values.items()})
    flat.update({f"check_{k}": v for k, v in checks.items()})
    write_record(outdir / REPORT_NAME, flat, fmt="json")

    if render:
        figdir = outdir / "figures"
        nloc_segments = _segments_from_rows(pieces["nyquist_nloc"])
        figures.render_nyquist(nloc_segments, beta0,
                               figdir / "nyquist_nloc.png",
                               "Nyquist image, nonlocal loop")
        figures.render_nyquist(loc_segments, beta0,
                               figdir / "nyquist_loc.png",
                               "Nyquist image, local loop")
        figures.render_popov(np.asarray(p_om), np.asarray(p_re),
                             np.asarray(p_im), beta0, q_star,
                             figdir / "popov.png")
        qs, ms = pieces["mq"]
        figures.render_mq(np.asarray(qs), np.asarray(ms), q_star, beta_popov,
                          figdir / "mq.png")
        figures.render_two_route(np.asarray(t), np.asarray(yv), np.asarray(yp),
                                 figdir / "two_route.png")
    return report
