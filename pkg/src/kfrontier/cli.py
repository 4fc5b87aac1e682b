"""Batch command-line front end.

Subcommands: value, benefit, choose, cutoffs, simulate, moonshot, funding.
Curve outputs are CSV with a header row and one leading comment line that
records the full parameterization (so re-running a command byte-reproduces
its output); single results are JSON; simulation traces are JSON lines with
a final summary line.  Numbers are printed with 17 significant digits, which
round-trips doubles exactly.  Where a subcommand emits curves, ``--figure
PATH`` additionally renders the same data with matplotlib.

Exit codes: 0 success, 1 computational failure (no convergence),
2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, IO

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10: JSON config only
    tomllib = None

from . import __version__
from ._solve import ConvergenceError
from .evolution import run, trace_to_jsonl
from .funding import (
    FundingParams,
    optimize_forward,
    optimize_myopic,
    researcher_with_rewards,
    scheme_on_budget,
)
from .knowledge import load_knowledge_json, make_knowledge
from .moonshot import (
    MODE_CHAIN,
    MODE_CLOSED_FORM,
    chain_npv,
    critical_delta,
    moonshot_benefit,
    optimal_moonshot,
    sixq_closed_form,
)
from .researcher import EconomyParams, opt_choice, opt_deepen, opt_expand, researcher_cutoffs
from .valuation import areas, benefit, benefit_cutoffs, value_of_knowledge

_G17 = "{:.17g}"


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _G17.format(v)
    return str(v)


def _write_csv(fp: IO[str], command: str, params: dict[str, Any],
               header: list[str], rows: list[list[Any]]) -> None:
    stamp = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))
    fp.write(f"# kfrontier v{__version__} | {command} | {stamp}\n")
    fp.write(",".join(header) + "\n")
    for row in rows:
        fp.write(",".join(_fmt(v) for v in row) + "\n")


def _emit_json(fp: IO[str], payload: dict[str, Any]) -> None:
    fp.write(json.dumps(payload, sort_keys=True) + "\n")


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    if path.endswith(".toml"):
        if tomllib is None:
            raise ValueError("TOML config needs Python 3.11+; use a JSON config instead")
        with open(path, "rb") as fp:
            return tomllib.load(fp)
    with open(path) as fp:
        data = json.load(fp)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a table of parameter defaults")
    return data


def _resolve(args: argparse.Namespace, config: dict[str, Any], key: str, default: Any) -> Any:
    """Flag value if given, else config value, else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _float_or_inf(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _load_knowledge(path: str | None):
    if path is None:
        return make_knowledge([(0.0, 0.0)])
    with open(path) as fp:
        return load_knowledge_json(fp)


def _grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


# ----------------------------------------------------------------- commands


def _cmd_value(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    F = _load_knowledge(args.knowledge_file)
    rows: list[list[Any]] = []
    for ar in areas(F):
        val = q / 2.0 if ar.kind != "bounded" else None
        if ar.kind == "bounded":
            from .valuation import area_value

            val = area_value(ar.length, q)
        rows.append(["area", ar.kind, ar.lo, ar.hi, ar.length, val])
    total = value_of_knowledge(F, q)
    rows.append(["total", "", "", "", "", total])
    out, close = _open_out(args.out)
    try:
        _write_csv(out, "value", {"q": q, "knowledge_file": args.knowledge_file or "-"},
                   ["component", "kind", "lo", "hi", "length", "value"], rows)
    finally:
        if close:
            out.close()
    return 0


def _cmd_benefit(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    lengths = [_float_or_inf(x) for x in (args.X or ["inf"])]
    n = _resolve(args, config, "n", 401)
    d_max = args.d_max
    rows = []
    finite = [X for X in lengths if math.isfinite(X)]
    top = d_max if d_max is not None else (max([12.0 * q] + [0.5 * X for X in finite]))
    ds = _grid(0.0, top, n)
    header = ["d"] + [f"V_X={_fmt(X)}" for X in lengths]
    for d in ds:
        row: list[Any] = [d]
        for X in lengths:
            if math.isfinite(X) and d > 0.5 * X:
                row.append("")
            else:
                row.append(benefit(d, X, q))
        rows.append(row)
    out, close = _open_out(args.out)
    try:
        _write_csv(out, "benefit", {"q": q, "X": "+".join(map(_fmt, lengths)), "n": n},
                   header, rows)
    finally:
        if close:
            out.close()
    if args.figure:
        # Finite-X curves stop at d = X/2, so each series carries its own x.
        from .report import render_segments

        segments = {}
        for j, X in enumerate(lengths):
            pts = [(r[0], r[j + 1]) for r in rows if r[j + 1] != ""]
            segments[f"X={_fmt(X)}"] = ([p[0] for p in pts], [p[1] for p in pts])
        render_segments(args.figure, segments, xlabel="distance d",
                        ylabel="discovery benefit")
    return 0


def _cmd_choose(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    eta = _resolve(args, config, "eta", 1.0)
    side = _resolve(args, config, "side", "right")
    params = EconomyParams(q=q, eta=eta)
    F = _load_knowledge(args.knowledge_file)
    ch = opt_choice(F, params, side=side)
    payload = {
        "kind": ch.kind,
        "area_index": ch.area_index,
        "x": ch.x,
        "d": ch.d,
        "rho": ch.rho,
        "payoff": ch.payoff,
        "X": "inf" if math.isinf(ch.X) else ch.X,
        "q": q,
        "eta": eta,
    }
    _emit_json(sys.stdout, payload)
    if args.curves:
        x_max = _resolve(args, config, "x_max", 12.0 * q)
        n = _resolve(args, config, "n", 201)
        xs = _grid(2.0 * q * 0.1, x_max, n)
        exp = opt_expand(params) if eta > 0 else None
        rows = []
        for X in xs:
            c = opt_deepen(X, params)
            rows.append([X, c.payoff, c.d, c.rho])
        with open(args.curves, "w") as fp:
            _write_csv(fp, "choose-curves", {"q": q, "eta": eta, "n": n, "x_max": x_max},
                       ["X", "payoff", "d", "rho"], rows)
        if args.figure:
            from .report import render_panels

            refs = (exp.payoff, exp.d, exp.rho) if exp is not None else (None, None, None)
            render_panels(
                args.figure,
                xs,
                [
                    ("payoff", [r[1] for r in rows], refs[0]),
                    ("distance d", [r[2] for r in rows], refs[1]),
                    ("output rho", [r[3] for r in rows], refs[2]),
                ],
                xlabel="area length X",
            )
    return 0


def _cmd_cutoffs(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    eta = _resolve(args, config, "eta", 1.0)
    cut0 = benefit_cutoffs(q)
    payload: dict[str, Any] = {
        "q": q,
        "x_hat0": cut0.x_hat0,
        "x_check0": cut0.x_check0,
        "x_tilde0": cut0.x_tilde0,
        "d0_inf": cut0.d0_inf,
        "v_inf_max": cut0.v_inf_max,
    }
    if eta > 0:
        params = EconomyParams(q=q, eta=eta)
        cuts = researcher_cutoffs(params)
        exp = opt_expand(params)
        payload.update(
            eta=eta, x_hat=cuts.x_hat, x_dot=cuts.x_dot, x_check=cuts.x_check,
            x_tilde=cuts.x_tilde, d_inf=exp.d, rho_inf=exp.rho,
        )
    _emit_json(sys.stdout, payload)
    return 0


def _cmd_simulate(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    eta = _resolve(args, config, "eta", 1.0)
    seed = _resolve(args, config, "seed", 0)
    side = _resolve(args, config, "side", "right")
    if args.periods is None or args.periods < 1:
        raise ValueError("--periods must be a positive integer")
    params = EconomyParams(q=q, eta=eta)
    F = _load_knowledge(args.knowledge_file)
    trace = run(F, params, args.periods, seed=seed, side=side,
                force_success=args.force_success)
    summary = {
        "summary": True,
        "seed": seed,
        "periods": len(trace.periods),
        "halted_at": trace.halted_at,
        "final_v": trace.periods[-1].value_after if trace.periods else None,
    }
    text = trace_to_jsonl(trace)
    out, close = _open_out(args.out)
    try:
        out.write(text)
        if close:
            _emit_json(sys.stdout, summary)
        else:
            _emit_json(out, summary)
    finally:
        if close:
            out.close()
    if args.figure:
        from .report import render_lines

        ts = [p.t for p in trace.periods]
        vs = [p.value_after for p in trace.periods]
        render_lines(args.figure, ts, {"value of knowledge": vs},
                     xlabel="period", ylabel="value", title=f"seed={seed}")
    return 0


def _cmd_moonshot(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    eta = _resolve(args, config, "eta", 1.0)
    delta = _resolve(args, config, "delta", 0.9)
    mode = _resolve(args, config, "mode", MODE_CHAIN)
    horizon = _resolve(args, config, "horizon", None)
    report = args.report
    params = EconomyParams(q=q, eta=eta)
    if report == "stats":
        if mode == MODE_CLOSED_FORM:
            cf = sixq_closed_form(eta, q)
            payload = {
                "mode": mode, "eta": eta, "q": q,
                "d_inf": cf.d_inf, "rho_inf": cf.rho_inf, "rho_6q": cf.rho_6q,
                "loss": cf.loss, "gain_rate": cf.gain_rate,
                "benefit_delta1": cf.benefit_delta1,
                "benefit_at_delta": cf.benefit(delta), "delta": delta,
            }
        else:
            a = moonshot_benefit(6.0 * q, params, delta, mode=mode, horizon=horizon)
            payload = {
                "mode": mode, "eta": eta, "q": q, "delta": delta,
                "horizon": horizon,
                "x_hat": a.x_hat, "npv_moonshot": a.npv_moonshot,
                "npv_myopic": a.npv_myopic, "benefit": a.benefit,
                "critical_delta": critical_delta(eta, q, mode=mode, horizon=horizon),
            }
        _emit_json(sys.stdout, payload)
        return 0
    if report == "optimal":
        a = optimal_moonshot(delta, params, args.x_max, horizon=horizon)
        _emit_json(sys.stdout, {
            "mode": a.mode, "eta": eta, "q": q, "delta": delta, "x_hat": a.x_hat,
            "npv_moonshot": a.npv_moonshot, "npv_myopic": a.npv_myopic,
            "benefit": a.benefit,
        })
        return 0
    n = _resolve(args, config, "n", 101)
    rows: list[list[Any]] = []
    hz = {"horizon": horizon if horizon is not None else "inf"}
    if report == "xhat":
        x_max = args.x_max if args.x_max is not None else 12.0 * q
        header = ["x_hat", "npv", "benefit"]
        stamp = {"q": q, "eta": eta, "delta": delta, "n": n, "x_max": x_max, **hz}
        for x in _grid(3.0 * q, x_max, n):
            a = moonshot_benefit(x, params, delta, mode=MODE_CHAIN, horizon=horizon)
            rows.append([x, a.npv_moonshot, a.benefit])
        xcol, ycol = 0, 2
    elif report == "eta":
        lo, hi = args.eta_min, args.eta_max
        header = ["eta", "benefit"]
        stamp = {"q": q, "delta": delta, "n": n, "eta_min": lo, "eta_max": hi,
                 "mode": mode, **hz}
        ratio = (hi / lo) ** (1.0 / (n - 1))
        for i in range(n):
            e = lo * ratio**i
            a = moonshot_benefit(6.0 * q, EconomyParams(q=q, eta=e), delta,
                                 mode=mode, horizon=horizon)
            rows.append([e, a.benefit])
        xcol, ycol = 0, 1
    elif report == "delta":
        header = ["delta", "benefit"]
        stamp = {"q": q, "eta": eta, "n": n, "mode": mode, **hz}
        for dd in _grid(0.0, 1.0 - 1e-6, n):
            a = moonshot_benefit(6.0 * q, params, dd, mode=mode, horizon=horizon)
            rows.append([dd, a.benefit])
        xcol, ycol = 0, 1
    else:
        raise ValueError(f"unknown report {report!r}")
    out, close = _open_out(args.out)
    try:
        _write_csv(out, f"moonshot-{report}", stamp, header, rows)
    finally:
        if close:
            out.close()
    if args.figure:
        from .report import render_lines

        render_lines(args.figure, [r[xcol] for r in rows],
                     {header[ycol]: [r[ycol] for r in rows]},
                     xlabel=header[xcol], ylabel=header[ycol], hline=0.0)
    return 0


def _cmd_funding(args: argparse.Namespace, config: dict[str, Any]) -> int:
    q = _resolve(args, config, "q", 1.0)
    fp = FundingParams(
        K=_resolve(args, config, "K", 3.0),
        kappa=_resolve(args, config, "kappa", 16.0),
        s=_resolve(args, config, "s", 6.0),
        eta0=_resolve(args, config, "eta0", 1.0),
        reward_tech=_resolve(args, config, "tech", "linear"),
    )
    delta = args.delta
    n = _resolve(args, config, "n", 101)
    rows = []
    for zeta in _grid(0.0, fp.K, n):
        sch = scheme_on_budget(fp, zeta)
        pt = researcher_with_rewards(sch, fp, q)
        rows.append([zeta, sch.h, sch.eta, pt.rho, pt.d, pt.at_kink,
                     pt.rho * benefit(pt.d, math.inf, q)])
    my = optimize_myopic(fp, q)
    payload: dict[str, Any] = {
        "myopic": {
            "kind": my.kind, "zeta": my.scheme.zeta, "h": my.scheme.h,
            "eta": my.scheme.eta, "d": my.point.d, "rho": my.point.rho,
            "at_kink": my.point.at_kink, "objective": my.objective,
        }
    }
    markers = {"myopic optimum": (my.point.rho, my.point.d)}
    fwd = None
    if delta is not None:
        fwd = optimize_forward(fp, q, delta)
        payload["forward"] = {
            "delta": delta, "kind": fwd.kind, "zeta": fwd.scheme.zeta,
            "h": fwd.scheme.h, "eta": fwd.scheme.eta, "d": fwd.point.d,
            "rho": fwd.point.rho, "at_kink": fwd.point.at_kink,
            "objective": fwd.objective, "benefit_vs_myopic_first": fwd.assessment.benefit,
        }
        markers["forward optimum"] = (fwd.point.rho, fwd.point.d)
    _emit_json(sys.stdout, payload)
    if args.indifference:
        from kfrontier.knowledge import make_knowledge
        from kfrontier.moonshot import chain_npv
        from kfrontier.researcher import EconomyParams

        base = make_knowledge([(0.0, 0.0)])
        v1 = q
        d_grid = _grid(0.05 * q, fp.s, n)
        irows: list[list[Any]] = []
        for d in d_grid:
            row: list[Any] = [d]
            rho_my = my.objective / benefit(d, math.inf, q)
            row.append(rho_my if 0.0 < rho_my <= 1.0 else "")
            if fwd is not None:
                guar = chain_npv(base, d, EconomyParams(q=q, eta=fp.eta0), delta)
                denom = v1 + delta * fwd.objective - guar
                rho_fw = (v1 - fwd.objective * (1.0 - delta)) / denom if denom != 0 else math.nan
                row.append(rho_fw if 0.0 < rho_fw <= 1.0 else "")
            irows.append(row)
        iheader = ["d", "rho_iso_myopic"] + (["rho_iso_forward"] if fwd is not None else [])
        with open(args.indifference, "w") as f:
            _write_csv(
                f, "funding-indifference",
                {"K": fp.K, "kappa": fp.kappa, "s": fp.s, "eta0": fp.eta0, "q": q,
                 "delta": delta if delta is not None else "none", "n": n},
                iheader, irows,
            )
    if args.out:
        with open(args.out, "w") as f:
            _write_csv(
                f, "funding",
                {"K": fp.K, "kappa": fp.kappa, "s": fp.s, "eta0": fp.eta0,
                 "tech": fp.reward_tech, "q": q, "n": n},
                ["zeta", "h", "eta", "rho", "d", "at_kink", "objective_myopic"], rows,
            )
    if args.figure:
        from .report import render_frontier

        render_frontier(args.figure, [r[3] for r in rows], [r[4] for r in rows],
                        markers, title="budget line in (output, novelty) space")
    return 0


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kfrontier", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="JSON or TOML file of parameter defaults")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--q", type=float, default=None, help="error tolerance (default 1)")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        return sp

    sp = add("value", help="value of a knowledge set, per area and total")
    sp.add_argument("--knowledge-file", required=True)

    sp = add("benefit", help="discovery-benefit curves V(d; X)")
    sp.add_argument("--X", action="append", help="area length (number or 'inf'); repeatable")
    sp.add_argument("--d-max", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--figure", default=None)

    sp = add("choose", help="researcher's optimal plan for a knowledge set")
    sp.add_argument("--knowledge-file", default=None)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--side", choices=["right", "left"], default=None)
    sp.add_argument("--curves", default=None,
                    help="also dump payoff/d/rho versus area length to this CSV")
    sp.add_argument("--x-max", dest="x_max", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--figure", default=None)

    sp = add("cutoffs", help="cutoff area lengths (costless and cost-weighted)")
    sp.add_argument("--eta", type=float, default=None)

    sp = add("simulate", help="sequential research simulation (JSONL trace)")
    sp.add_argument("--knowledge-file", default=None)
    sp.add_argument("--periods", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--side", choices=["right", "left"], default=None)
    sp.add_argument("--force-success", action="store_true")
    sp.add_argument("--figure", default=None)

    sp = add("moonshot", help="discounted moonshot-versus-myopic comparisons")
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--delta", type=float, default=None)
    sp.add_argument("--horizon", type=int, default=None,
                    help="truncate the value stream after this many periods")
    sp.add_argument("--mode", choices=[MODE_CHAIN, MODE_CLOSED_FORM], default=None)
    sp.add_argument("--report", choices=["stats", "optimal", "xhat", "eta", "delta"],
                    default="stats")
    sp.add_argument("--x-max", dest="x_max", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--eta-min", type=float, default=1e-3)
    sp.add_argument("--eta-max", type=float, default=10.0)
    sp.add_argument("--figure", default=None)

    sp = add("funding", help="budget line, frontier, and optimal funding mix")
    sp.add_argument("--K", type=float, default=None)
    sp.add_argument("--kappa", type=float, default=None)
    sp.add_argument("--s", type=float, default=None)
    sp.add_argument("--eta0", type=float, default=None)
    sp.add_argument("--tech", choices=["linear", "exponential"], default=None)
    sp.add_argument("--delta", type=float, default=None,
                    help="also compute the forward-looking optimum")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--indifference", default=None,
                    help="sample funder indifference curves through the optima to this CSV")
    sp.add_argument("--figure", default=None)

    return p


_DISPATCH = {
    "value": _cmd_value,
    "benefit": _cmd_benefit,
    "choose": _cmd_choose,
    "cutoffs": _cmd_cutoffs,
    "simulate": _cmd_simulate,
    "moonshot": _cmd_moonshot,
    "funding": _cmd_funding,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return _DISPATCH[args.command](args, config)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, RuntimeError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
