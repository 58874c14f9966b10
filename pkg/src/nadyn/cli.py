"""Command-line surface: one analysis per invocation, JSON report out.

Every report echoes the fully resolved request -- system, parameters,
defaults, budget, and the index conventions (hitting times start at 1,
correlation lags at 0) -- so a report is interpretable on its own.

Exit codes: 0 completed analysis (INCONCLUSIVE and not-extractable
verdicts included), 2 malformed input, 3 part budget exceeded, 4 unknown
command or example name.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import (
    BudgetExceeded,
    GridMismatch,
    HorizonExceeded,
    MalformedInput,
    NotExtractable,
    NotInvariant,
    OutOfDomain,
    ScaleMismatch,
    UnknownExample,
)
from .intervals import IntervalSet, format_rational, parse_rational
from .mixing import (
    DEFAULT_THRESHOLDS,
    ExceptionalSetReport,
    IndexSet,
    cesaro_deviation,
    correlation_series,
    density_stats,
    extract_exceptional_set,
)
from .montecarlo import FloatSchedule, SampleConfig, mc_correlation, mc_separation
from .plmaps import (
    BUNDLED_EXAMPLE_NAMES,
    PropagationBudget,
    Schedule,
    bundled_example,
    prefix_image,
    prefix_preimage,
)
from .sysio import (
    parse_mc_system_file,
    parse_set_argument,
    parse_system_file,
    schedule_to_dict,
)
from .topology import (
    SensitivityCertificate,
    SensitivityFailure,
    Verdict,
    certified_fail_verdict,
    hitting_set,
    invariant_set_certificate,
    mixing_verdict,
    open_grid,
    sensitivity_certificate,
    sensitivity_constant,
    transitivity_verdict,
    weakmix_verdict,
)

COMMANDS = (
    "eval",
    "image",
    "preimage",
    "correlate",
    "cesaro",
    "density",
    "kvn",
    "hitting",
    "transitivity",
    "weakmix",
    "mixing",
    "sensitivity",
    "mc",
    "verify",
)

INDEX_BASE = {"hitting": 1, "correlation": 0}
DEFAULT_MAX_PARTS = 1 << 20
BUDGET_ENV = "NADYN_BUDGET"


def _resolve_budget(flag_value: int | None) -> tuple[PropagationBudget, str]:
    if flag_value is not None:
        return PropagationBudget(flag_value), "flag"
    env = os.environ.get(BUDGET_ENV)
    if env is not None:
        try:
            return PropagationBudget(int(env)), "env"
        except ValueError:
            raise MalformedInput(f"{BUDGET_ENV} must be a positive integer, got {env!r}")
    return PropagationBudget(DEFAULT_MAX_PARTS), "default"


def _load_schedule(source: str) -> tuple[Schedule, dict]:
    if source in BUNDLED_EXAMPLE_NAMES:
        sch = bundled_example(source)
        return sch, {"source": source, "definition": schedule_to_dict(sch)}
    if os.path.exists(source):
        sch = parse_system_file(source)
        return sch, {"source": source, "definition": schedule_to_dict(sch)}
    if source.endswith(".json"):
        raise MalformedInput(f"system file {source!r} does not exist")
    raise UnknownExample(
        f"unknown system {source!r}: not a bundled example "
        f"{list(BUNDLED_EXAMPLE_NAMES)} and no such file"
    )


def _maybe_at_file(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return text


def _rational_list(text: str) -> list[Fraction]:
    try:
        loaded = json.loads(_maybe_at_file(text))
    except json.JSONDecodeError as e:
        raise MalformedInput(f"expected a JSON list: {e}")
    if not isinstance(loaded, list):
        raise MalformedInput("expected a JSON list")
    out = []
    for item in loaded:
        if isinstance(item, bool) or isinstance(item, float):
            raise MalformedInput(
                f"{item!r} is not exact; use integers or rational strings"
            )
        out.append(parse_rational(str(item)))
    return out


def _int_list(text: str) -> list[int]:
    try:
        loaded = json.loads(_maybe_at_file(text))
    except json.JSONDecodeError as e:
        raise MalformedInput(f"expected a JSON list of integers: {e}")
    if not isinstance(loaded, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in loaded
    ):
        raise MalformedInput("expected a JSON list of integers")
    return loaded


def _set_json(s: IntervalSet) -> list[str]:
    return s.to_json()


def _fr(q: Fraction) -> str:
    return format_rational(q)


def _verdict_json(v: Verdict, sch: Schedule) -> dict:
    doc = {
        "property": v.property_name,
        "kind": v.kind,
        "grid": _fr(v.grid) if v.grid is not None else None,
        "horizon": v.horizon,
    }
    if v.tail is not None:
        doc["tail"] = v.tail
    if v.grid is not None:
        cells = [str(c.parts[0]) for c in open_grid(sch.domain, v.grid)]

        def pair(p):
            return [cells[p[0]], cells[p[1]]]

        if v.property_name == "weak_mixing":
            doc["witnesses"] = [
                {"pair1": pair(w[0][0]), "pair2": pair(w[0][1]), "n": w[1]}
                for w in v.witnesses
            ]
            doc["unhit"] = [
                {"pair1": pair(p[0]), "pair2": pair(p[1])} for p in v.unhit
            ]
        else:
            key = "tail_start" if v.property_name == "mixing" else "n"
            doc["witnesses"] = [
                {"U": cells[w[0][0]], "V": cells[w[0][1]], key: w[1]}
                for w in v.witnesses
            ]
            doc["unhit"] = [{"U": cells[p[0]], "V": cells[p[1]]} for p in v.unhit]
    if v.certificate is not None:
        c = v.certificate
        doc["certificate"] = {
            "W": _set_json(c.w),
            "U": _set_json(c.u),
            "V": _set_json(c.v),
            "checked_maps": c.checked_maps,
        }
    return doc


def _sensitivity_json(res: SensitivityCertificate | SensitivityFailure) -> dict:
    doc = {
        "kind": "CERTIFICATE" if res.passed else "FAILURE_REPORT",
        "passed": res.passed,
        "delta": _fr(res.delta),
        "scale": _fr(res.scale),
        "horizon": res.horizon,
    }
    if res.passed:
        doc["per_cell"] = [
            {"cell": str(w.cell), "n": w.n, "diameter": _fr(w.diameter)}
            for w in res.per_cell
        ]
    else:
        doc["failing_cells"] = [
            {"cell": str(f.cell), "max_diameter": _fr(f.max_diameter)}
            for f in res.failures
        ]
    return doc


def _extraction_json(rep: ExceptionalSetReport) -> dict:
    return {
        "kind": "EXTRACTED",
        "horizon": rep.horizon,
        "thresholds": [_fr(t) for t in rep.thresholds],
        "breakpoints": list(rep.breakpoints),
        "exceptional_set": list(rep.exceptional.members),
        "density": {"upper": _fr(rep.density.upper), "lower": _fr(rep.density.lower)},
        "tail_density": {
            "upper": _fr(rep.tail_density.upper),
            "lower": _fr(rep.tail_density.lower),
        },
        "tail_start": rep.tail_start,
        "tail_max": _fr(rep.tail_max),
        "off_exceptional_max": _fr(rep.off_max),
        "sup_value": _fr(rep.sup_value),
        "cesaro_average": _fr(rep.cesaro),
    }


# ---------------------------------------------------------------------------
# command handlers -- each returns (report_dict, exit_code)
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    x = parse_rational(args.x)
    value = x
    for i in range(args.n):
        value = sch.map_at(i).eval_point(value)
    return {
        "system": sysdoc,
        "parameters": {"x": _fr(x), "n": args.n},
        "result": {"value": _fr(value)},
    }


def _cmd_image(args, budget: PropagationBudget) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    s = parse_set_argument(args.set)
    out = prefix_image(sch, s, args.n, budget)
    return {
        "system": sysdoc,
        "parameters": {"set": _set_json(s), "n": args.n},
        "result": {"image": _set_json(out), "measure": _fr(out.measure())},
    }


def _cmd_preimage(args, budget: PropagationBudget) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    s = parse_set_argument(args.set)
    out = prefix_preimage(sch, s, args.n, budget)
    return {
        "system": sysdoc,
        "parameters": {"set": _set_json(s), "n": args.n},
        "result": {"preimage": _set_json(out), "measure": _fr(out.measure())},
    }


def _series_from_args(args, budget: PropagationBudget):
    sch, sysdoc = _load_schedule(args.system)
    a = parse_set_argument(args.A)
    b = parse_set_argument(args.B)
    series = correlation_series(sch, a, b, args.N, budget)
    params = {"A": _set_json(a), "B": _set_json(b), "N": args.N}
    return sch, sysdoc, series, params


def _series_json(series) -> dict:
    return {
        "values": [_fr(v) for v in series.values],
        "product": _fr(series.product),
        "deviations": [_fr(d) for d in series.deviations],
        "mu_A": _fr(series.mu_a),
        "mu_B": _fr(series.mu_b),
        "raw_values": [_fr(v) for v in series.raw_values],
        "domain_measure": _fr(series.domain_measure),
    }


def _cmd_correlate(args, budget: PropagationBudget) -> dict:
    _, sysdoc, series, params = _series_from_args(args, budget)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "c_i", "deviation_i"])
            for i, (v, d) in enumerate(zip(series.values, series.deviations)):
                writer.writerow([i, _fr(v), _fr(d)])
        params["csv"] = args.csv
    return {"system": sysdoc, "parameters": params, "result": _series_json(series)}


def _cmd_cesaro(args, budget: PropagationBudget) -> dict:
    _, sysdoc, series, params = _series_from_args(args, budget)
    n = args.n if args.n is not None else args.N
    params["n"] = n
    value = cesaro_deviation(series, n)
    return {
        "system": sysdoc,
        "parameters": params,
        "result": {
            "cesaro_deviation": _fr(value),
            "prefix_averages": [
                _fr(cesaro_deviation(series, k)) for k in range(1, series.horizon + 1)
            ],
            "series": _series_json(series),
        },
    }


def _cmd_density(args) -> dict:
    members = _int_list(args.members)
    s = IndexSet(args.horizon, tuple(members))
    stats = density_stats(s, args.tail_start)
    return {
        "parameters": {
            "horizon": args.horizon,
            "tail_start": args.tail_start,
            "member_count": len(s.members),
        },
        "result": {
            "upper": _fr(stats.upper),
            "lower": _fr(stats.lower),
            "note": "finite-horizon proxies over n in [tail_start, horizon], not limits",
        },
    }


def _cmd_kvn(args, budget: PropagationBudget) -> dict:
    thresholds = (
        tuple(_rational_list(args.thresholds))
        if args.thresholds
        else DEFAULT_THRESHOLDS
    )
    params: dict = {"thresholds": [_fr(t) for t in thresholds]}
    doc: dict = {"parameters": params}
    if args.values is not None:
        values = _rational_list(args.values)
        params["values_count"] = len(values)
    elif args.system is not None:
        if args.A is None or args.B is None or args.N is None:
            raise MalformedInput("kvn with --system needs --A, --B and --N")
        sch, sysdoc, series, sparams = _series_from_args(args, budget)
        values = list(series.deviations)
        params.update(sparams)
        doc["system"] = sysdoc
    else:
        raise MalformedInput("kvn needs either --values or --system/--A/--B/--N")
    try:
        rep = extract_exceptional_set(values, thresholds)
    except NotExtractable as e:
        doc["result"] = {
            "kind": "NOT_EXTRACTABLE",
            "detail": str(e),
            "threshold_index": e.threshold_index,
        }
        return doc
    doc["result"] = _extraction_json(rep)
    return doc


def _cmd_hitting(args, budget: PropagationBudget) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    u = parse_set_argument(args.U)
    v = parse_set_argument(args.V)
    hs = hitting_set(sch, u, v, args.H, budget)
    return {
        "system": sysdoc,
        "parameters": {"U": _set_json(u), "V": _set_json(v), "H": args.H},
        "result": {"hitting_times": list(hs.members), "empty": hs.is_empty},
    }


def _cmd_verdict(args, budget: PropagationBudget, which: str) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    g = parse_rational(args.grid)
    fn = {
        "transitivity": transitivity_verdict,
        "weakmix": weakmix_verdict,
        "mixing": mixing_verdict,
    }[which]
    verdict = fn(sch, g, args.H, budget)
    return {
        "system": sysdoc,
        "parameters": {"grid": _fr(g), "H": args.H},
        "result": _verdict_json(verdict, sch),
    }


def _cmd_sensitivity(args, budget: PropagationBudget) -> dict:
    sch, sysdoc = _load_schedule(args.system)
    delta = parse_rational(args.delta)
    scale = parse_rational(args.scale)
    res = sensitivity_certificate(sch, delta, scale, args.H, budget)
    return {
        "system": sysdoc,
        "parameters": {"delta": _fr(delta), "scale": _fr(scale), "H": args.H},
        "result": _sensitivity_json(res),
    }


def _cmd_mc(args) -> dict:
    if args.system in BUNDLED_EXAMPLE_NAMES:
        sch = bundled_example(args.system)
        fs = FloatSchedule.from_schedule(sch)
        sysdoc = {"source": args.system, "estimate_only": False}
    elif os.path.exists(args.system):
        fs = parse_mc_system_file(args.system)
        sysdoc = {"source": args.system, "estimate_only": fs.estimate_only}
    elif args.system.endswith(".json"):
        raise MalformedInput(f"system file {args.system!r} does not exist")
    else:
        raise UnknownExample(f"unknown system {args.system!r}")
    cfg = SampleConfig(sample_count=args.samples, seed=args.seed)
    params = {"n": args.n, "samples": args.samples, "seed": args.seed}
    if args.x is not None:
        if args.epsilon is None:
            raise MalformedInput("separation mode needs both --x and --epsilon")
        value = mc_separation(fs, float(args.x), float(args.epsilon), args.n, cfg)
        params.update({"mode": "separation", "x": args.x, "epsilon": args.epsilon})
        result = {"max_separation": value}
    else:
        if args.A is None or args.B is None:
            raise MalformedInput("correlation mode needs --A and --B")
        a = parse_set_argument(args.A)
        b = parse_set_argument(args.B)
        estimate, stderr = mc_correlation(fs, a, b, args.n, cfg)
        params.update({"mode": "correlation", "A": _set_json(a), "B": _set_json(b)})
        result = {"estimate": estimate, "stderr": stderr}
    result["estimate_only"] = sysdoc.get("estimate_only", False)
    return {"system": sysdoc, "parameters": params, "result": result}


def _cmd_verify(args, budget: PropagationBudget) -> tuple[dict, int]:
    name = args.name
    if name == "example31":
        sch = bundled_example("example31")
        u = IntervalSet.parse("(0,1)")
        v = IntervalSet.parse("(1,3/2)")
        w = IntervalSet.parse("[0,1]")
        horizon = 30
        checks = []
        ok = True
        try:
            cert = invariant_set_certificate(sch, u, v, w)
            hs = hitting_set(sch, u, v, horizon, budget)
            cert_ok = hs.is_empty
            verdict = certified_fail_verdict("transitivity", cert, horizon)
            checks.append(
                {
                    "check": "invariant_set_certificate",
                    "passed": cert_ok,
                    "verdict": _verdict_json(verdict, sch),
                    "hitting_times_up_to_horizon": list(hs.members),
                }
            )
            ok &= cert_ok
        except NotInvariant as e:
            checks.append(
                {"check": "invariant_set_certificate", "passed": False, "detail": str(e)}
            )
            ok = False
        res = sensitivity_certificate(sch, Fraction(1, 4), Fraction(1, 64), horizon, budget)
        checks.append(
            {"check": "sensitivity_certificate", "passed": res.passed,
             "report": _sensitivity_json(res)}
        )
        ok &= res.passed
        doc = {
            "system": {"source": "example31", "definition": schedule_to_dict(sch)},
            "parameters": {
                "U": _set_json(u), "V": _set_json(v), "W": _set_json(w),
                "delta": "1/4", "scale": "1/64", "H": horizon,
            },
            "result": {"passed": ok, "checks": checks},
        }
        return doc, 0 if ok else 1
    if name == "tent":
        # weak mixing witnessed at a finite grid forces a working sensitivity
        # constant out of any two reference points: check both sides.
        sch = bundled_example("tent")
        delta = sensitivity_constant(0, 1)
        wx = weakmix_verdict(sch, Fraction(1, 16), 16, budget)
        res = sensitivity_certificate(sch, delta, Fraction(1, 16), 16, budget)
        ok = wx.witnessed and res.passed
        doc = {
            "system": {"source": "tent", "definition": schedule_to_dict(sch)},
            "parameters": {
                "grid": "1/16", "H": 16,
                "delta": _fr(delta), "scale": "1/16",
                "reference_points": ["0", "1"],
            },
            "result": {
                "passed": ok,
                "checks": [
                    {"check": "weakmix_verdict", "passed": wx.witnessed,
                     "verdict": {"kind": wx.kind, "grid": "1/16", "horizon": 16}},
                    {"check": "sensitivity_certificate", "passed": res.passed,
                     "report": _sensitivity_json(res)},
                ],
            },
        }
        return doc, 0 if ok else 1
    raise UnknownExample(
        f"no bundled verification scenario named {name!r}; choose example31 or tent"
    )


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser(command: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=f"nadyn {command}")
    add = p.add_argument
    if command in ("eval", "image", "preimage", "correlate", "cesaro", "hitting",
                   "transitivity", "weakmix", "mixing", "sensitivity", "mc"):
        add("--system", required=True,
            help="bundled example name or system JSON file path")
    if command == "kvn":
        add("--system", help="system for deviation-sequence extraction")
        add("--values", help="JSON list of rational strings, or @file")
        add("--thresholds", help="JSON list of decreasing rational strings")
        add("--A"), add("--B"), add("--N", type=int)
    if command == "eval":
        add("--x", required=True), add("--n", type=int, default=1)
    if command in ("image", "preimage"):
        add("--set", required=True), add("--n", type=int, required=True)
    if command in ("correlate", "cesaro"):
        add("--A", required=True), add("--B", required=True)
        add("--N", type=int, required=True)
    if command == "correlate":
        add("--csv", help="write the series to this CSV file")
    if command == "cesaro":
        add("--n", type=int, default=None, help="average length (default N)")
    if command == "density":
        add("--members", required=True, help="JSON list of integers, or @file")
        add("--horizon", type=int, required=True)
        add("--tail-start", dest="tail_start", type=int, required=True)
    if command == "hitting":
        add("--U", required=True), add("--V", required=True)
        add("--H", type=int, required=True)
    if command in ("transitivity", "weakmix", "mixing"):
        add("--grid", required=True), add("--H", type=int, required=True)
    if command == "sensitivity":
        add("--delta", required=True), add("--scale", required=True)
        add("--H", type=int, required=True)
    if command == "mc":
        add("--A"), add("--B")
        add("--x", help="separation mode: orbit start point (float)")
        add("--epsilon", help="separation mode: neighborhood radius (float)")
        add("--n", type=int, required=True)
        add("--samples", type=int, default=100_000)
        add("--seed", type=int, default=0)
    if command == "verify":
        add("name", help="bundled scenario: example31 or tent")
    add("--budget", type=int, default=None,
        help=f"part budget (default {DEFAULT_MAX_PARTS}; env {BUDGET_ENV} overrides)")
    add("--out", default=None, help="write the JSON report here instead of stdout")
    return p


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(f"nadyn {__version__} -- exact checks for time-varying interval maps")
        print(f"usage: nadyn {{{','.join(COMMANDS)}}} [options]")
        print("run `nadyn <command> --help` for the command's options")
        return 0
    command, rest = argv[0], argv[1:]
    if command not in COMMANDS:
        print(f"unknown command {command!r}; choose from {list(COMMANDS)}", file=sys.stderr)
        return 4
    parser = _build_parser(command)
    args = parser.parse_args(rest)
    try:
        budget, budget_source = _resolve_budget(args.budget)
        exit_code = 0
        if command == "eval":
            doc = _cmd_eval(args)
        elif command == "image":
            doc = _cmd_image(args, budget)
        elif command == "preimage":
            doc = _cmd_preimage(args, budget)
        elif command == "correlate":
            doc = _cmd_correlate(args, budget)
        elif command == "cesaro":
            doc = _cmd_cesaro(args, budget)
        elif command == "density":
            doc = _cmd_density(args)
        elif command == "kvn":
            doc = _cmd_kvn(args, budget)
        elif command == "hitting":
            doc = _cmd_hitting(args, budget)
        elif command in ("transitivity", "weakmix", "mixing"):
            doc = _cmd_verdict(args, budget, command)
        elif command == "sensitivity":
            doc = _cmd_sensitivity(args, budget)
        elif command == "mc":
            doc = _cmd_mc(args)
        else:
            doc, exit_code = _cmd_verify(args, budget)
    except (MalformedInput, OutOfDomain, GridMismatch, ScaleMismatch,
            HorizonExceeded, NotInvariant, ValueError) as e:
        _diagnostic(command, "malformed_input", e)
        return 2
    except BudgetExceeded as e:
        _diagnostic(command, "budget_exceeded", e,
                    extra={"step": e.step, "parts": e.parts, "max_parts": e.max_parts})
        return 3
    except UnknownExample as e:
        _diagnostic(command, "unknown_example", e)
        return 4
    doc = {
        "command": command,
        "tool_version": __version__,
        "index_base": INDEX_BASE,
        "budget": {"max_parts": budget.max_parts, "source": budget_source},
        **doc,
    }
    _emit(doc, args.out)
    return exit_code


def _diagnostic(command: str, kind: str, err: Exception, extra: dict | None = None) -> None:
    doc = {"command": command, "error": kind, "detail": str(err)}
    if extra:
        doc.update(extra)
    print(json.dumps(doc, indent=2), file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())
