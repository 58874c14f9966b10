"""System description files and exact text forms.

The file format is JSON with bit-exact rational strings everywhere:

    {
      "domain": "[0,3/2]",
      "preamble": [],
      "cycle": [
        {"pieces": [
          {"on": "[0,1/2]", "slope": "2", "intercept": "0"},
          {"on": "(1/2,1]", "slope": "-2", "intercept": "2"},
          {"on": "(1,3/2]", "slope": "2", "intercept": "-2"}
        ]}
      ]
    }

JSON floats are rejected outright (integers are exact and pass).  The
only place floats are welcome is the ``{"quadratic": [c0, c1, c2]}`` map
form, which the Monte Carlo estimator accepts and the exact engine does
not; parsing such a file yields a float schedule flagged estimate-only.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import MalformedInput, MalformedSystemFile
from .intervals import Interval, IntervalSet, format_rational, parse_rational
from .montecarlo import FloatSchedule, QuadraticMap, _compile_plmap
from .plmaps import PLMap, Piece, Schedule


# -- text forms -------------------------------------------------------------


def parse_set_argument(text: str) -> IntervalSet:
    """Parse a CLI set argument: one interval literal or a JSON array."""
    s = text.strip()
    if s in ("", "[]", "∅", "empty"):
        return IntervalSet.empty()
    if s.startswith("["):
        try:
            loaded = json.loads(s)
        except json.JSONDecodeError:
            loaded = None
        if isinstance(loaded, list):
            return IntervalSet.parse([str(t) for t in loaded])
    return IntervalSet.parse(s)


# -- schedule <-> JSON ------------------------------------------------------


def plmap_to_dict(m: PLMap) -> dict:
    return {
        "pieces": [
            {
                "on": str(p.on),
                "slope": format_rational(p.slope),
                "intercept": format_rational(p.intercept),
            }
            for p in m.pieces
        ]
    }


def schedule_to_dict(sch: Schedule) -> dict:
    return {
        "domain": str(sch.domain),
        "preamble": [plmap_to_dict(m) for m in sch.preamble],
        "cycle": [plmap_to_dict(m) for m in sch.cycle],
    }


def _reject_floats(node: Any, path: str) -> None:
    if isinstance(node, float):
        exact = Fraction(str(node)) if node == node else None
        hint = f'; write "{format_rational(exact)}"' if exact is not None else ""
        raise MalformedSystemFile(
            f"float literal {node!r} not accepted{hint}", field=path
        )
    if isinstance(node, dict):
        for k, v in node.items():
            _reject_floats(v, f"{path}.{k}" if path else str(k))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _reject_floats(v, f"{path}[{i}]")


def _rational_field(node: dict, key: str, path: str) -> Fraction:
    if key not in node:
        raise MalformedSystemFile(f'missing field "{key}"', field=path)
    value = node[key]
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str):
        raise MalformedSystemFile(
            f'field "{key}" must be an exact rational string', field=path
        )
    try:
        return parse_rational(value)
    except MalformedInput as e:
        raise MalformedSystemFile(str(e), field=f"{path}.{key}") from None


def _plmap_from_dict(node: Any, domain: Interval, path: str) -> PLMap:
    if not isinstance(node, dict) or "pieces" not in node:
        raise MalformedSystemFile('expected an object with a "pieces" list', field=path)
    pieces_node = node["pieces"]
    if not isinstance(pieces_node, list) or not pieces_node:
        raise MalformedSystemFile('"pieces" must be a nonempty list', field=path)
    pieces = []
    for i, pnode in enumerate(pieces_node):
        ppath = f"{path}.pieces[{i}]"
        if not isinstance(pnode, dict):
            raise MalformedSystemFile("expected a piece object", field=ppath)
        if "on" not in pnode or not isinstance(pnode["on"], str):
            raise MalformedSystemFile(
                'missing interval field "on" (e.g. "[0,1/2]")', field=ppath
            )
        try:
            on = Interval.parse(pnode["on"])
        except MalformedInput as e:
            raise MalformedSystemFile(str(e), field=f"{ppath}.on") from None
        pieces.append(
            Piece(
                on,
                _rational_field(pnode, "slope", ppath),
                _rational_field(pnode, "intercept", ppath),
            )
        )
    try:
        return PLMap(domain, tuple(pieces))
    except MalformedInput as e:
        raise MalformedSystemFile(str(e), field=path) from None


def schedule_from_dict(doc: Any, *, path: str = "") -> Schedule:
    if not isinstance(doc, dict):
        raise MalformedSystemFile("top level must be a JSON object", field=path)
    _reject_floats(doc, path)
    if "domain" not in doc or not isinstance(doc["domain"], str):
        raise MalformedSystemFile('missing domain string, e.g. "[0,1]"', field=path)
    try:
        domain = Interval.parse(doc["domain"])
    except MalformedInput as e:
        raise MalformedSystemFile(str(e), field="domain") from None
    cycle_node = doc.get("cycle")
    if not isinstance(cycle_node, list) or not cycle_node:
        raise MalformedSystemFile('"cycle" must be a nonempty list of maps', field=path)
    preamble_node = doc.get("preamble", [])
    if not isinstance(preamble_node, list):
        raise MalformedSystemFile('"preamble" must be a list of maps', field=path)
    for section in ("preamble", "cycle"):
        for i, node in enumerate(doc.get(section) or []):
            if isinstance(node, dict) and "quadratic" in node:
                raise MalformedSystemFile(
                    "quadratic float maps are estimate-only; only the mc command "
                    "accepts them",
                    field=f"{section}[{i}]",
                )
    preamble = tuple(
        _plmap_from_dict(node, domain, f"preamble[{i}]")
        for i, node in enumerate(preamble_node)
    )
    cycle = tuple(
        _plmap_from_dict(node, domain, f"cycle[{i}]")
        for i, node in enumerate(cycle_node)
    )
    return Schedule(preamble, cycle, domain)


def parse_system_file(path: str) -> Schedule:
    """Load and validate an exact system file; diagnostics carry field paths."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise MalformedSystemFile("file not found", path=path) from None
    except json.JSONDecodeError as e:
        raise MalformedSystemFile(f"invalid JSON: {e}", path=path) from None
    try:
        return schedule_from_dict(doc)
    except MalformedSystemFile as e:
        raise MalformedSystemFile(e.message, path=path, field=e.field) from None


def write_system_file(path: str, sch: Schedule) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schedule_to_dict(sch), fh, indent=2)
        fh.write("\n")


# -- float-map system files (mc only) ---------------------------------------


def _float_step_from_node(node: Any, domain: Interval, path: str):
    """Returns (callable, is_estimate_only)."""
    if isinstance(node, dict) and "quadratic" in node:
        coeffs = node["quadratic"]
        if (
            not isinstance(coeffs, list)
            or len(coeffs) != 3
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs)
        ):
            raise MalformedSystemFile(
                '"quadratic" must be a list of three numbers [c0, c1, c2]',
                field=path,
            )
        return QuadraticMap(float(coeffs[0]), float(coeffs[1]), float(coeffs[2])), True
    return _compile_plmap(_plmap_from_dict(node, domain, path)), False


def parse_mc_system_file(path: str) -> FloatSchedule:
    """Load a system file for the estimator; PL and quadratic maps both work."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise MalformedSystemFile("file not found", path=path) from None
    except json.JSONDecodeError as e:
        raise MalformedSystemFile(f"invalid JSON: {e}", path=path) from None
    if not isinstance(doc, dict) or "domain" not in doc:
        raise MalformedSystemFile("missing domain", path=path)
    try:
        domain = Interval.parse(doc["domain"])
    except MalformedInput as e:
        raise MalformedSystemFile(str(e), path=path, field="domain") from None
    estimate_only = False
    sections: dict[str, list] = {}
    for section in ("preamble", "cycle"):
        steps = []
        for i, node in enumerate(doc.get(section) or []):
            step, est = _float_step_from_node(node, domain, f"{section}[{i}]")
            estimate_only |= est
            steps.append(step)
        sections[section] = steps
    if not sections["cycle"]:
        raise MalformedSystemFile('"cycle" must be a nonempty list of maps', path=path)
    return FloatSchedule(
        lo=float(domain.lo),
        hi=float(domain.hi),
        preamble=tuple(sections["preamble"]),
        cycle=tuple(sections["cycle"]),
        estimate_only=estimate_only,
    )
