"""Batch command-line front end over the JSON interchange formats.

Exit codes: 0 success, 1 mathematical negative (not static, not equivalent,
criterion violated), 2 malformed or schema-invalid input. Output is
canonical JSON; identical inputs produce byte-identical outputs.
"""

import argparse
import json
import sys

import jsonschema

from . import jsonio
from .chipfiring import (
    firing_script,
    is_chip_firing_equivalent,
    jacobian_group,
    reduced_divisor,
)
from .errors import StatikitError
from .groebner import groebner_stratification
from .staticity import log_tor_dim_at_most
from .statify import compute_statification, input_digest, verify_theorem_instance

INT_STR = {"type": "string", "pattern": "^-?[0-9]+$"}
FRAC_STR = {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}
POINT = {"type": "array", "items": INT_STR}
CONE = {
    "type": "object",
    "properties": {"rays": {"type": "array", "items": POINT}, "ambient_dim": INT_STR},
    "required": ["rays"],
}
FAN = {
    "type": "object",
    "properties": {"ambient_dim": INT_STR, "support": CONE, "cones": {"type": "array", "items": CONE}},
    "required": ["support", "cones"],
}
POLY = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"coeff": FRAC_STR, "exp": POINT},
        "required": ["coeff", "exp"],
    },
}
VECTOR = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"coeff": FRAC_STR, "exp": POINT, "comp": INT_STR},
        "required": ["coeff", "exp", "comp"],
    },
}
SUBMODULE = {
    "type": "object",
    "properties": {
        "torus_rank": INT_STR,
        "rank": INT_STR,
        "generators": {"type": "array", "items": VECTOR},
    },
    "required": ["torus_rank", "rank", "generators"],
}
PRESENTATION = {
    "type": "object",
    "properties": {
        "chart": CONE,
        "matrix": {"type": "array", "items": {"type": "array", "items": POLY}, "minItems": 1},
    },
    "required": ["chart", "matrix"],
}
GRAPH = {
    "type": "object",
    "properties": {
        "vertices": INT_STR,
        "edges": {"type": "array", "items": {"type": "array", "items": INT_STR, "minItems": 2, "maxItems": 2}},
    },
    "required": ["vertices", "edges"],
}
DIVISOR = {"type": "array", "items": INT_STR}

SCHEMAS = {
    "stratify": {
        "type": "object",
        "properties": {"submodule": SUBMODULE, "support": CONE},
        "required": ["submodule", "support"],
    },
    "statify": PRESENTATION,
    "check-static": PRESENTATION,
    "tor-dim": {
        "type": "object",
        "properties": {"presentation": PRESENTATION, "d": INT_STR},
        "required": ["presentation", "d"],
    },
    "verify-theorem": {
        "type": "object",
        "properties": {"presentation": PRESENTATION, "fan": FAN},
        "required": ["presentation", "fan"],
    },
    "jacobian": GRAPH,
    "chip-equiv": {
        "type": "object",
        "properties": {"graph": GRAPH, "d1": DIVISOR, "d2": DIVISOR},
        "required": ["graph", "d1", "d2"],
    },
    "firing-script": {
        "type": "object",
        "properties": {"graph": GRAPH, "d1": DIVISOR, "d2": DIVISOR},
        "required": ["graph", "d1", "d2"],
    },
}


def _read_input(source):
    if source == "-":
        return sys.stdin.read()
    if source.lstrip().startswith(("{", "[")):
        return source
    with open(source, "r", encoding="utf-8") as fh:
        return fh.read()


def _run_stratify(data, args):
    module = jsonio.submodule_from_json(data["submodule"])
    support = jsonio.cone_from_json(data["support"], module.torus_rank, "support")
    strat = groebner_stratification(module, support)
    return 0, jsonio.stratification_to_json(strat)


def _run_statify(data, args):
    presentation = jsonio.presentation_from_json(data)
    cert = compute_statification(presentation, audit=args.audit, fail_fast=args.fail_fast)
    payload = jsonio.certificate_to_json(cert, input_digest(data))
    return (0 if cert.all_static else 1), payload


def _run_check_static(data, args):
    presentation = jsonio.presentation_from_json(data)
    static, reports = log_tor_dim_at_most(presentation, 1)
    log_flat, _ = log_tor_dim_at_most(presentation, 0)
    payload = {
        "static": static,
        "log_flat": log_flat,
        "reports": [jsonio.tor_report_to_json(r) for r in reports],
    }
    return (0 if static else 1), payload


def _run_tor_dim(data, args):
    presentation = jsonio.presentation_from_json(data["presentation"])
    d = int(data["d"])
    holds, reports = log_tor_dim_at_most(presentation, d)
    payload = {
        "d": str(d),
        "holds": holds,
        "reports": [jsonio.tor_report_to_json(r) for r in reports],
    }
    return (0 if holds else 1), payload


def _run_verify_theorem(data, args):
    presentation = jsonio.presentation_from_json(data["presentation"])
    fan = jsonio.fan_from_json(data["fan"])
    check = verify_theorem_instance(presentation, fan)
    payload = {
        "fan_refines_stratification": check.fan_refines_stratification,
        "all_static": check.all_static,
        "agrees": check.agrees,
        "charts": [
            {"cone": jsonio.cone_to_json(cone), "static": static}
            for cone, static in check.charts
        ],
    }
    return (0 if check.agrees else 1), payload


def _run_jacobian(data, args):
    graph = jsonio.graph_from_json(data)
    factors = jacobian_group(graph)
    return 0, {"invariant_factors": [str(f) for f in factors]}


def _run_chip_equiv(data, args):
    graph = jsonio.graph_from_json(data["graph"])
    d1 = jsonio.divisor_from_json(data["d1"], graph.n, "d1")
    d2 = jsonio.divisor_from_json(data["d2"], graph.n, "d2")
    eq = is_chip_firing_equivalent(graph, d1, d2)
    payload = {
        "equivalent": eq,
        "reduced_d1": [str(x) for x in reduced_divisor(graph, d1)],
        "reduced_d2": [str(x) for x in reduced_divisor(graph, d2)],
    }
    return (0 if eq else 1), payload


def _run_firing_script(data, args):
    graph = jsonio.graph_from_json(data["graph"])
    d1 = jsonio.divisor_from_json(data["d1"], graph.n, "d1")
    d2 = jsonio.divisor_from_json(data["d2"], graph.n, "d2")
    script = firing_script(graph, d1, d2)
    payload = {"script": None if script is None else [str(x) for x in script]}
    return (0 if script is not None else 1), payload


RUNNERS = {
    "stratify": _run_stratify,
    "statify": _run_statify,
    "check-static": _run_check_static,
    "tor-dim": _run_tor_dim,
    "verify-theorem": _run_verify_theorem,
    "jacobian": _run_jacobian,
    "chip-equiv": _run_chip_equiv,
    "firing-script": _run_firing_script,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="statikit",
        description="Exact Groebner stratifications, staticity certificates, and chip firing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?", help="input path, '-' for stdin, or inline JSON")
        p.add_argument("--output", help="write the JSON result to this path")
        p.add_argument("--schema", action="store_true", help="print the input schema and exit")
        p.add_argument("--audit", action="store_true", help="statify: run the second-resolution audit")
        p.add_argument("--fail-fast", action="store_true", help="statify: stop at the first non-static chart")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.schema:
        sys.stdout.write(jsonio.dumps(SCHEMAS[args.command]))
        return 0
    if args.input is None:
        sys.stderr.write("error: an input document is required (or use --schema)\n")
        return 2
    try:
        text = _read_input(args.input)
    except OSError as exc:
        sys.stderr.write(f"error: cannot read input: {exc}\n")
        return 2
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}\n")
        return 2
    try:
        jsonschema.validate(data, SCHEMAS[args.command])
    except jsonschema.ValidationError as exc:
        path = "$" + "".join(f"[{p!r}]" for p in exc.absolute_path)
        sys.stderr.write(f"error: schema violation at {path}: {exc.message}\n")
        return 2
    try:
        code, payload = RUNNERS[args.command](data, args)
    except StatikitError as exc:
        sys.stderr.write(f"error: {exc.code}: {exc}\n")
        return 2
    out = jsonio.dumps(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
