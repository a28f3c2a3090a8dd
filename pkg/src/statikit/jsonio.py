"""JSON interchange for all public value types.

Every numeric leaf is a decimal string so arbitrary-precision integers
survive any JSON parser; booleans stay booleans. Serialization is canonical:
dictionaries are emitted with sorted keys and values in canonical order, so
equal values produce byte-identical documents.
"""

import json
from fractions import Fraction

from .chipfiring import Graph
from .errors import InvalidInputError
from .groebner import (
    GroebnerStratification,
    MarkedGB,
    ModuleVector,
    Poly,
    Submodule,
    base_key,
    leading_term,
)
from .polyhedral import Cone, Fan, PLStratification
from .staticity import ModulePresentation, SmoothChart, TorReport
from .statify import ChartReport, StatificationCertificate, ToricModification


def _int_str(x):
    return str(int(x))


def _parse_int(s, where):
    try:
        return int(s)
    except (TypeError, ValueError):
        raise InvalidInputError(f"expected an integer string at {where}, got {s!r}")


def _frac_str(x):
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _parse_frac(s, where):
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidInputError(f"expected a rational string at {where}, got {s!r}")


# -- cones, fans, stratifications ------------------------------------------------


def cone_to_json(cone):
    return {"rays": [[_int_str(x) for x in r] for r in cone.rays], "ambient_dim": _int_str(cone.ambient_dim)}


def cone_from_json(obj, ambient_dim=None, where="cone"):
    if not isinstance(obj, dict) or "rays" not in obj:
        raise InvalidInputError(f"{where}: expected an object with a 'rays' field")
    rays = [[_parse_int(x, where) for x in r] for r in obj["rays"]]
    if "ambient_dim" in obj:
        ambient_dim = _parse_int(obj["ambient_dim"], where)
    if ambient_dim is None:
        if not rays:
            raise InvalidInputError(f"{where}: ambient_dim required for the zero cone")
        ambient_dim = len(rays[0])
    return Cone(ambient_dim, rays)


def fan_to_json(fan):
    return {
        "ambient_dim": _int_str(fan.ambient_dim),
        "support": cone_to_json(fan.support),
        "cones": [cone_to_json(c) for c in fan.cones],
    }


def fan_from_json(obj, where="fan"):
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{where}: expected an object")
    ambient = _parse_int(obj.get("ambient_dim"), where) if "ambient_dim" in obj else None
    support = cone_from_json(obj["support"], ambient, where + ".support")
    cones = [cone_from_json(c, support.ambient_dim, where + ".cones") for c in obj.get("cones", [])]
    return Fan(support, cones)


# -- polynomials, vectors, submodules ---------------------------------------------


def poly_to_json(p):
    return [{"coeff": _frac_str(c), "exp": [_int_str(x) for x in e]} for e, c in p.terms]


def poly_from_json(obj, nvars, where="poly"):
    if not isinstance(obj, list):
        raise InvalidInputError(f"{where}: expected a term list")
    terms = {}
    for i, t in enumerate(obj):
        exp = tuple(_parse_int(x, f"{where}[{i}].exp") for x in t["exp"])
        c = _parse_frac(t["coeff"], f"{where}[{i}].coeff")
        terms[exp] = terms.get(exp, Fraction(0)) + c
    return Poly(nvars, terms)


def vector_to_json(v):
    out = []
    for (e, comp), c in v.terms:
        out.append({
            "coeff": _frac_str(c),
            "exp": [_int_str(x) for x in e],
            "comp": _int_str(comp + 1),
        })
    return out


def vector_from_json(obj, torus_rank, rank, where="vector"):
    if not isinstance(obj, list):
        raise InvalidInputError(f"{where}: expected a term list")
    terms = {}
    for i, t in enumerate(obj):
        exp = tuple(_parse_int(x, f"{where}[{i}].exp") for x in t["exp"])
        comp = _parse_int(t["comp"], f"{where}[{i}].comp") - 1
        c = _parse_frac(t["coeff"], f"{where}[{i}].coeff")
        terms[(exp, comp)] = terms.get((exp, comp), Fraction(0)) + c
    return ModuleVector(torus_rank, rank, terms)


def submodule_to_json(m):
    return {
        "torus_rank": _int_str(m.torus_rank),
        "rank": _int_str(m.rank),
        "generators": [vector_to_json(g) for g in m.generators],
    }


def submodule_from_json(obj, where="submodule"):
    if not isinstance(obj, dict):
        raise InvalidInputError(f"{where}: expected an object")
    torus = _parse_int(obj["torus_rank"], where)
    rank = _parse_int(obj["rank"], where)
    gens = [vector_from_json(g, torus, rank, f"{where}.generators[{i}]") for i, g in enumerate(obj.get("generators", []))]
    return Submodule(torus, rank, gens)


def marked_gb_to_json(gb):
    return {
        "torus_rank": _int_str(gb.torus_rank),
        "rank": _int_str(gb.rank),
        "generators": [vector_to_json(v) for v in gb.vectors],
    }


def marked_gb_from_json(obj, where="initial_module"):
    torus = _parse_int(obj["torus_rank"], where)
    rank = _parse_int(obj["rank"], where)
    elements = []
    for i, g in enumerate(obj.get("generators", [])):
        mv = vector_from_json(g, torus, rank, f"{where}[{i}]")
        elements.append((mv, leading_term(mv.as_dict(), base_key)))
    return MarkedGB(torus, rank, elements)


def stratification_to_json(strat):
    """GroebnerStratification to canonical cell JSON."""
    cells = []
    for cone, tag in strat.cells:
        cells.append({
            "cone": cone_to_json(cone),
            "initial_module": [vector_to_json(v) for v in tag.vectors],
        })
    return {
        "ambient_dim": _int_str(strat.support.ambient_dim),
        "support": cone_to_json(strat.support),
        "torus_rank": _int_str(strat.module.torus_rank),
        "rank": _int_str(strat.module.rank),
        "kernel": submodule_to_json(strat.module),
        "cells": cells,
        "strata": _int_str(len(strat.strata())),
    }


def stratification_from_json(obj, where="stratification"):
    torus = _parse_int(obj["torus_rank"], where)
    rank = _parse_int(obj["rank"], where)
    support = cone_from_json(obj["support"], None, where + ".support")
    module = submodule_from_json(obj["kernel"], where + ".kernel")
    cells = []
    for i, cell in enumerate(obj["cells"]):
        cone = cone_from_json(cell["cone"], support.ambient_dim, f"{where}.cells[{i}].cone")
        vectors = [
            vector_from_json(v, torus, rank, f"{where}.cells[{i}].initial_module[{j}]")
            for j, v in enumerate(cell["initial_module"])
        ]
        elements = [(mv, leading_term(mv.as_dict(), base_key)) for mv in vectors]
        cells.append((cone, MarkedGB(torus, rank, elements)))
    strat = PLStratification(support, cells, _validated=True)
    return GroebnerStratification(module, support, strat)


# -- charts, presentations, reports -----------------------------------------------


def presentation_to_json(p):
    return {
        "chart": cone_to_json(p.chart.cone),
        "matrix": [[poly_to_json(entry) for entry in row] for row in p.rows],
    }


def presentation_from_json(obj, where="presentation"):
    if not isinstance(obj, dict) or "chart" not in obj or "matrix" not in obj:
        raise InvalidInputError(f"{where}: expected an object with 'chart' and 'matrix'")
    cone = cone_from_json(obj["chart"], None, where + ".chart")
    chart = SmoothChart(cone)
    rows = []
    for i, row in enumerate(obj["matrix"]):
        rows.append([poly_from_json(p, chart.nvars, f"{where}.matrix[{i}][{j}]") for j, p in enumerate(row)])
    return ModulePresentation(chart, rows)


def tor_report_to_json(rep):
    out = {
        "face": [_int_str(v) for v in rep.face],
        "degree": _int_str(rep.degree),
        "vanishes": rep.vanishes,
    }
    if rep.witness is not None:
        out["witness"] = {
            "wedge_basis": [[_int_str(v) for v in w] for w in rep.witness["wedge_basis"]],
            "vector": vector_to_json(rep.witness["vector"]),
        }
    return out


# -- graphs -----------------------------------------------------------------------


def graph_to_json(g):
    return {
        "vertices": _int_str(g.n),
        "edges": [[_int_str(u), _int_str(v)] for u, v in g.edges],
    }


def graph_from_json(obj, where="graph"):
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise InvalidInputError(f"{where}: expected an object with 'vertices' and 'edges'")
    n = _parse_int(obj["vertices"], where)
    edges = [(_parse_int(u, where + ".edges"), _parse_int(v, where + ".edges")) for u, v in obj.get("edges", [])]
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise InvalidInputError(f"{where}: {exc}")


def divisor_from_json(obj, n, where="divisor"):
    if not isinstance(obj, list) or len(obj) != n:
        raise InvalidInputError(f"{where}: expected an integer array of length {n}")
    return [_parse_int(x, where) for x in obj]


# -- certificates ------------------------------------------------------------------

CERT_FORMAT = "statikit-cert/1"


def certificate_to_json(cert, input_sha256):
    charts = []
    for rep, (cone, _chart, subst) in zip(cert.charts, _cert_chart_data(cert)):
        charts.append({
            "cone": cone_to_json(cone),
            "substitution": [[_int_str(x) for x in row] for row in subst],
            "presentation": presentation_to_json(rep.presentation),
            "static": rep.static,
            "reports": [tor_report_to_json(r) for r in rep.reports],
        })
    audit = None
    if cert.audit is not None:
        audit = {
            "second_kernel": submodule_to_json(cert.audit["second_kernel"]),
            "fan_refines_second": cert.audit["fan_refines_second"],
        }
    return {
        "format": CERT_FORMAT,
        "input_sha256": input_sha256,
        "presentation": presentation_to_json(cert.presentation),
        "kernel": submodule_to_json(cert.kernel),
        "stratification": stratification_to_json(cert.stratification),
        "fan": fan_to_json(cert.fan),
        "charts": charts,
        "all_static": cert.all_static,
        "audit": audit,
    }


def _cert_chart_data(cert):
    modification = ToricModification(cert.presentation.chart, cert.fan)
    by_key = {cone.key(): (cone, chart, subst) for cone, chart, subst in modification.charts}
    return [by_key[rep.cone.key()] for rep in cert.charts]


def certificate_from_json(obj, where="certificate"):
    if obj.get("format") != CERT_FORMAT:
        raise InvalidInputError(f"{where}: unknown certificate format {obj.get('format')!r}")
    presentation = presentation_from_json(obj["presentation"], where + ".presentation")
    kernel = submodule_from_json(obj["kernel"], where + ".kernel")
    strat = stratification_from_json(obj["stratification"], where + ".stratification")
    fan = fan_from_json(obj["fan"], where + ".fan")
    charts = []
    for i, ch in enumerate(obj["charts"]):
        cone = cone_from_json(ch["cone"], fan.ambient_dim, f"{where}.charts[{i}].cone")
        pres = presentation_from_json(ch["presentation"], f"{where}.charts[{i}].presentation")
        reports = []
        for rep in ch["reports"]:
            face = tuple(_parse_int(v, where) for v in rep["face"])
            reports.append(TorReport(face=face, degree=_parse_int(rep["degree"], where), vanishes=rep["vanishes"]))
        charts.append(ChartReport(cone=cone, presentation=pres, static=ch["static"], reports=tuple(reports)))
    return StatificationCertificate(presentation, kernel, strat, fan, charts)


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
