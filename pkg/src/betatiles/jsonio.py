"""Deterministic JSON encoding: exact coefficient vectors plus decimal enclosures."""

from __future__ import annotations

import dataclasses
import decimal
import json
import math
from fractions import Fraction
from typing import Any

from .boundary import BoundaryGraph, TilingVerdict, node_label
from .dynamics import ParryData
from .field import FieldElement
from .natext import CoveringReport
from .periodicity import ExclusivePoint, GammaResult, PurityReport, WReport

DIGITS = 20


def decimal_bound(q: Fraction, up: bool, digits: int = DIGITS) -> str:
    """q rounded outward to ``digits`` significant digits, as a string."""
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING if up else decimal.ROUND_FLOOR)
    return str(ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator)))


def enclosure(lo: Fraction, hi: Fraction) -> list[str]:
    return [decimal_bound(lo, False), decimal_bound(hi, True)]


def encode_fraction(q: Fraction) -> dict:
    q = Fraction(q)
    return {"exact": f"{q.numerator}/{q.denominator}", "enclosure": enclosure(q, q)}


def encode_element(x: FieldElement) -> dict:
    lo, hi = x.interval()
    return {
        "exact": {"coeffs": list(x.num), "den": x.den, "expr": repr(x)},
        "enclosure": enclosure(lo, hi),
    }


def encode_float(v: float) -> dict:
    """A float diagnostic, reported with the neighbouring doubles as its enclosure."""
    return {"enclosure": [repr(math.nextafter(v, -math.inf)), repr(math.nextafter(v, math.inf))]}


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return encode_float(obj)
    if isinstance(obj, Fraction):
        return encode_fraction(obj)
    if isinstance(obj, FieldElement):
        return encode_element(obj)
    if isinstance(obj, dict):
        return {str(k if not isinstance(k, FieldElement) else repr(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return to_jsonable(obj.item())
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


# -- report builders ------------------------------------------------------------------


def parry_report(parry: ParryData) -> dict:
    f = parry.field
    return {
        "poly": list(f.min_poly),
        "degree": f.degree,
        "norm": f.norm,
        "unit": f.unit,
        "beta": encode_element(f.beta),
        "beta_interval": enclosure(*f.beta_interval()),
        "d_one": {"preperiod": list(parry.d_one[0]), "period": list(parry.d_one[1])},
        "quasi_greedy": {"preperiod": list(parry.quasi_greedy[0]), "period": list(parry.quasi_greedy[1])},
        "simple_parry": parry.simple_parry,
        "V": [encode_element(v) for v in parry.V],
        "V_hat": [encode_element(v) for v in parry.V_hat],
        "L_basis": [encode_element(g) for g in parry.L_elements()],
        "L_rank": parry.L_rank,
        "qm": parry.qm_holds,
    }


def graph_report(graph: BoundaryGraph) -> dict:
    return {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "node_labels": [node_label(n) for n in graph.nodes],
    }


def verdict_report(v: TilingVerdict) -> dict:
    return {
        "verdict": v.verdict,
        "certified": v.certified,
        "rho": {"lower": encode_fraction(v.rho[0]), "upper": encode_fraction(v.rho[1])},
        "beta": enclosure(*v.beta),
    }


def gamma_report(g: GammaResult) -> dict:
    out = {
        "method": g.method,
        "lower_bound": encode_fraction(g.lower_bound),
        "exact": g.exact,
        "positive": g.positive,
        "notes": list(g.notes),
    }
    if g.exact_value is not None:
        out["exact_value"] = encode_element(g.exact_value)
    if g.enclosure is not None:
        out["enclosure"] = enclosure(*g.enclosure)
    if g.scan_frontier is not None:
        frontier, first = g.scan_frontier
        out["scan_frontier"] = {
            "verified_below": encode_fraction(frontier),
            "first_non_pp": None if first is None else encode_fraction(first),
        }
        out["non_pp"] = [encode_fraction(q) for q in g.non_pp]
        out["tested"] = g.tested
    return out


def w_report(w: WReport) -> dict:
    wit = []
    for x, val in w.witnesses.items():
        entry = {"x": encode_element(x)}
        if val is None:
            entry["witness"] = None
        else:
            entry["witness"] = {"y": encode_element(val[0]), "n": val[1]}
        wit.append(entry)
    return {"complete": w.complete, "witnesses": wit}


def exclusive_report(e: ExclusivePoint) -> dict:
    return {
        "z": encode_element(e.z),
        "n": e.n,
        "verified": e.verified,
        "steps": [{"y": encode_element(y), "n": k} for y, k in e.steps],
    }


def purity_report(r: PurityReport) -> dict:
    return {
        "x": encode_element(r.x),
        "purely_periodic": r.purely_periodic,
        "preperiod": r.preperiod,
        "period": r.period,
    }


def covering_report(r: CoveringReport) -> dict:
    return {
        "histogram": {str(k): v for k, v in r.histogram.items()},
        "modal": r.modal,
        "modal_fraction": encode_fraction(Fraction(r.histogram.get(r.modal, 0), max(r.in_stripe, 1))),
        "in_stripe": r.in_stripe,
        "out_of_stripe": r.out_of_stripe,
        "tiles": r.tiles,
        "level": r.level,
        "seed": r.seed,
    }
