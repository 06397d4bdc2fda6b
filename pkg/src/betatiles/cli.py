"""Command-line interface: ``betatiles <command> --poly 1,-2,-2 ...``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import jsonio
from .boundary import build_boundary_graph, decide_tiling, export_dot
from .dynamics import parry_data
from .errors import BetaTilesError, OutOfDomain
from .field import BetaField, FieldElement, make_beta, parse_poly
from .natext import covering_degree_estimate
from .periodicity import (
    check_W,
    exclusive_point,
    gamma_lower_bound_thm5,
    gamma_quadratic,
    gamma_scan,
    is_purely_periodic,
    pur_set_integral,
)
from .render import TARGETS, render
from .tiles import hausdorff_defect, integral_cloud, rauzy_cloud

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2
EXIT_NOT_TILING = 3

DEFAULT_POLY = "1,-2,-2"
DEFAULT_BITS = 128
DEFAULT_LEVEL = 8
DEFAULT_MAX_DEN = 50
DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    """Every knob of a run; embedded verbatim in JSON and SVG output."""

    command: str
    poly: list[int]
    bits: int = DEFAULT_BITS
    level: int = DEFAULT_LEVEL
    max_den: int = DEFAULT_MAX_DEN
    window: list[list[float]] | None = None
    seed: int = DEFAULT_SEED
    extra: dict = field(default_factory=dict)
    json: str | None = None
    svg: str | None = None
    dot: str | None = None

    def header(self) -> dict:
        out = asdict(self)
        for key in ("json", "svg", "dot"):
            out.pop(key)
        return out


def _parse_window(text: str | None) -> list[list[float]] | None:
    """``"lo,hi"`` per coordinate, coordinates separated by ``;``."""
    if not text:
        return None
    out = []
    for part in text.split(";"):
        lo, hi = (float(t) for t in part.split(","))
        if not lo < hi:
            raise OutOfDomain(f"empty window {part!r}")
        out.append([lo, hi])
    return out


def _parse_element(beta: BetaField, text: str) -> FieldElement:
    """``p/q`` for a rational or ``c0,c1,...`` for sum c_i beta^i (optionally ``/den``)."""
    text = text.strip()
    if "," not in text:
        return beta.rational(Fraction(text))
    den = 1
    if "/" in text:
        text, d = text.rsplit("/", 1)
        den = int(d)
    return beta.element(tuple(int(t) for t in text.split(",")), den)


def _quadratic_ab(beta: BetaField) -> tuple[int, int] | None:
    if beta.degree != 2:
        return None
    _, c1, c0 = beta.min_poly
    a, b = -c1, -c0
    if b >= 1 and a >= b:
        return a, b
    return None


def _gamma(beta: BetaField, parry, method: str, cfg: RunConfig):
    if method == "quadratic":
        ab = _quadratic_ab(beta)
        if ab is None:
            raise OutOfDomain("the quadratic formula needs beta^2 = a beta + b with a >= b >= 1")
        return gamma_quadratic(*ab)
    if method == "thm5":
        return gamma_lower_bound_thm5(parry, cfg.level)
    return gamma_scan(beta, cfg.max_den)


def _emit(cfg: RunConfig, payload: dict, out) -> None:
    payload = {"config": cfg.header(), **payload}
    text = jsonio.dumps(payload)
    if cfg.json:
        with open(cfg.json, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


# -- commands --------------------------------------------------------------------


def cmd_analyze(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    parry = parry_data(beta)
    graph = build_boundary_graph(parry)
    verdict = decide_tiling(beta, graph)
    report = {
        "pisot": {"valid": True, "degree": beta.degree, "norm": beta.norm, "unit": beta.unit},
        "parry": jsonio.parry_report(parry),
        "qm": parry.qm_holds,
        "boundary_graph": jsonio.graph_report(graph),
        "tiling": jsonio.verdict_report(verdict),
    }
    if not parry.qm_holds:
        report["qm_note"] = (
            f"(QM) fails: L has rank {parry.L_rank} instead of {beta.degree - 1}, so delta'(L) is "
            "not a lattice and the periodic collection is not locally finite"
        )
    P = pur_set_integral(beta)
    report["W"] = jsonio.w_report(check_W(beta, P=P))
    method = "quadratic" if _quadratic_ab(beta) else "scan"
    report["gamma"] = jsonio.gamma_report(_gamma(beta, parry, method, cfg))
    _emit(cfg, report, out)
    if cfg.dot:
        _write(cfg.dot, export_dot(graph))
    return {"Tiling": EXIT_OK, "Undecided": EXIT_UNDECIDED, "NotTiling": EXIT_NOT_TILING}[verdict.verdict]


def cmd_parry(cfg: RunConfig, out) -> int:
    parry = parry_data(make_beta(cfg.poly, cfg.bits))
    _emit(cfg, {"parry": jsonio.parry_report(parry)}, out)
    return EXIT_OK


def cmd_tiles(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    parry = parry_data(beta)
    x = _parse_element(beta, cfg.extra["x"])
    kind = cfg.extra["kind"]
    build = integral_cloud if kind == "integral" else rauzy_cloud
    cloud = build(x, cfg.level, addr_depth=cfg.extra.get("addr_depth"))
    report = {"kind": kind, "x": x, "level": cfg.level, "points": len(cloud)}
    if cfg.level >= 1:
        prev = build(x, cfg.level - 1)
        hd = hausdorff_defect(prev, cloud)
        report["hausdorff"] = {"bound": hd.bound, "holds": hd.holds}
    if cfg.extra.get("list"):
        report["cloud"] = [list(map(int, row)) for row in cloud.nums]
        report["offset"] = cloud.offset
        if cloud.addresses is not None:
            report["addresses"] = [list(map(int, row)) for row in cloud.addresses]
    _emit(cfg, report, out)
    if cfg.svg:
        target = cfg.extra.get("target") or ("int" if kind == "integral" else "aper")
        _write(cfg.svg, render(parry, target, cfg.level, cfg.header(), cfg.extra.get("radius", 3), cfg.window))
    return EXIT_OK


def cmd_boundary_graph(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    graph = build_boundary_graph(parry_data(beta))
    verdict = decide_tiling(beta, graph)
    _emit(cfg, {"boundary_graph": jsonio.graph_report(graph), "tiling": jsonio.verdict_report(verdict)}, out)
    if cfg.dot:
        _write(cfg.dot, export_dot(graph))
    return EXIT_OK


def cmd_gamma(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    result = _gamma(beta, parry_data(beta), cfg.extra["method"], cfg)
    _emit(cfg, {"gamma": jsonio.gamma_report(result)}, out)
    return EXIT_OK


def cmd_purper(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    report: dict = {}
    if cfg.extra.get("x"):
        report["purity"] = jsonio.purity_report(is_purely_periodic(_parse_element(beta, cfg.extra["x"])))
    if cfg.extra.get("exclusive") or not report:
        P = pur_set_integral(beta)
        report["P"] = P
        report["W"] = jsonio.w_report(check_W(beta, P=P))
        report["exclusive_point"] = jsonio.exclusive_report(exclusive_point(beta, P))
    _emit(cfg, report, out)
    return EXIT_OK


def cmd_natext(cfg: RunConfig, out) -> int:
    beta = make_beta(cfg.poly, cfg.bits)
    parry = parry_data(beta)
    addr = cfg.extra.get("address_window") or [0.0, 1.0]
    rep = covering_degree_estimate(
        parry,
        cfg.level,
        cfg.extra["samples"],
        window=cfg.window,
        address_window=tuple(addr),
        seed=cfg.seed,
    )
    _emit(cfg, {"covering": jsonio.covering_report(rep)}, out)
    if cfg.svg:
        _write(cfg.svg, render(parry, "natext", cfg.extra.get("svg_level", min(cfg.level, 8)), cfg.header()))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "parry": cmd_parry,
    "tiles": cmd_tiles,
    "boundary-graph": cmd_boundary_graph,
    "gamma": cmd_gamma,
    "purper": cmd_purper,
    "natext": cmd_natext,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", default=DEFAULT_POLY, help="minimal polynomial, leading coefficient first")
    common.add_argument("--bits", type=int, default=DEFAULT_BITS, help="working precision in bits")
    common.add_argument("--level", type=int, default=DEFAULT_LEVEL, help="cloud level k")
    common.add_argument("--json", help="write the JSON report here instead of stdout")
    common.add_argument("--svg", help="write an SVG figure here")
    common.add_argument("--dot", help="write the boundary graph in DOT format here")

    parser = argparse.ArgumentParser(prog="betatiles", description="Tilings and pure periodicity for Pisot beta.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="full report; exit code encodes the tiling verdict")
    sub.add_parser("parry", parents=[common], help="expansion of 1, V, V_hat, L and (QM)")
    p = sub.add_parser("tiles", parents=[common], help="level-k tile clouds and figures")
    p.add_argument("--x", default="0", help="base point: p/q or c0,c1,...[/den]")
    p.add_argument("--kind", choices=("rauzy", "integral"), default="rauzy")
    p.add_argument("--target", choices=TARGETS, help="SVG figure (default follows --kind)")
    p.add_argument("--radius", type=int, default=3, help="L-box radius for target per")
    p.add_argument("--list", action="store_true", help="include the exact cloud in the JSON")
    p.add_argument("--window", help="figure window: lo,hi per non-dominant coordinate, separated by ';'")
    p.add_argument("--addr-depth", type=int, help="digits of finite address per point (default: level)")
    sub.add_parser("boundary-graph", parents=[common], help="boundary graph and spectral verdict")
    p = sub.add_parser("gamma", parents=[common], help="gamma(beta)")
    p.add_argument("--method", choices=("quadratic", "scan", "thm5"), default="scan")
    p.add_argument("--max-den", type=int, default=DEFAULT_MAX_DEN)
    p = sub.add_parser("purper", parents=[common], help="pure periodicity, (W) and the exclusive point")
    p.add_argument("--x", help="point to classify: p/q or c0,c1,...[/den]")
    p.add_argument("--exclusive", action="store_true", help="also build P, (W) witnesses and z")
    p = sub.add_parser("natext", parents=[common], help="covering-degree diagnostic and domain figure")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--window", help="lo,hi per non-dominant coordinate, separated by ';'")
    p.add_argument("--address-window", help="lo,hi in address-value units (stripe is [0,1))")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        poly=list(parse_poly(args.poly)),
        bits=args.bits,
        level=args.level,
        json=args.json,
        svg=args.svg,
        dot=args.dot,
    )
    if args.command == "tiles":
        cfg.window = _parse_window(args.window)
        cfg.extra = {
            "x": args.x,
            "kind": args.kind,
            "target": args.target,
            "radius": args.radius,
            "list": args.list,
            "addr_depth": args.addr_depth,
        }
    elif args.command == "gamma":
        cfg.max_den = args.max_den
        cfg.extra = {"method": args.method}
    elif args.command == "purper":
        cfg.extra = {"x": args.x, "exclusive": args.exclusive}
    elif args.command == "natext":
        cfg.seed = args.seed
        cfg.window = _parse_window(args.window)
        aw = _parse_window(args.address_window)
        cfg.extra = {"samples": args.samples, "address_window": aw[0] if aw else None}
    return cfg


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, out)
    except BetaTilesError as exc:
        sys.stderr.write(jsonio.dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(jsonio.dumps({"error": {"code": "bad_input", "message": str(exc)}}))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
