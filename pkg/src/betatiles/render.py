"""Deterministic SVG figures of tiles, periodic patches and the suspension domain."""

from __future__ import annotations

import json
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .dynamics import ParryData
from .errors import OutOfDomain
from .natext import domain_slices, tile_bases
from .tiles import TileCloud, integral_cloud, lattice_translates, periodic_patch, rauzy_cloud

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
WIDTH = 800
HEIGHT = 600
MARGIN = 20
TARGETS = ("aper", "per", "int", "natext")


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class Figure:
    """Layers of marks in data coordinates, written out in insertion order."""

    def __init__(self, title: str, config: dict):
        self.title = title
        self.config = config
        self.layers: list[tuple[str, str, np.ndarray]] = []

    def points(self, xy: np.ndarray, color: str) -> None:
        self.layers.append(("pt", color, np.asarray(xy, dtype=float).reshape(-1, 2)))

    def segments(self, seg: np.ndarray, color: str) -> None:
        self.layers.append(("seg", color, np.asarray(seg, dtype=float).reshape(-1, 4)))

    def _bounds(self):
        xs, ys = [], []
        for kind, _, arr in self.layers:
            if not len(arr):
                continue
            if kind == "pt":
                xs.append(arr[:, 0]), ys.append(arr[:, 1])
            else:
                xs.extend([arr[:, 0], arr[:, 2]]), ys.extend([arr[:, 1], arr[:, 3]])
        if not xs:
            return 0.0, 1.0, 0.0, 1.0
        x, y = np.concatenate(xs), np.concatenate(ys)
        x0, x1, y0, y1 = float(x.min()), float(x.max()), float(y.min()), float(y.max())
        if x1 - x0 < 1e-9:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 - y0 < 1e-9:
            y0, y1 = y0 - 0.5, y1 + 0.5
        return x0, x1, y0, y1

    def to_svg(self) -> str:
        x0, x1, y0, y1 = self._bounds()
        sx = (WIDTH - 2 * MARGIN) / (x1 - x0)
        sy = (HEIGHT - 2 * MARGIN) / (y1 - y0)

        def px(x):
            return MARGIN + (x - x0) * sx

        def py(y):
            return HEIGHT - MARGIN - (y - y0) * sy

        header = json.dumps(self.config, sort_keys=True).replace("--", "- -")
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f"<!-- config: {header} -->",
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f"<title>{escape(self.title)}</title>",
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        ]
        r = 1.2
        for kind, color, arr in self.layers:
            out.append(f'<g fill="{color}" stroke="{color}">')
            if kind == "pt":
                # points in the same pixel are drawn once
                grid = np.unique(np.round(np.column_stack([px(arr[:, 0]), py(arr[:, 1])])), axis=0)
                for x, y in grid:
                    out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" stroke="none"/>')
            else:
                for xa, ya, xb, yb in arr:
                    out.append(
                        f'<line x1="{_fmt(px(xa))}" y1="{_fmt(py(ya))}" '
                        f'x2="{_fmt(px(xb))}" y2="{_fmt(py(yb))}" stroke-width="0.6"/>'
                    )
            out.append("</g>")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _plane(cloud: TileCloud, row: int) -> np.ndarray:
    """2-d layout: first non-dominant coordinate horizontal; second coordinate,
    address value or a row index vertical."""
    coords = cloud.arch_coords()
    n = len(cloud)
    if coords.shape[1] >= 2:
        return coords[:, :2]
    addr = cloud.address_values()
    if addr is not None and abs(cloud.field.norm) > 1:
        return np.column_stack([coords[:, 0], addr])
    return np.column_stack([coords[:, 0], np.full(n, float(row))])


def render_aper(parry: ParryData, level: int, config: dict, window: Sequence[tuple[float, float]] | None = None) -> str:
    """Tiles R(x), x in Z[beta] cap [0,1), near the origin; integral points drawn black."""
    field = parry.field
    window = window or [(-1.0, 1.0)] * field.arch_dim
    fig = Figure(f"aperiodic tiles, beta root of {field.label}", config)
    for i, x in enumerate(tile_bases(parry, window)):
        cloud = rauzy_cloud(x, level)
        xy = _plane(cloud, i)
        fig.points(xy, PALETTE[i % len(PALETTE)])
        if abs(field.norm) > 1 and field.arch_dim == 1:
            zero = cloud.address_values() == 0
            fig.points(xy[zero], "#000000")
    return fig.to_svg()


def render_per(parry: ParryData, level: int, config: dict, radius: int = 3) -> str:
    """Translates t + R(0), t in the L-box of the given radius."""
    field = parry.field
    fig = Figure(f"periodic tiles, beta root of {field.label}", config)
    clouds = periodic_patch(parry, lattice_translates(parry, radius), level)
    for i, cloud in enumerate(clouds):
        fig.points(_plane(cloud, 0), PALETTE[i % len(PALETTE)])
    return fig.to_svg()


def render_int(parry: ParryData, level: int, config: dict, window: Sequence[tuple[float, float]] | None = None) -> str:
    """Integral tiles S(x) near the origin, one row per tile when the layout is 1-d."""
    field = parry.field
    window = window or [(-1.0, 1.0)] * field.arch_dim
    fig = Figure(f"integral tiles, beta root of {field.label}", config)
    for i, x in enumerate(tile_bases(parry, window)):
        cloud = integral_cloud(x, level)
        coords = cloud.arch_coords()
        xy = coords[:, :2] if coords.shape[1] >= 2 else np.column_stack([coords[:, 0], np.full(len(cloud), float(i))])
        fig.points(xy, PALETTE[i % len(PALETTE)])
    return fig.to_svg()


def render_natext(parry: ParryData, level: int, config: dict) -> str:
    """[v, v_hat) horizontal against the first coordinate of delta'(v) - R(v)."""
    field = parry.field
    fig = Figure(f"suspension domain, beta root of {field.label}", config)
    for i, sl in enumerate(domain_slices(parry, level)):
        a, b = float(sl.v), float(sl.v_hat)
        ys = np.unique(np.round(sl.coords[:, 0], 9))
        seg = np.column_stack([np.full(len(ys), a), ys, np.full(len(ys), b), ys])
        fig.segments(seg, PALETTE[i % len(PALETTE)])
    return fig.to_svg()


def render(
    parry: ParryData,
    target: str,
    level: int,
    config: dict,
    radius: int = 3,
    window: Sequence[tuple[float, float]] | None = None,
) -> str:
    if target == "aper":
        return render_aper(parry, level, config, window)
    if target == "per":
        return render_per(parry, level, config, radius)
    if target == "int":
        return render_int(parry, level, config, window)
    if target == "natext":
        return render_natext(parry, level, config)
    raise OutOfDomain(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
