"""Enumeration of Z[beta] points in a window of the Minkowski embedding."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .errors import BoxTooLarge
from .field import BetaField


def conj_radius_upper(field: BetaField) -> list[float]:
    """Per place (ceil(beta)-1)/(1-|beta^(sigma)|) using the certified modulus bound."""
    out = []
    for place in field._places:
        mod = abs(place.center) + float(place.radius)
        out.append(field.alphabet_max / (1.0 - mod))
    return out


def scan_box(
    field: BetaField,
    real_lo: float,
    real_hi: float,
    conj_bounds: Sequence[float],
    cap: int = 10**6,
) -> np.ndarray:
    """Integer vectors n with real_lo < sum n_i beta^i < real_hi (float, padded) and
    |n^(sigma)| <= conj_bounds[sigma] at every non-dominant place.

    Callers re-check the real inequality exactly; the float test is padded so
    that nothing inside the window is lost.
    """
    d = field.degree
    centre = 0.5 * (real_lo + real_hi)
    half = [0.5 * (real_hi - real_lo)]
    for place, b in zip(field._places, conj_bounds):
        half.extend([b] if place.real else [b, b])
    minv = np.linalg.inv(field.minkowski_matrix())
    coeff_half = np.abs(minv) @ np.array(half)
    coeff_mid = minv @ np.array([centre] + [0.0] * (d - 1))
    ranges = [
        range(math.floor(m - h - 1e-6), math.ceil(m + h + 1e-6) + 1)
        for m, h in zip(coeff_mid[1:], coeff_half[1:])
    ]
    width = math.ceil(real_hi - real_lo) + 3
    total = width * math.prod(len(r) for r in ranges)
    if total > cap:
        raise BoxTooLarge(f"lattice box holds about {total} points (cap {cap})")
    bp = np.array(field._bpow_f)
    if ranges:
        grid = np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, d - 1)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    rest = grid.astype(float) @ bp[1:]
    pad = 1e-9 * (1 + np.abs(grid).astype(float) @ np.abs(bp[1:]))
    rows = []
    base = np.floor(real_lo - rest).astype(np.int64)
    for off in range(0, width + 1):
        n0 = base + off
        val = n0 + rest
        ok = (val > real_lo - pad) & (val < real_hi + pad)
        rows.append(np.column_stack([n0[ok], grid[ok]]))
    cand = np.unique(np.concatenate(rows), axis=0)
    if not len(conj_bounds):
        return cand
    coords = [np.abs(cand.astype(float) @ pw) for pw in field._conj_pows]
    keep = np.all(np.column_stack(coords) <= np.array(conj_bounds) * (1 + 1e-9) + 1e-9, axis=1)
    return cand[keep]
