"""The suspension domain X, the map on it, slices and a covering-degree diagnostic."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import ParryData, t_digit
from .errors import OutOfDomain
from .field import FieldElement
from .lattice import conj_radius_upper, scan_box
from .periodicity import is_purely_periodic
from .tiles import TileCloud, address_rows, piece_boxes, rauzy_cloud, tile_hulls


@dataclass(frozen=True)
class NatExtPoint:
    """A point of the representation space; only diagonal points delta(x) are modelled."""

    x: FieldElement
    as_diagonal: bool = True


def nat_ext_step(p: NatExtPoint) -> NatExtPoint:
    """beta z - delta(floor(beta pi_1(z))) on a diagonal point, i.e. delta(T(x))."""
    if not p.as_diagonal:
        raise OutOfDomain("only diagonal points are supported")
    x = p.x
    if x.sign() < 0 or x >= 1:
        raise OutOfDomain(f"{x!r} is not in [0,1)")
    return NatExtPoint(t_digit(x)[1], True)


def nat_ext_contains(x: FieldElement) -> bool:
    """delta(x) lies in X exactly when x has a purely periodic expansion."""
    if x.sign() < 0 or x >= 1:
        return False
    return is_purely_periodic(x).purely_periodic


@dataclass(frozen=True)
class DomainSlice:
    """[v, v_hat) times delta'(v) - R(v) at a finite level.

    ``coords`` are the non-dominant coordinates of v - z for z in the level-k
    cloud of v, and ``addresses`` the residue digits of v - z (None when v is
    not integral).
    """

    v: FieldElement
    v_hat: FieldElement
    coords: np.ndarray
    addresses: np.ndarray | None
    cloud: TileCloud

    def address_values(self) -> np.ndarray | None:
        if self.addresses is None:
            return None
        n = abs(self.v.field.norm)
        if self.addresses.shape[1] == 0:
            return np.zeros(len(self.coords))
        return self.addresses @ (float(n) ** -np.arange(1, self.addresses.shape[1] + 1))


def domain_slices(parry: ParryData, level: int, level_cap: int | None = None) -> list[DomainSlice]:
    field = parry.field
    out = []
    for v in parry.V:
        cloud = rauzy_cloud(v, level, level_cap=level_cap)
        # v - (v + w) = -w
        coords = -cloud.arch_coords() + field.arch_coords([v])[0]
        addrs = None
        if v.den == 1:
            addrs = address_rows(field, -cloud.nums, level)
        out.append(DomainSlice(v, parry.hat(v), coords, addrs, cloud))
    return out


@dataclass(frozen=True)
class CoveringReport:
    histogram: dict
    modal: int
    in_stripe: int
    out_of_stripe: int
    tiles: int
    level: int
    seed: int

    @property
    def fraction_modal(self) -> float:
        return self.histogram.get(self.modal, 0) / self.in_stripe if self.in_stripe else 0.0


def tile_bases(parry: ParryData, window: Sequence[tuple[float, float]]) -> list[FieldElement]:
    """x in Z[beta] cap [0,1) whose tile can meet the archimedean window."""
    field = parry.field
    radii = conj_radius_upper(field)
    reach = max(max(abs(lo), abs(hi)) for lo, hi in window) if window else 0.0
    bounds = [r + reach * 1.5 + 1.0 for r in radii]
    out = []
    for row in scan_box(field, 0.0, 1.0, bounds):
        x = FieldElement(field, tuple(int(t) for t in row))
        if x.sign() >= 0 and x < 1:
            out.append(x)
    return out


def covering_degree_estimate(
    parry: ParryData,
    level: int,
    samples: int,
    window: Sequence[tuple[float, float]] | None = None,
    address_window: tuple[float, float] = (0.0, 1.0),
    seed: int = 0,
    level_cap: int | None = None,
) -> CoveringReport:
    """Count, for random points of the stripe space, how many tiles R(x) cover them.

    Tiles are the R(x), x in Z[beta] cap [0,1), each replaced by the outer boxes
    of its level-k pieces; a piece covers a sample when the sample's address
    starts with the piece address and its archimedean part lies in the box.
    Samples whose address value leaves [0,1) are out of the stripe.
    """
    field = parry.field
    dim = field.arch_dim
    if window is None:
        window = [(-1.0, 1.0)] * dim
    window = [tuple(map(float, w)) for w in window]
    if len(window) != dim:
        raise OutOfDomain(f"window needs {dim} coordinate intervals")
    rng = np.random.default_rng(seed)
    n = abs(field.norm)
    # address keys are int64; deeper digits only shrink the cylinders, so dropping them stays outer
    depth = min(level, int(62 / np.log2(n))) if n > 1 else 0
    weights = n ** np.arange(depth, dtype=np.int64)
    hulls = tile_hulls(parry)

    tile_ids, keys_all, lo_all, hi_all = [], [], [], []
    bases = tile_bases(parry, window)
    wlo = np.array([w[0] for w in window])
    whi = np.array([w[1] for w in window])
    used = 0
    for x in bases:
        cloud = rauzy_cloud(x, level, level_cap=level_cap)
        L, U = piece_boxes(parry, cloud, hulls)
        hit = np.all((U >= wlo) & (L <= whi), axis=1)
        if not hit.any():
            continue
        if n > 1:
            keys = cloud.addresses[hit][:, :depth] @ weights
        else:
            keys = np.zeros(int(hit.sum()), dtype=np.int64)
        tile_ids.append(np.full(len(keys), used))
        keys_all.append(keys)
        lo_all.append(L[hit])
        hi_all.append(U[hit])
        used += 1
    if used:
        tile_ids = np.concatenate(tile_ids)
        keys_all = np.concatenate(keys_all)
        lo_all = np.concatenate(lo_all)
        hi_all = np.concatenate(hi_all)
        order = np.argsort(keys_all, kind="stable")
        tile_ids, keys_all = tile_ids[order], keys_all[order]
        lo_all, hi_all = lo_all[order], hi_all[order]

    pts = wlo + rng.random((samples, dim)) * (whi - wlo)
    a_lo, a_hi = address_window
    avals = a_lo + rng.random(samples) * (a_hi - a_lo)
    stripe = (avals >= 0) & (avals < 1)
    if n > 1:
        digits = np.floor(np.clip(avals, 0, 1 - 1e-15)[:, None] * float(n) ** np.arange(1, depth + 1)) % n
        skeys = digits.astype(np.int64) @ weights
    else:
        skeys = np.zeros(samples, dtype=np.int64)

    hist: Counter = Counter()
    for i in np.nonzero(stripe)[0]:
        if not used:
            hist[0] += 1
            continue
        a = np.searchsorted(keys_all, skeys[i], side="left")
        b = np.searchsorted(keys_all, skeys[i], side="right")
        inside = np.all((lo_all[a:b] <= pts[i]) & (pts[i] <= hi_all[a:b]), axis=1)
        hist[len(set(tile_ids[a:b][inside].tolist()))] += 1
    in_stripe = int(stripe.sum())
    modal = max(sorted(hist), key=lambda c: hist[c]) if hist else 0
    return CoveringReport(
        histogram=dict(sorted(hist.items())),
        modal=modal,
        in_stripe=in_stripe,
        out_of_stripe=samples - in_stripe,
        tiles=used,
        level=level,
        seed=seed,
    )
