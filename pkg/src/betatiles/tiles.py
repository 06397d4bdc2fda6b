"""Point-cloud approximants of Rauzy fractals and integral beta-tiles.

A level-k cloud of R(x) is the exact set beta^k T^-k(x).  Every point has the
form z = x + w with w = sum_{j<k} a_j beta^j in Z[beta], so a cloud stores the
base point once and the integer vectors w as a numpy array.  Points are built
forward: level k+1 is {z + a beta^k}, where the top digit floor(beta) is only
allowed while z < (beta - floor(beta)) beta^k.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .dynamics import ParryData
from .errors import (
    LevelMismatch,
    LevelTooHigh,
    NotBetaRational,
    NotInHalfOpenUnit,
    NotIntegral,
    QMViolated,
    WrongInterval,
)
from .field import BetaField, FieldElement, _dyadic_up, _sqrt_up
from .lattice import conj_radius_upper

LEVEL_CAP = 14
_INT64_SAFE = 1 << 52


def default_level_cap(field: BetaField) -> int:
    """LEVEL_CAP, raised for small beta so that clouds of about 10^6 points stay allowed."""
    return max(LEVEL_CAP, level_for_points(field))


def _as_safe(arr: np.ndarray) -> np.ndarray:
    """Switch to Python-int storage before int64 could overflow."""
    if arr.dtype != object and arr.size and np.abs(arr).max() > _INT64_SAFE:
        return arr.astype(object)
    return arr


def mul_beta_rows(field: BetaField, arr: np.ndarray) -> np.ndarray:
    """Multiply each integer row (constant first) by beta."""
    arr = _as_safe(arr)
    top = arr[:, -1]
    out = np.empty_like(arr)
    out[:, 0] = top * field._red[0]
    for i in range(1, field.degree):
        out[:, i] = arr[:, i - 1] + top * field._red[i]
    return _as_safe(out)


def div_beta_rows(field: BetaField, arr: np.ndarray) -> np.ndarray:
    """Divide integer rows by beta; rows must be divisible (n_0 = 0 mod c_0)."""
    c = field._c
    q = arr[:, 0] // c[0]
    out = np.empty_like(arr)
    for i in range(field.degree - 1):
        out[:, i] = arr[:, i + 1] - q * c[i + 1]
    out[:, -1] = -q
    return out


def address_rows(field: BetaField, arr: np.ndarray, depth: int) -> np.ndarray:
    """Residue digits (n, depth) of integral rows; empty columns for units."""
    n = abs(field.norm)
    if n == 1:
        return np.zeros((len(arr), 0), dtype=np.int64)
    cur = np.array(arr, copy=True)
    cols = []
    for _ in range(depth):
        d = cur[:, 0] % n
        cols.append(np.asarray(d, dtype=np.int64))
        cur = cur.copy()
        cur[:, 0] = cur[:, 0] - d
        cur = div_beta_rows(field, cur)
    if not cols:
        return np.zeros((len(arr), 0), dtype=np.int64)
    return np.column_stack(cols)


def _row_values(field: BetaField, arr: np.ndarray) -> np.ndarray:
    pw = np.array(field._bpow_f)
    return np.asarray(arr, dtype=float) @ pw


@dataclass(frozen=True)
class TileCloud:
    """Exact level-k approximant: points are ``offset + w`` for each row w of ``nums``."""

    field: BetaField
    base_point: FieldElement
    level: int
    kind: str
    offset: FieldElement
    nums: np.ndarray
    addresses: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.nums)

    @property
    def points(self) -> list[FieldElement]:
        f = self.field
        return [self.offset + FieldElement(f, tuple(int(v) for v in row)) for row in self.nums]

    def keys(self) -> set[tuple[int, ...]]:
        """The integer vectors w = z - offset as a set (for exact set comparisons)."""
        return {tuple(int(v) for v in row) for row in self.nums}

    def point_set(self) -> set[FieldElement]:
        return set(self.points)

    def arch_coords(self) -> np.ndarray:
        """Non-dominant embedding of every point, shape (n, arch_dim)."""
        f = self.field
        shift = f.arch_coords([self.offset])[0]
        cols = []
        nums = np.asarray(self.nums, dtype=float)
        for place, pw in zip(f._places, f._conj_pows):
            vals = nums @ pw
            cols.append(vals.real)
            if not place.real:
                cols.append(vals.imag)
        if not cols:
            return np.zeros((len(self.nums), 0))
        return np.column_stack(cols) + shift

    def address_values(self) -> np.ndarray | None:
        """sum d_j |N|^(-j-1) for every point (None when addresses are absent)."""
        if self.addresses is None:
            return None
        n = abs(self.field.norm)
        if self.addresses.shape[1] == 0:
            return np.zeros(len(self.nums))
        weights = float(n) ** -np.arange(1, self.addresses.shape[1] + 1)
        return self.addresses @ weights

    def translated(self, t: FieldElement) -> "TileCloud":
        """The cloud shifted by t (addresses recomputed when possible)."""
        new_offset = self.offset + t
        addrs = None
        if self.addresses is not None and new_offset.den == 1:
            rows = _as_safe(np.asarray(self.nums)) + np.array(new_offset.num, dtype=object if self.nums.dtype == object else np.int64)
            addrs = address_rows(self.field, rows, self.addresses.shape[1])
        return replace(self, offset=new_offset, addresses=addrs)


def _sorted_rows(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    if arr.dtype == object:
        order = sorted(range(len(arr)), key=lambda i: tuple(arr[i]))
    else:
        order = np.lexsort(arr.T[::-1])
    return arr[order]


def _check_base(x: FieldElement, integral: bool) -> None:
    if x.sign() < 0 or x >= 1:
        raise NotInHalfOpenUnit(f"{x!r} is not in [0,1)")
    if integral:
        if x.den != 1:
            raise NotIntegral(f"{x!r} is not in Z[beta]")
    elif not x.in_z_beta_inv():
        raise NotBetaRational(f"{x!r} is not in Z[1/beta]")


def _top_digit_mask(field: BetaField, x: FieldElement, w: np.ndarray, j: int) -> np.ndarray:
    """Rows with (x + w)/beta^j < beta - floor(beta), i.e. the top digit stays admissible."""
    thr_elem = (field.beta - field.alphabet_max) * field.power(j)
    if len(w) == 0:
        return np.zeros(0, dtype=bool)
    vals = _row_values(field, w) + float(x)
    thr = float(thr_elem)
    mag = np.abs(np.asarray(w, dtype=float)) @ np.array(field._bpow_f) + abs(float(x)) + abs(thr)
    err = mag * 1e-12 + 1e-300
    mask = vals < thr - err
    unsure = np.nonzero(np.abs(vals - thr) <= err)[0]
    for i in unsure:
        z = x + FieldElement(field, tuple(int(v) for v in w[i]))
        mask[i] = z < thr_elem
    return mask


def rauzy_cloud(
    x: FieldElement, k: int, level_cap: int | None = None, addr_depth: int | None = None
) -> TileCloud:
    """The exact set beta^k T^-k(x) for x in Z[1/beta] cap [0,1)."""
    field = x.field
    _check_base(x, integral=False)
    level_cap = default_level_cap(field) if level_cap is None else level_cap
    if k > level_cap:
        raise LevelTooHigh(f"level {k} exceeds the cap {level_cap}")
    d = field.degree
    w = np.zeros((1, d), dtype=np.int64)
    power = np.zeros((1, d), dtype=np.int64)
    power[0, 0] = 1
    top = field.alphabet_max
    for j in range(k):
        blocks = []
        for a in range(top):
            blocks.append(w + a * power)
        keep = _top_digit_mask(field, x, w, j)
        blocks.append(w[keep] + top * power)
        w = _as_safe(np.concatenate(blocks))
        power = mul_beta_rows(field, power)
    w = _sorted_rows(w)
    addrs = None
    if x.den == 1:
        depth = k if addr_depth is None else addr_depth
        base = w + np.array(x.num, dtype=w.dtype)
        addrs = address_rows(field, base, depth)
    return TileCloud(field, x, k, "rauzy", x, w, addrs)


def integral_cloud(
    x: FieldElement, k: int, level_cap: int | None = None, addr_depth: int | None = None
) -> TileCloud:
    """The exact set beta^k (T^-k(x) cap Z[beta]) for x in Z[beta] cap [0,1)."""
    field = x.field
    _check_base(x, integral=True)
    level_cap = default_level_cap(field) if level_cap is None else level_cap
    if k > level_cap:
        raise LevelTooHigh(f"level {k} exceeds the cap {level_cap}")
    c0 = field._c[0]
    ys = np.array([x.num], dtype=np.int64)
    one_f = np.array(field._bpow_f)
    for _ in range(k):
        blocks = []
        for a in field.alphabet:
            cand = ys.copy()
            cand[:, 0] = cand[:, 0] + a
            ok = cand[:, 0] % c0 == 0
            if not ok.any():
                continue
            y1 = div_beta_rows(field, cand[ok])
            vals = np.asarray(y1, dtype=float) @ one_f
            mag = np.abs(np.asarray(y1, dtype=float)) @ one_f
            err = mag * 1e-12 + 1e-300
            keep = vals < 1 - err
            for i in np.nonzero(np.abs(vals - 1) <= err)[0]:
                keep[i] = FieldElement(field, tuple(int(v) for v in y1[i])) < 1
            blocks.append(y1[keep])
        ys = np.concatenate(blocks) if blocks else np.zeros((0, field.degree), dtype=np.int64)
    zs = ys
    for _ in range(k):
        zs = mul_beta_rows(field, zs)
    w = zs - np.array(x.num, dtype=zs.dtype)
    w = _sorted_rows(w)
    depth = k if addr_depth is None else addr_depth
    addrs = address_rows(field, w + np.array(x.num, dtype=w.dtype), depth)
    return TileCloud(field, x, k, "integral", x, w, addrs)


def translation_identity_check(
    x: FieldElement, v: FieldElement, k: int, parry: ParryData
) -> bool:
    """Exact check of beta^k T^-k(x) - x == beta^k T^-k(v) - v for x in [v, v_hat)."""
    if v not in parry.successor:
        raise WrongInterval(f"{v!r} is not in V")
    if not (v <= x < parry.hat(v)):
        raise WrongInterval(f"{x!r} is not in [{v!r}, {parry.hat(v)!r})")
    return rauzy_cloud(x, k).keys() == rauzy_cloud(v, k).keys()


@dataclass(frozen=True)
class HausdorffReport:
    bound: Fraction
    measured: float

    @property
    def holds(self) -> bool:
        return self.measured <= float(self.bound) * (1 + 1e-9) + 1e-12


def beta_power_norm_upper(field: BetaField, k: int) -> Fraction:
    """Rational upper bound of the Euclidean norm of delta'(beta^k)."""
    total = Fraction(0)
    for place in field._places:
        m2 = place.center_re**2 + place.center_im**2
        mod = _dyadic_up(_sqrt_up(m2) + place.radius, 64)
        total += mod ** (2 * k)
    return _dyadic_up(_sqrt_up(total), 64)


def hausdorff_defect(cloud_k: TileCloud, cloud_k1: TileCloud) -> HausdorffReport:
    """A-priori bound (ceil(beta)-1) |delta'(beta^k)| and the measured one-sided defect.

    The second cloud is level k+1 of the same tile, or the same cloud (defect 0).

    The metric is Euclidean on the real coordinates of the non-dominant places.
    """
    if (
        cloud_k1.level - cloud_k.level not in (0, 1)
        or cloud_k.base_point != cloud_k1.base_point
        or cloud_k.kind != cloud_k1.kind
        or cloud_k.field is not cloud_k1.field
    ):
        raise LevelMismatch("clouds are not consecutive levels of one tile")
    field = cloud_k.field
    bound = field.alphabet_max * beta_power_norm_upper(field, cloud_k.level)
    a, b = cloud_k.arch_coords(), cloud_k1.arch_coords()
    if len(a) == 0 or len(b) == 0:
        return HausdorffReport(bound, 0.0)
    dist, _ = cKDTree(a).query(b)
    return HausdorffReport(bound, float(dist.max()))


def lattice_translates(parry: ParryData, radius: int) -> list[FieldElement]:
    """Integer combinations of the L basis with coefficients in [-radius, radius]."""
    gens = parry.L_elements()
    out = []
    for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(gens)):
        t = parry.field.zero
        for c, g in zip(coeffs, gens):
            t = t + g * c
        out.append(t)
    return out


def periodic_patch(
    parry: ParryData,
    translates: Sequence[FieldElement],
    k: int,
    allow_without_qm: bool = False,
) -> list[TileCloud]:
    """Translates t + R(0) at level k, one cloud per t in L."""
    if not parry.qm_holds:
        msg = "the periodic collection is only locally finite when (QM) holds"
        if not allow_without_qm:
            raise QMViolated(msg)
        warnings.warn(msg)
    base = rauzy_cloud(parry.field.zero, k)
    return [base.translated(t) for t in translates]


def tile_hulls(parry: ParryData, iterations: int = 200) -> dict:
    """Outer box of pi'(R(u)) - delta'(u) for every u in V, as (lo, hi) coordinate arrays.

    Real places use the set equation R(u) - u' = union of a + beta'(R(u1) - u1'),
    iterated from a hull that contains every tile (each iterate stays an outer
    hull).  Complex places use the radius (ceil(beta)-1)/(1-|beta^(sigma)|).
    """
    field = parry.field
    radii = [r + 1e-9 for r in conj_radius_upper(field)]
    moves = {}
    for u in parry.V:
        lst = []
        for a in field.alphabet:
            y = (u + a).div_beta()
            if y < 1:
                lst.append((a, parry.interval_of(y)))
        moves[u] = lst
    per_place = []
    for pi, (place, rad) in enumerate(zip(field._places, radii)):
        if not place.real:
            per_place.append(_complex_hull(parry, moves, pi, rad, iterations))
            continue
        bp = place.center.real
        ext = {u: (-rad, rad) for u in parry.V}
        for _ in range(iterations):
            new = {}
            for u in parry.V:
                lo, hi = math.inf, -math.inf
                for a, u1 in moves[u]:
                    m, M = ext[u1]
                    c1, c2 = a + bp * m, a + bp * M
                    lo, hi = min(lo, c1, c2), max(hi, c1, c2)
                new[u] = (lo, hi)
            ext = new
        per_place.append({u: ([lo - 1e-12], [hi + 1e-12]) for u, (lo, hi) in ext.items()})
    out = {}
    for u in parry.V:
        lo = [v for pp in per_place for v in pp[u][0]]
        hi = [v for pp in per_place for v in pp[u][1]]
        out[u] = (np.array(lo), np.array(hi))
    return out


def _complex_hull(parry, moves, pi: int, rad: float, iterations: int) -> dict:
    """Disks D_u containing R(u) - u' at a complex place, refined by the set equation.

    Each new D_u is a disk around the midpoint of the image centres that contains
    every a + bc*D_u1, so containment is preserved at every step.
    """
    bc = complex(parry.field._places[pi].center)
    disks = {u: (0j, rad) for u in parry.V}
    for _ in range(iterations):
        new = {}
        for u in parry.V:
            imgs = [(a + bc * disks[u1][0], abs(bc) * disks[u1][1]) for a, u1 in moves[u]]
            re = [c.real for c, _ in imgs]
            im = [c.imag for c, _ in imgs]
            mid = complex(0.5 * (min(re) + max(re)), 0.5 * (min(im) + max(im)))
            r = max(abs(c - mid) + q for c, q in imgs)
            new[u] = (mid, r)
        disks = new
    # one exact expansion: R(u) - u' lies in the union of w' + bc^m D_(u_m) over the level-m cloud
    m = 1
    while (parry.field.beta_float ** (m + 1)) * len(parry.V) < 4000:
        m += 1
    tight = {}
    for u in parry.V:
        cloud = rauzy_cloud(u, m, level_cap=m)
        us = subtile_intervals(parry, cloud)
        pw = parry.field._conj_pows[pi]
        pts = np.asarray(cloud.nums, dtype=float) @ pw
        cs = pts + np.array([bc**m * disks[v][0] for v in us])
        rs = abs(bc) ** m * np.array([disks[v][1] for v in us])
        mid = complex(0.5 * (cs.real.min() + cs.real.max()), 0.5 * (cs.imag.min() + cs.imag.max()))
        tight[u] = (mid, float(np.max(np.abs(cs - mid) + rs)))
    disks = tight
    out = {}
    for u, (c, r) in disks.items():
        r = r * (1 + 1e-12) + 1e-12
        out[u] = ([c.real - r, c.imag - r], [c.real + r, c.imag + r])
    return out


def subtile_intervals(parry: ParryData, cloud: TileCloud) -> list[FieldElement]:
    """For each cloud point z the u in V with beta^-k z in [u, u_hat)."""
    field = parry.field
    k = cloud.level
    vs = list(parry.V)
    vf = np.array([float(v) for v in vs])
    values = (_row_values(field, cloud.nums) + float(cloud.offset)) / field.beta_float**k
    idx = np.searchsorted(vf, values, side="right") - 1
    scale = field.power(-k)
    out = []
    for i, (j, val) in enumerate(zip(idx, values)):
        if np.min(np.abs(vf - val)) < 1e-9 * max(1.0, abs(val)):
            z = cloud.offset + FieldElement(field, tuple(int(t) for t in cloud.nums[i]))
            out.append(parry.interval_of(z * scale))
        else:
            out.append(vs[max(int(j), 0)])
    return out


def piece_boxes(parry: ParryData, cloud: TileCloud, hulls: dict | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Certified outer boxes (lo, hi) of the pieces z' + beta'^k (R(u) - u') of a cloud."""
    field = parry.field
    hulls = hulls or tile_hulls(parry)
    k = cloud.level
    coords = cloud.arch_coords()
    us = subtile_intervals(parry, cloud)
    lo = np.array([hulls[u][0] for u in us]).reshape(len(us), -1)
    hi = np.array([hulls[u][1] for u in us]).reshape(len(us), -1)
    col = 0
    los, his = [], []
    for place in field._places:
        if place.real:
            s = place.center.real**k
            a, b = s * lo[:, col], s * hi[:, col]
            los.append(np.minimum(a, b))
            his.append(np.maximum(a, b))
            col += 1
        else:
            s = complex(place.center) ** k
            c = s * (0.5 * (lo[:, col] + hi[:, col]) + 0.5j * (lo[:, col + 1] + hi[:, col + 1]))
            r = abs(s) * 0.5 * (hi[:, col] - lo[:, col]) * (1 + 1e-12)
            los.extend([c.real - r, c.imag - r])
            his.extend([c.real + r, c.imag + r])
            col += 2
    L = np.column_stack(los) + coords
    U = np.column_stack(his) + coords
    return L, U


def diameter_radius(field: BetaField, x: FieldElement) -> list[float]:
    """Per place |x^(sigma)| + (ceil(beta)-1)/(1-|beta^(sigma)|)."""
    return [abs(x.conj(p)) + r for p, r in zip(field._places, field.digit_radius())]


def level_for_points(field: BetaField, target: int = 10**6) -> int:
    """Largest level whose cloud size stays below ``target`` (size grows like beta^k)."""
    return max(0, int(math.log(target) / math.log(field.beta_float)))
