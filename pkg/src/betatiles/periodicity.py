"""Purely periodic expansions, property (W), exclusive points and gamma(beta)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .dynamics import ParryData, sorted_by_value, t_digit, t_power
from .errors import BadParameters, ConstructionFailed, IterationCapExceeded, LevelTooLow, OutOfDomain
from .field import BetaField, FieldElement, make_beta
from .lattice import conj_radius_upper, scan_box
from .tiles import LEVEL_CAP, piece_boxes, rauzy_cloud, tile_hulls

STATE_CAP = 100_000


@dataclass(frozen=True)
class PurityReport:
    x: FieldElement
    purely_periodic: bool
    preperiod: int
    period: int
    orbit: tuple[FieldElement, ...]


def is_purely_periodic(x: FieldElement, cap: int = STATE_CAP) -> PurityReport:
    """Iterate T exactly until a state repeats; x is purely periodic iff it recurs."""
    if x.sign() < 0 or x >= 1:
        raise OutOfDomain(f"{x!r} is not in [0,1)")
    seen: dict[FieldElement, int] = {}
    orbit = []
    y = x
    while y not in seen:
        if len(orbit) >= cap:
            raise IterationCapExceeded(f"orbit of {x!r} exceeds {cap} states")
        seen[y] = len(orbit)
        orbit.append(y)
        y = t_digit(y)[1]
    start = seen[y]
    return PurityReport(x, start == 0, start, len(orbit) - start, tuple(orbit))


class PurityOracle:
    """Shared memo of classified states for scanning many rationals.

    Every state ever visited is stored with its verdict.  Reaching a known state
    other than the start proves the start is not purely periodic: a periodic
    start would lie on the (fully memoised) cycle of that state.
    """

    def __init__(self, beta: BetaField, cap: int = STATE_CAP):
        self.beta = beta
        self.cap = cap
        self.memo: dict[FieldElement, bool] = {}

    def __call__(self, x: FieldElement) -> bool:
        known = self.memo.get(x)
        if known is not None:
            return known
        index: dict[FieldElement, int] = {}
        orbit = []
        y = x
        while True:
            if y in index:
                start = index[y]
                for i, s in enumerate(orbit):
                    self.memo[s] = i >= start
                return start == 0
            if y in self.memo:
                for s in orbit:
                    self.memo[s] = False
                return False
            if len(orbit) >= self.cap:
                raise IterationCapExceeded(f"orbit of {x!r} exceeds {self.cap} states")
            index[y] = len(orbit)
            orbit.append(y)
            y = t_digit(y)[1]


def pur_set_integral(beta: BetaField) -> list[FieldElement]:
    """P = Pur(beta) cap Z[beta], by a conjugate-bounded scan of Z[beta] cap [0,1)."""
    rows = scan_box(beta, 0.0, 1.0, conj_radius_upper(beta))
    out = []
    for row in rows:
        x = FieldElement(beta, tuple(int(t) for t in row))
        if x.sign() < 0 or x >= 1:
            continue
        if is_purely_periodic(x).purely_periodic:
            out.append(x)
    return sorted_by_value(out)


# -- property (W) ----------------------------------------------------------------


def _zero_preimages(beta: BetaField, depth: int) -> list[FieldElement]:
    """T^-depth(0) in increasing order."""
    cloud = rauzy_cloud(beta.zero, depth, level_cap=max(depth, 1))
    scale = beta.power(-depth)
    return sorted_by_value([p * scale for p in cloud.points])


@dataclass
class WReport:
    """Witnesses x -> (y, n) with T^n(x+y) = T^n(y) = 0; None marks an unknown x."""

    witnesses: dict = dc_field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.witnesses.values())


def _w_search(x: FieldElement, y_depth: int, n_cap: int, bound: FieldElement, cache: dict):
    beta = x.field
    for n in range(1, n_cap + 1):
        m = min(n, y_depth)
        if m not in cache:
            cache[m] = _zero_preimages(beta, m)
        for y in cache[m]:
            if y >= bound:
                break
            if not t_power(x + y, n):
                return y, n
    return None


def check_W(
    beta: BetaField, y_depth: int = 6, n_cap: int = 12, P: list[FieldElement] | None = None
) -> WReport:
    """Search (W) witnesses for every x in P in the order n, then depth, then digits."""
    P = pur_set_integral(beta) if P is None else P
    report = WReport()
    cache: dict = {}
    for x in P:
        if not x:
            report.witnesses[x] = (beta.zero, 0)
            continue
        report.witnesses[x] = _w_search(x, y_depth, n_cap, 1 - x, cache)
    return report


@dataclass(frozen=True)
class ExclusivePoint:
    z: FieldElement
    n: int
    steps: tuple[tuple[FieldElement, int], ...]
    identities: dict

    @property
    def verified(self) -> bool:
        return all(v == 0 for v in self.identities.values())


def exclusive_point(
    beta: BetaField,
    P: list[FieldElement] | None = None,
    y_depth: int = 6,
    n_cap: int = 12,
    max_rounds: int = 64,
) -> ExclusivePoint:
    """Build z with T^n(x + beta^-n z) = 0 for all x in P by successive (W) witnesses.

    Keeps Y and K such that the images T^K(x + Y), x in P, are known.  Each round
    takes a nonzero image s, finds (y, k) with T^k(s+y) = T^k(y) = 0 and appends
    beta^-K y to Y, provided T^K stays additive on every x + Y.  Every round sends
    s and 0 to 0, so the number of nonzero images drops and the loop ends.
    """
    P = pur_set_integral(beta) if P is None else P
    Y, K = beta.zero, 0
    steps = []
    images = {x: x for x in P}
    cache: dict = {}
    for _ in range(max_rounds):
        nonzero = sorted_by_value({s for s in images.values() if s})
        if not nonzero:
            break
        progress = False
        for s in nonzero:
            found = _exclusive_round(beta, P, images, s, Y, K, y_depth, n_cap, cache)
            if found is not None:
                y, k, new_images = found
                Y = Y + y * beta.power(-K)
                K += k
                images = new_images
                steps.append((y, k))
                progress = True
                break
        if not progress:
            raise ConstructionFailed("no admissible witness keeps T^K additive on P + Y")
    else:
        raise ConstructionFailed("round cap reached")
    z = Y * beta.power(K)
    identities = {x: t_power(x + Y, K) for x in P}
    return ExclusivePoint(z, K, tuple(steps), identities)


def _exclusive_round(beta, P, images, s, Y, K, y_depth, n_cap, cache):
    limit = min(1 - t for t in images.values())
    scale = beta.power(-K)
    for n in range(1, n_cap + 1):
        m = min(n, y_depth)
        if m not in cache:
            cache[m] = _zero_preimages(beta, m)
        for y in cache[m]:
            if not y:
                continue
            if y >= limit:
                break
            if t_power(s + y, n):
                continue
            new_images = {}
            ok = True
            for x, img in images.items():
                u = x + Y + y * scale
                if u >= 1 or t_power(u, K) != img + y:
                    ok = False
                    break
                new_images[x] = t_power(img + y, n)
            if ok:
                return y, n, new_images
    return None


# -- gamma -----------------------------------------------------------------------


@dataclass(frozen=True)
class GammaResult:
    method: str
    lower_bound: Fraction
    exact_value: FieldElement | None = None
    enclosure: tuple[Fraction, Fraction] | None = None
    exact: bool = False
    positive: bool | None = None
    scan_frontier: tuple | None = None
    non_pp: tuple[Fraction, ...] = ()
    tested: int = 0
    notes: tuple[str, ...] = ()


def gamma_quadratic(a: int, b: int) -> GammaResult:
    """max{0, 1 - (b-1) b beta / (beta^2 - b^2)} for beta^2 = a beta + b, a >= b >= 1."""
    if b < 1 or a < b:
        raise BadParameters("need a >= b >= 1")
    beta = make_beta((1, -a, -b))
    bt = beta.beta
    value = 1 - (bt * ((b - 1) * b)) / (bt * bt - b * b)
    positive = (b - 1) * b < a
    if not positive:
        value = beta.zero
    lo, hi = value.interval()
    exact = math.gcd(a, b) == 1
    notes = []
    if not exact:
        notes.append("gcd(a,b) > 1: only a lower bound is established")
    if (a, b) == (2, 2):
        notes.append("numerical experiments suggest gamma = 1 here; open")
    return GammaResult(
        method="quadratic-formula",
        lower_bound=lo,
        exact_value=value,
        enclosure=(lo, hi),
        exact=exact,
        positive=positive,
        notes=tuple(notes),
    )


def farey(max_den: int) -> Iterator[Fraction]:
    """Fractions in [0,1] with denominator <= max_den, increasing."""
    a, b, c, d = 0, 1, 1, max_den
    yield Fraction(0)
    while c <= max_den:
        yield Fraction(c, d)
        k = (max_den + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b


def has_positive_real_conjugate(beta: BetaField) -> bool:
    return any(p.real and p.center_re - p.radius > 0 for p in beta._places)


def gamma_scan(
    beta: BetaField, max_denominator: int, stop_at_first: bool = True, upper: Fraction | None = None
) -> GammaResult:
    """Farey scan over p/q with gcd(q, N) = 1 for pure periodicity.

    The frontier is the first non-purely-periodic rational; every tested
    rational below it is purely periodic.
    """
    if max_denominator < 2:
        raise BadParameters("max_denominator must be >= 2")
    norm = abs(beta.norm)
    oracle = PurityOracle(beta)
    notes = []
    if has_positive_real_conjugate(beta):
        notes.append("positive real conjugate: Pur(beta) cap Q = {0}, gamma = 0")
    non_pp: list[Fraction] = []
    tested = 0
    for r in farey(max_denominator):
        if r >= 1 or (upper is not None and r >= upper):
            break
        if math.gcd(r.denominator, norm) != 1:
            continue
        tested += 1
        if not oracle(beta.rational(r)):
            non_pp.append(r)
            if stop_at_first:
                break
    first = non_pp[0] if non_pp else None
    frontier = first if first is not None else Fraction(1)
    return GammaResult(
        method="scan",
        lower_bound=Fraction(0) if first is not None and has_positive_real_conjugate(beta) else frontier,
        scan_frontier=(frontier, first),
        non_pp=tuple(non_pp),
        tested=tested,
        notes=tuple(notes),
    )


# -- slice sandwich --------------------------------------------------------------


def _gamma_inf(v_conj: float, v: float, v_hat: float, lo: float, hi: float) -> float:
    """inf {x in [v, v_hat): v' - x outside [lo, hi]}, or 1 if empty."""
    if lo > hi:
        return v
    if v_conj - hi > v:
        return v
    start = max(v, v_conj - lo)
    return start if start < v_hat else 1.0


def gamma_lower_bound_thm5(parry: ParryData, level: int) -> GammaResult:
    """Sandwich [lo, hi] for inf({1} cup {x in Q cap [v, v_hat): delta'(v - x) escapes R(v)}).

    Quadratic bases only: slices of quadratic tiles are intervals, so the fibre
    covered by every address cylinder is bracketed between an inner interval and
    the hull of the level-``level`` pieces.
    """
    field = parry.field
    if field.degree != 2:
        raise LevelTooLow("the slice sandwich is implemented for quadratic bases only")
    hulls = tile_hulls(parry)
    lo_inf, hi_inf = 1.0, 1.0
    notes = []
    for v in parry.V:
        cloud = rauzy_cloud(v, level, level_cap=max(level, LEVEL_CAP))
        Lb, Ub = piece_boxes(parry, cloud, hulls)
        L, U = Lb[:, 0], Ub[:, 0]
        addr = cloud.addresses
        if addr is None or addr.shape[1] == 0:
            keys = np.zeros(len(L), dtype=np.int64)
        else:
            weights = abs(field.norm) ** np.arange(addr.shape[1])
            keys = addr @ weights
        order = np.argsort(keys, kind="stable")
        keys_s = keys[order]
        splits = np.nonzero(np.diff(keys_s))[0] + 1
        groups = np.split(order, splits)
        expected = abs(field.norm) ** level if field.norm not in (1, -1) else 1
        if len(groups) != expected:
            notes.append(f"only {len(groups)} of {expected} address cylinders populated for v={v!r}")
        inner_lo = max(float(U[g].min()) for g in groups)
        inner_hi = min(float(L[g].max()) for g in groups)
        outer_lo = max(float(L[g].min()) for g in groups)
        outer_hi = min(float(U[g].max()) for g in groups)
        v_c = v.conj(0)
        v_hat = float(parry.hat(v))
        lo_inf = min(lo_inf, _gamma_inf(v_c, float(v), v_hat, inner_lo, inner_hi))
        hi_inf = min(hi_inf, _gamma_inf(v_c, float(v), v_hat, outer_lo, outer_hi))
    if hi_inf >= 1.0:
        notes.append("no diagonal rational escapes at this level")
    lo_q = Fraction(lo_inf).limit_denominator(10**12) - Fraction(1, 10**9)
    hi_q = Fraction(hi_inf).limit_denominator(10**12) + Fraction(1, 10**9)
    return GammaResult(
        method="thm5-numeric",
        lower_bound=max(Fraction(0), lo_q),
        enclosure=(max(Fraction(0), lo_q), min(Fraction(1), hi_q)),
        notes=tuple(notes),
    )
