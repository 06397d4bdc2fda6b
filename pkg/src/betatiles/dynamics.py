"""The beta-transformation, Parry data and beta-integers."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import CycleNotFound, OutOfDomain
from .field import BetaField, FieldElement

CYCLE_CAP = 10_000


def _check_unit_interval(x: FieldElement) -> None:
    if x.sign() < 0 or x >= 1:
        raise OutOfDomain(f"{x!r} is not in [0,1)")


def t_digit(x: FieldElement) -> tuple[int, FieldElement]:
    """(floor(beta x), T(x)) without the domain check."""
    y = x.mul_beta()
    a = y.floor()
    return a, y - a


def t_step(x: FieldElement) -> FieldElement:
    """T(x) = beta x - floor(beta x) on [0,1)."""
    _check_unit_interval(x)
    return t_digit(x)[1]


def t_power(x: FieldElement, n: int) -> FieldElement:
    """T^n(x), no domain check (x must lie in [0,1))."""
    for _ in range(n):
        x = t_digit(x)[1]
    return x


def greedy_expansion(x: FieldElement, n: int) -> tuple[int, ...]:
    """First n digits a_k = floor(beta T^(k-1)(x))."""
    _check_unit_interval(x)
    digits = []
    for _ in range(n):
        a, x = t_digit(x)
        digits.append(a)
    return tuple(digits)


def qg_digit(x: FieldElement) -> tuple[int, FieldElement]:
    """Quasi-greedy step on (0,1]: digit ceil(beta x) - 1, value in (0,1]."""
    y = x.mul_beta()
    fl = y.floor()
    a = fl - 1 if y == fl else fl
    return a, y - a


def hnf(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of an integer matrix (zero rows dropped)."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[int]] = []
    col = 0
    while mat and col < ncols:
        nz = [r for r in mat if r[col] != 0]
        if not nz:
            col += 1
            continue
        # Euclid on the column until a single nonzero entry remains
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(ncols):
                    r[j] -= q * piv[j]
            nz = [r for r in nz if r[col] != 0]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-v for v in piv]
        mat = [r for r in mat if r is not piv and any(r)]
        out.append(piv)
        col += 1
    # reduce entries above each pivot
    for i, row in enumerate(out):
        pc = next(j for j, v in enumerate(row) if v)
        for upper in out[:i]:
            q = upper[pc] // row[pc]
            if q:
                for j in range(ncols):
                    upper[j] -= q * row[j]
    return [tuple(r) for r in out]


@dataclass(frozen=True)
class ParryData:
    """Orbit of 1 under the quasi-greedy map and everything derived from it."""

    field: BetaField
    d_one: tuple[tuple[int, ...], tuple[int, ...]]
    quasi_greedy: tuple[tuple[int, ...], tuple[int, ...]]
    orbit: tuple[FieldElement, ...]
    V: tuple[FieldElement, ...]
    V_hat: tuple[FieldElement, ...]
    successor: dict = dc_field(hash=False, compare=False)
    L_generators: tuple[tuple[int, ...], ...] = ()
    L_rank: int = 0
    qm_holds: bool = False

    @property
    def simple_parry(self) -> bool:
        return not self.d_one[1]

    def hat(self, v: FieldElement) -> FieldElement:
        return self.successor[v]

    def interval_of(self, x: FieldElement) -> FieldElement:
        """The v in V with x in [v, v_hat)."""
        for v in reversed(self.V):
            if x >= v:
                return v
        raise OutOfDomain(f"{x!r} is below 0")

    def L_elements(self) -> list[FieldElement]:
        return [self.field.element(g) for g in self.L_generators]


def _eventually_periodic(step, start, cap: int):
    """Iterate ``step`` (returning (digit, next)) until a state repeats."""
    seen: dict = {}
    states, digits = [], []
    x = start
    while x not in seen:
        if len(states) >= cap:
            raise CycleNotFound(f"no cycle within {cap} steps")
        seen[x] = len(states)
        states.append(x)
        a, x = step(x)
        digits.append(a)
    return states, digits, seen[x]


def greedy_expansion_of_one(beta: BetaField, cap: int = CYCLE_CAP):
    """d(1) as (preperiod, period); the period is empty when d(1) is finite."""
    one = beta.one
    digits = []
    a, x = t_digit(one)
    digits.append(a)
    seen = {}
    pos = 1
    while x:
        if x in seen:
            i = seen[x]
            return tuple(digits[:i]), tuple(digits[i:])
        if pos > cap:
            raise CycleNotFound(f"no cycle within {cap} steps")
        seen[x] = pos
        a, x = t_digit(x)
        digits.append(a)
        pos += 1
    return tuple(digits), ()


def parry_data(beta: BetaField, cap: int = CYCLE_CAP) -> ParryData:
    states, digits, loop = _eventually_periodic(qg_digit, beta.one, cap)
    quasi = (tuple(digits[:loop]), tuple(digits[loop:]))
    d_one = greedy_expansion_of_one(beta, cap)
    v_hat = sorted_by_value(list(set(states)))
    vset = set(v_hat) | {beta.zero}
    vset.discard(beta.one)
    V = sorted_by_value(list(vset))
    successor = {}
    for v in V:
        successor[v] = next(y for y in v_hat if y > v)
    gens = [tuple((y - beta.one).num) for y in v_hat]
    basis = hnf(gens)
    return ParryData(
        field=beta,
        d_one=d_one,
        quasi_greedy=quasi,
        orbit=tuple(states),
        V=tuple(V),
        V_hat=tuple(v_hat),
        successor=successor,
        L_generators=tuple(basis),
        L_rank=len(basis),
        qm_holds=len(basis) == beta.degree - 1,
    )


def sorted_by_value(items) -> list[FieldElement]:
    return sorted(items, key=functools.cmp_to_key(lambda a, b: a._cmp(b)))


def t_preimages(x: FieldElement, restrict_integral: bool = False) -> list[FieldElement]:
    """All (a + x)/beta in [0,1), a in the alphabet, in increasing order."""
    _check_unit_interval(x)
    return _preimages(x, restrict_integral)


def _preimages(x: FieldElement, restrict_integral: bool = False) -> list[FieldElement]:
    out = []
    for a in x.field.alphabet:
        y = (x + a).div_beta()
        if y >= 1:
            break
        if restrict_integral and y.den != 1:
            continue
        out.append(y)
    return out


def beta_substitution(parry: ParryData) -> dict[FieldElement, tuple[FieldElement, ...]]:
    """sigma(x) = 1^(ceil(beta x)-1) followed by beta x - (ceil(beta x)-1), on V_hat."""
    one = parry.field.one
    sigma = {}
    for x in parry.V_hat:
        m, rest = qg_digit(x)
        sigma[x] = (one,) * m + (rest,)
    return sigma


def beta_integers(beta: BetaField, count: int, parry: ParryData | None = None):
    """The first ``count`` non-negative beta-integers and the distance word between them."""
    if count < 1:
        raise OutOfDomain("count must be >= 1")
    parry = parry or parry_data(beta)
    sigma = beta_substitution(parry)
    word = [beta.one]
    while len(word) < count - 1:
        new = [letter for x in word for letter in sigma[x]]
        if len(new) == len(word):
            break
        word = new
    word = word[: count - 1]
    points = [beta.zero]
    for w in word:
        points.append(points[-1] + w)
    return points, word


def is_beta_integer(z: FieldElement) -> bool:
    """z in N_beta, i.e. T^k(beta^-k z) = 0 for the least k with beta^-k z < 1."""
    if z.sign() < 0:
        return False
    k = 0
    y = z
    while y >= 1:
        y = y.div_beta()
        k += 1
    return not t_power(y, k)
