"""Exact arithmetic in Q(beta) for a Pisot number beta.

Elements are stored as integer numerator vectors over the power basis
``1, beta, ..., beta^(d-1)`` plus a positive common denominator.  Equality is
exact (vector equality).  Real inequalities are decided against a dyadic
enclosure of the dominant root that is refined on demand, so a comparison
never depends on floating point alone.

Non-dominant archimedean places are certified with root disks: every
approximate root ``z`` of the (squarefree) minimal polynomial carries a
rational radius ``r = n |p(z)/p'(z)|``, which is known to contain a root.
Pairwise disjoint disks therefore isolate the conjugates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
import sympy
from mpmath import iv

from .errors import (
    BetaTilesError,
    DegreeTooSmall,
    NotIntegral,
    NotIrreducible,
    NotPisot,
    PrecisionExhausted,
)

DEFAULT_BITS = 128
REFINE_ROUNDS = 16
Z_BETA_INV_CAP = 64

_BASE_SIGN_BITS = 64
_FLOAT_REL_ERR = 1e-12


def parse_poly(text: str | Sequence[int]) -> tuple[int, ...]:
    """Parse ``"1,-3,-2"`` (leading coefficient first) into a tuple of ints."""
    if isinstance(text, str):
        parts = [p.strip() for p in text.replace(" ", "").split(",") if p.strip()]
        try:
            return tuple(int(p) for p in parts)
        except ValueError as exc:
            raise BetaTilesError(f"bad polynomial literal {text!r}") from exc
    return tuple(int(c) for c in text)


def _to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    val = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -val if sign else val


def _sqrt_up(q: Fraction, scale_bits: int = 64) -> Fraction:
    """Rational upper bound of sqrt(q) for q >= 0."""
    if q <= 0:
        return Fraction(0)
    scale = 1 << scale_bits
    n, d = q.numerator, q.denominator
    return Fraction(math.isqrt(n * d * scale * scale) + 1, d * scale)


def _sqrt_down(q: Fraction, scale_bits: int = 64) -> Fraction:
    if q <= 0:
        return Fraction(0)
    scale = 1 << scale_bits
    n, d = q.numerator, q.denominator
    return Fraction(math.isqrt(n * d * scale * scale), d * scale)


def _dyadic_up(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-q.numerator * scale) // q.denominator), scale)


def _cpoly_eval(coeffs: Sequence[int], re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    """Horner evaluation of an integer polynomial at a Gaussian rational."""
    a, b = Fraction(0), Fraction(0)
    for c in coeffs:
        a, b = a * re - b * im + c, a * im + b * re
    return a, b


@dataclass(frozen=True)
class Place:
    """A non-dominant archimedean place (one per real root / complex pair)."""

    index: int
    real: bool
    center: complex
    center_re: Fraction
    center_im: Fraction
    radius: Fraction

    @property
    def dim(self) -> int:
        return 1 if self.real else 2


@dataclass(frozen=True)
class _RootDisk:
    re: Fraction
    im: Fraction
    radius: Fraction

    def modulus_bounds(self) -> tuple[Fraction, Fraction]:
        m2 = self.re * self.re + self.im * self.im
        return _sqrt_down(m2) - self.radius, _sqrt_up(m2) + self.radius


def _certify_roots(coeffs: Sequence[int], bits: int) -> list[_RootDisk]:
    """Isolating disks for all roots, or raise if they overlap at this precision."""
    d = len(coeffs) - 1
    deriv = [c * (d - i) for i, c in enumerate(coeffs[:-1])]
    with mpmath.workprec(bits + 32):
        roots = mpmath.polyroots(list(coeffs), maxsteps=400, extraprec=2 * bits)
        approx = [(_to_fraction(mpmath.re(z)), _to_fraction(mpmath.im(z))) for z in roots]
    disks: list[_RootDisk] = []
    for re, im in approx:
        for attempt in (0, 1):
            pr, pi = _cpoly_eval(coeffs, re, im)
            dr, di = _cpoly_eval(deriv, re, im)
            den = dr * dr + di * di
            if den == 0:
                raise PrecisionExhausted("derivative vanishes at an approximate root")
            r2 = Fraction(d * d) * (pr * pr + pi * pi) / den
            radius = _dyadic_up(_sqrt_up(r2), bits + 32)
            # a disk meeting the real axis is re-centred on it; it then holds a real root
            if attempt == 0 and im != 0 and abs(im) <= radius:
                im = Fraction(0)
                continue
            break
        disks.append(_RootDisk(re, im, radius))
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            a, b = disks[i], disks[j]
            dist2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
            if dist2 <= (a.radius + b.radius) ** 2:
                raise PrecisionExhausted("root disks overlap")
    return disks


class BetaField:
    """A validated Pisot base beta with its number field Q(beta).

    ``min_poly`` is given leading coefficient first, e.g. ``(1, -3, -2)`` for
    ``x^2 - 3x - 2``.  Construction rejects reducible polynomials and
    non-Pisot roots.
    """

    def __init__(self, min_poly: str | Sequence[int], precision_bits: int = DEFAULT_BITS):
        poly = parse_poly(min_poly)
        if len(poly) < 3:
            raise DegreeTooSmall(f"degree must be >= 2, got {len(poly) - 1}")
        if poly[0] != 1:
            raise BetaTilesError("minimal polynomial must be monic")
        if poly[-1] == 0:
            raise NotIrreducible("polynomial is divisible by x")
        x = sympy.symbols("x")
        if not sympy.Poly(list(poly), x, domain="ZZ").is_irreducible:
            raise NotIrreducible(f"{_poly_str(poly)} factors over the rationals")

        self.min_poly = poly
        self.degree = d = len(poly) - 1
        self.precision_bits = int(precision_bits)
        # c[i] is the coefficient of x^i (constant first), without the leading 1
        self._c = tuple(poly[d - i] for i in range(d))
        # beta^d = sum red[i] beta^i
        self._red = tuple(-ci for ci in self._c)
        self.norm = (-1) ** d * self._c[0]

        self._places, dominant = self._validate_roots()
        self._dominant_disk = dominant
        self._dyadic: dict[int, int] = {}
        self._pow_cache: dict[int, tuple[list[int], list[int]]] = {}
        with mpmath.workprec(self.precision_bits + 32):
            beta_mp = mpmath.findroot(
                lambda t: mpmath.polyval(list(poly), t), mpmath.mpf(dominant.re.numerator) / dominant.re.denominator
            )
            self._beta_mp = beta_mp
        self.beta_float = float(self._beta_mp)
        self._bpow_f = [float(self._beta_mp**i) for i in range(d)]
        self.alphabet_max = math.floor(self.beta_float)
        # floor is decided exactly: beta is irrational, so only the float needs checking
        if not (self.alphabet_max < self.beta_interval()[0] and self.beta_interval()[1] < self.alphabet_max + 1):
            self.alphabet_max = self.floor(self.beta)
        self._conj_pows = [
            np.array([p.center**i for i in range(d)], dtype=complex) for p in self._places
        ]

    # -- validation -----------------------------------------------------------

    def _validate_roots(self) -> tuple[list[Place], _RootDisk]:
        bits = self.precision_bits
        for _ in range(8):
            try:
                disks = _certify_roots(self.min_poly, bits)
            except PrecisionExhausted:
                bits *= 2
                continue
            bounds = [disk.modulus_bounds() for disk in disks]
            if any(lo <= 1 <= hi for lo, hi in bounds):
                bits *= 2
                continue
            big = [disk for disk, (lo, _) in zip(disks, bounds) if lo > 1]
            if len(big) != 1:
                raise NotPisot(f"{len(big)} roots of {_poly_str(self.min_poly)} lie outside the unit disk")
            dom = big[0]
            if dom.im != 0 or dom.re <= 0:
                raise NotPisot("the root of modulus > 1 is not a positive real number")
            places = []
            for disk in disks:
                if disk is dom or disk.im < 0:
                    continue
                places.append(
                    Place(
                        index=len(places),
                        real=disk.im == 0,
                        center=complex(float(disk.re), float(disk.im)),
                        center_re=disk.re,
                        center_im=disk.im,
                        radius=disk.radius,
                    )
                )
            return places, dom
        raise NotPisot("could not separate the root moduli from 1")

    # -- basic data -------------------------------------------------------------

    @property
    def places(self) -> list[Place]:
        return list(self._places)

    @property
    def unit(self) -> bool:
        return abs(self.norm) == 1

    @property
    def arch_dim(self) -> int:
        """Real dimension of the non-dominant archimedean space."""
        return sum(p.dim for p in self._places)

    @property
    def alphabet(self) -> range:
        return range(self.alphabet_max + 1)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.degree, 1, True)

    @property
    def one(self) -> "FieldElement":
        return self.integer(1)

    @property
    def beta(self) -> "FieldElement":
        return self.power(1)

    def integer(self, n: int) -> "FieldElement":
        return FieldElement(self, (int(n),) + (0,) * (self.degree - 1), 1, True)

    def power(self, k: int) -> "FieldElement":
        """beta^k for any integer k."""
        x = self.one
        if k >= 0:
            for _ in range(k):
                x = x.mul_beta()
        else:
            for _ in range(-k):
                x = x.div_beta()
        return x

    def element(self, coeffs: Iterable, den: int = 1) -> "FieldElement":
        """Element from constant-first coefficients (ints or Fractions)."""
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > self.degree:
            raise BetaTilesError("too many coefficients")
        fr += [Fraction(0)] * (self.degree - len(fr))
        common = math.lcm(*(f.denominator for f in fr)) if fr else 1
        num = tuple(int(f * common) for f in fr)
        return FieldElement(self, num, common * int(den))

    def rational(self, value) -> "FieldElement":
        return self.element([Fraction(value)])

    def coerce(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise BetaTilesError("elements of different fields")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into Q(beta)")

    def __repr__(self) -> str:
        return f"BetaField({_poly_str(self.min_poly)}, beta~{self.beta_float:.6g})"

    def __eq__(self, other) -> bool:
        return isinstance(other, BetaField) and other.min_poly == self.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    @property
    def label(self) -> str:
        return ",".join(str(c) for c in self.min_poly)

    # -- dominant root enclosure -------------------------------------------------

    def _poly_dyadic_sign(self, m: int, p: int) -> int:
        d = self.degree
        total = 0
        for i, c in enumerate(self.min_poly):
            k = d - i
            total += c * m**k << (p * (d - k))
        return (total > 0) - (total < 0)

    def _dyadic_numerator(self, p: int) -> int:
        """Integer L with L/2^p < beta < (L+1)/2^p."""
        if p in self._dyadic:
            return self._dyadic[p]
        with mpmath.workprec(p + 40):
            approx = mpmath.findroot(lambda t: mpmath.polyval(list(self.min_poly), t), self._beta_mp)
            m = int(mpmath.floor(approx * mpmath.mpf(2) ** p))
        for cand in (m, m - 1, m + 1, m - 2, m + 2):
            if self._poly_dyadic_sign(cand, p) < 0 < self._poly_dyadic_sign(cand + 1, p):
                self._dyadic[p] = cand
                return cand
        # bisection fallback from the certified disk
        lo = math.floor((self._dominant_disk.re - self._dominant_disk.radius) * (1 << p))
        hi = math.ceil((self._dominant_disk.re + self._dominant_disk.radius) * (1 << p))
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._poly_dyadic_sign(mid, p) < 0:
                lo = mid
            else:
                hi = mid
        self._dyadic[p] = lo
        return lo

    def beta_interval(self, bits: int | None = None) -> tuple[Fraction, Fraction]:
        """Rational enclosure ``lo < beta < hi`` of width 2^-bits."""
        p = bits or self.precision_bits
        m = self._dyadic_numerator(p)
        return Fraction(m, 1 << p), Fraction(m + 1, 1 << p)

    def _powers(self, p: int) -> tuple[list[int], list[int]]:
        if p not in self._pow_cache:
            m = self._dyadic_numerator(p)
            d = self.degree
            lo = [m**i << (p * (d - 1 - i)) for i in range(d)]
            hi = [(m + 1) ** i << (p * (d - 1 - i)) for i in range(d)]
            self._pow_cache[p] = (lo, hi)
        return self._pow_cache[p]

    def _bounds(self, num: Sequence[int], p: int) -> tuple[int, int]:
        """Bounds of 2^(p(d-1)) * sum num_i beta^i."""
        lo_p, hi_p = self._powers(p)
        lo = hi = 0
        for n, a, b in zip(num, lo_p, hi_p):
            if n >= 0:
                lo += n * a
                hi += n * b
            else:
                lo += n * b
                hi += n * a
        return lo, hi

    def _float_filter(self, num: Sequence[int]) -> tuple[float, float] | None:
        try:
            terms = [n * b for n, b in zip(num, self._bpow_f)]
        except OverflowError:
            return None
        mag = sum(abs(t) for t in terms)
        if not math.isfinite(mag):
            return None
        return sum(terms), mag * _FLOAT_REL_ERR

    def sign_num(self, num: Sequence[int]) -> int:
        """Sign of sum num_i beta^i, decided exactly."""
        if not any(num):
            return 0
        filt = self._float_filter(num)
        if filt is not None:
            approx, err = filt
            if approx > err:
                return 1
            if approx < -err:
                return -1
        p = _BASE_SIGN_BITS
        for _ in range(REFINE_ROUNDS):
            lo, hi = self._bounds(num, p)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            p *= 2
        raise PrecisionExhausted("sign undecided after the refinement cap")

    def sign(self, x: "FieldElement") -> int:
        return self.sign_num(x.num)

    def floor(self, x: "FieldElement") -> int:
        """Exact floor of the real value of x."""
        num, den = x.num, x.den
        filt = self._float_filter(num)
        if filt is not None:
            approx, err = filt
            lo_f, hi_f = (approx - err) / den, (approx + err) / den
            f = math.floor(lo_f)
            if math.floor(hi_f) == f and lo_f > f:
                return f
            guess = math.floor(approx / den)
        else:
            lo, hi = self._bounds(num, _BASE_SIGN_BITS)
            guess = lo // (den << (_BASE_SIGN_BITS * (self.degree - 1)))
        k = guess
        while True:
            s_low = self.sign_num((num[0] - k * den,) + tuple(num[1:]))
            if s_low < 0:
                k -= 1
                continue
            s_high = self.sign_num((num[0] - (k + 1) * den,) + tuple(num[1:]))
            if s_high >= 0:
                k += 1
                continue
            return k

    def interval(self, x: "FieldElement", bits: int | None = None) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value of x."""
        p = bits or self.precision_bits
        lo, hi = self._bounds(x.num, p)
        scale = x.den << (p * (self.degree - 1))
        return Fraction(lo, scale), Fraction(hi, scale)

    # -- conjugates ---------------------------------------------------------------

    def place_enclosure(self, place: Place):
        """mpmath interval enclosure of the conjugate root at ``place``."""
        r = place.radius
        re_lo, re_hi = place.center_re - r, place.center_re + r
        if place.real:
            return _iv_interval(re_lo, re_hi)
        im_lo, im_hi = place.center_im - r, place.center_im + r
        return iv.mpc(_iv_interval(re_lo, re_hi), _iv_interval(im_lo, im_hi))

    def conjugate_enclosures(self) -> list:
        """Interval enclosures of every archimedean place, dominant first."""
        lo, hi = self.beta_interval()
        out = [_iv_interval(lo, hi)]
        out.extend(self.place_enclosure(p) for p in self._places)
        return out

    def arch_coords(self, elements: Sequence["FieldElement"]) -> np.ndarray:
        """Float coordinates in the non-dominant archimedean space, shape (n, arch_dim)."""
        if not elements:
            return np.zeros((0, self.arch_dim))
        nums = np.array([e.num for e in elements], dtype=float)
        dens = np.array([e.den for e in elements], dtype=float)
        cols = []
        for place, pw in zip(self._places, self._conj_pows):
            vals = nums @ pw / dens
            if place.real:
                cols.append(vals.real)
            else:
                cols.append(vals.real)
                cols.append(vals.imag)
        return np.column_stack(cols)

    def conj_abs_max(self) -> list[float]:
        """|beta^(sigma)| for every non-dominant place (float)."""
        return [abs(p.center) for p in self._places]

    def digit_radius(self) -> list[float]:
        """Per place (A-1)/(1-|beta^(sigma)|): bounds |sum a_j beta^(sigma)^j|."""
        return [self.alphabet_max / (1.0 - abs(p.center)) for p in self._places]

    def vectors_to_elements(self, nums: np.ndarray, den: int = 1) -> list["FieldElement"]:
        return [FieldElement(self, tuple(int(v) for v in row), den) for row in nums]

    def minkowski_matrix(self) -> np.ndarray:
        """Real matrix mapping coefficient vectors to (dominant, non-dominant) coordinates."""
        d = self.degree
        rows = [[self.beta_float**i for i in range(d)]]
        for place in self._places:
            pw = [place.center**i for i in range(d)]
            rows.append([z.real for z in pw])
            if not place.real:
                rows.append([z.imag for z in pw])
        return np.array(rows, dtype=float)


def _frac_raw(q: Fraction, direction: int):
    """Raw mpf tuple rounding q outward (direction -1 floor, +1 ceiling) at iv precision."""
    rnd = "f" if direction < 0 else "c"
    return mpmath.libmp.from_rational(q.numerator, q.denominator, iv.prec, rnd)


def _iv_interval(lo: Fraction, hi: Fraction):
    """iv.mpf containing [lo, hi]; built from raw tuples so no nearest rounding intervenes."""
    return iv.make_mpf((_frac_raw(lo, -1), _frac_raw(hi, 1)))


def _poly_str(poly: Sequence[int]) -> str:
    d = len(poly) - 1
    terms = []
    for i, c in enumerate(poly):
        k = d - i
        if c == 0:
            continue
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        mag = abs(c)
        body = f"{mag}{mono}" if (mag != 1 or k == 0) else mono
        terms.append(("-" if c < 0 else "+") + body)
    text = "".join(terms).lstrip("+")
    return text or "0"


class FieldElement:
    """Exact element of Q(beta): ``sum(num[i] * beta^i) / den``."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: BetaField, num: Sequence[int], den: int = 1, _normal: bool = False):
        self.field = field
        if not _normal:
            num = tuple(int(v) for v in num)
            den = int(den)
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num, den = tuple(-v for v in num), -den
            g = math.gcd(den, *num)
            if g > 1:
                num, den = tuple(v // g for v in num), den // g
        self.num = num
        self.den = den
        self._hash = None

    # -- structure --------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def key(self) -> tuple:
        return (self.num, self.den)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == self.field.rational(other)
        return NotImplemented

    def __bool__(self) -> bool:
        return any(self.num)

    def is_integral(self) -> bool:
        return self.den == 1

    def z_beta_inv_exponent(self, cap: int = Z_BETA_INV_CAP) -> int | None:
        """Smallest k <= cap with beta^k x in Z[beta], else None."""
        y = self
        for k in range(cap + 1):
            if y.den == 1:
                return k
            y = y.mul_beta()
        return None

    def in_z_beta_inv(self, cap: int = Z_BETA_INV_CAP) -> bool:
        return self.z_beta_inv_exponent(cap) is not None

    # -- ring operations ----------------------------------------------------------

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise BetaTilesError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return FieldElement(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        den = self.den * o.den // math.gcd(self.den, o.den)
        fa, fb = den // self.den, den // o.den
        return FieldElement(self.field, [a * fa + b * fb for a, b in zip(self.num, o.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.num), self.den, True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, [a * other for a in self.num], self.den)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        red = self.field._red
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    prod[i + j] += a * b
        for k in range(2 * d - 2, d - 1, -1):
            t = prod[k]
            if t:
                base = k - d
                for i, r in enumerate(red):
                    prod[base + i] += t * r
        return FieldElement(self.field, prod[:d], self.den * o.den)

    __rmul__ = __mul__

    def mul_beta(self) -> "FieldElement":
        num = self.num
        top = num[-1]
        red = self.field._red
        new = [top * red[0]] + [num[i - 1] + top * red[i] for i in range(1, len(num))]
        return FieldElement(self.field, new, self.den)

    def div_beta(self) -> "FieldElement":
        num = self.num
        c = self.field._c
        n0 = num[0]
        c0 = c[0]
        d = len(num)
        if n0 % c0 == 0:
            q = n0 // c0
            new = [num[i + 1] - q * c[i + 1] for i in range(d - 1)] + [-q]
            return FieldElement(self.field, new, self.den)
        new = [num[i + 1] * c0 - n0 * c[i + 1] for i in range(d - 1)] + [-n0]
        return FieldElement(self.field, new, self.den * c0)

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        d = self.field.degree
        # columns: self * beta^j
        cols = []
        col = FieldElement(self.field, self.num, 1, True)
        for _ in range(d):
            cols.append([Fraction(v, col.den) for v in col.num])
            col = col.mul_beta()
        mat = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            pv = mat[c][c]
            mat[c] = [v / pv for v in mat[c]]
            for r in range(d):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
        sol = [mat[i][d] for i in range(d)]
        return self.field.element(sol) * self.den

    def __truediv__(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, self.num, self.den * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order --------------------------------------------------------------------

    def sign(self) -> int:
        return self.field.sign_num(self.num)

    def _cmp(self, other) -> int:
        o = self._lift(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare with {type(other).__name__}")
        if self.den == o.den:
            return self.field.sign_num([a - b for a, b in zip(self.num, o.num)])
        return self.field.sign_num([a * o.den - b * self.den for a, b in zip(self.num, o.num)])

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        return self.field.floor(self)

    def __float__(self) -> float:
        filt = self.field._float_filter(self.num)
        if filt is None:
            lo, hi = self.field.interval(self)
            return float((lo + hi) / 2)
        return filt[0] / self.den

    def interval(self, bits: int | None = None) -> tuple[Fraction, Fraction]:
        return self.field.interval(self, bits)

    # -- conjugates ---------------------------------------------------------------

    def conj(self, place: Place | int = 0) -> complex:
        """Float value at a non-dominant place."""
        f = self.field
        idx = place.index if isinstance(place, Place) else place
        pw = f._conj_pows[idx]
        val = complex(np.dot(np.array(self.num, dtype=float), pw)) / self.den
        return val.real if f._places[idx].real else val

    def conj_enclosure(self, place: Place | int = 0):
        """Rigorous interval enclosure of the conjugate at a non-dominant place."""
        f = self.field
        p = place if isinstance(place, Place) else f._places[place]
        z = f.place_enclosure(p)
        acc = iv.mpf(0)
        for n in reversed(self.num):
            acc = acc * z + n
        return acc / self.den

    def dominant_enclosure(self):
        lo, hi = self.interval()
        return _iv_interval(lo, hi)

    # -- display --------------------------------------------------------------------

    def __repr__(self) -> str:
        terms = []
        for k in range(len(self.num) - 1, -1, -1):
            c = self.num[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("b" if k == 1 else f"b^{k}")
            mag = abs(c)
            body = f"{mag}{mono}" if (mag != 1 or k == 0) else mono
            terms.append(("-" if c < 0 else "+") + body)
        text = "".join(terms).lstrip("+") or "0"
        if self.den != 1:
            text = f"({text})/{self.den}"
        return text


def make_beta(min_poly: str | Sequence[int], precision_bits: int = DEFAULT_BITS) -> BetaField:
    """Validate a Pisot minimal polynomial and build its field."""
    return BetaField(min_poly, precision_bits)


def compare(a: FieldElement, b: FieldElement) -> int:
    """Exact three-way comparison of real values: -1, 0 or 1."""
    return a._cmp(b)


def floor_mul_beta(x: FieldElement) -> int:
    """floor(beta * x) for x >= 0."""
    if x.sign() < 0:
        from .errors import OutOfDomain

        raise OutOfDomain("floor_mul_beta expects x >= 0")
    return x.mul_beta().floor()


def finite_address(x: FieldElement, k: int) -> tuple[int, ...]:
    """Residue digits d_0..d_{k-1} in {0..|N|-1} with x = sum d_j beta^j mod beta^k.

    Empty for units (the finite part of the representation space is trivial).
    """
    if x.den != 1:
        raise NotIntegral(f"{x!r} is not in Z[beta]")
    n = abs(x.field.norm)
    if n == 1:
        return ()
    digits = []
    y = x
    for _ in range(k):
        dj = y.num[0] % n
        digits.append(dj)
        y = (y - dj).div_beta()
    return tuple(digits)


def address_value(digits: Sequence[int], base: int) -> Fraction:
    """sum d_j base^(-j-1): the finite-place axis coordinate used in figures."""
    out = Fraction(0)
    scale = Fraction(1, base)
    for dj in digits:
        out += dj * scale
        scale /= base
    return out
