"""Independent reference computations used to freeze and cross-check expected values.

Nothing here imports betatiles.  Arithmetic goes through sympy polynomials
reduced modulo the minimal polynomial, and real comparisons through mpmath at
high precision, so agreement with the package is a genuine second route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import sympy

B = sympy.Symbol("b")
DPS = 80


class Alg:
    """Q(beta) as sympy polynomials in b reduced modulo the minimal polynomial."""

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)
        self.mp = sympy.Poly(list(coeffs), B, domain="QQ")
        self.d = self.mp.degree()
        with mpmath.workdps(DPS):
            roots = mpmath.polyroots([int(c) for c in coeffs], maxsteps=200, extraprec=400)
        self.roots = roots
        self.beta_mp = max((r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -40), key=lambda r: mpmath.re(r)).real
        self.beta_f = float(self.beta_mp)
        self.top = int(mpmath.ceil(self.beta_mp)) - 1
        self.norm = (-1) ** self.d * int(coeffs[-1])

    def red(self, expr) -> sympy.Poly:
        return sympy.Poly(expr, B, domain="QQ").rem(self.mp)

    def vec(self, p: sympy.Poly) -> tuple[Fraction, ...]:
        c = p.all_coeffs()[::-1]
        c = c + [0] * (self.d - len(c))
        return tuple(Fraction(int(sympy.numer(x)), int(sympy.denom(x))) for x in c)

    def poly(self, vec) -> sympy.Poly:
        return self.red(sum(sympy.Rational(v.numerator, v.denominator) * B**i for i, v in enumerate(map(Fraction, vec))))

    def value(self, p: sympy.Poly, root=None):
        r = self.beta_mp if root is None else root
        with mpmath.workdps(DPS):
            acc = mpmath.mpf(0)
            for c in p.all_coeffs():
                acc = acc * r + mpmath.mpf(int(sympy.numer(c))) / int(sympy.denom(c))
            return acc

    def div_beta(self, p: sympy.Poly) -> sympy.Poly:
        inv = sympy.invert(sympy.Poly(B, B, domain="QQ"), self.mp)
        return self.red(p * inv)

    def is_integral(self, p: sympy.Poly) -> bool:
        return all(sympy.denom(c) == 1 for c in p.all_coeffs())


def t_preimage_tree(alg: Alg, x_vec, k: int, integral: bool = False) -> list[tuple[Fraction, ...]]:
    """beta^k T^-k(x) (or its Z[beta] restriction) by brute force over digit strings."""
    x = alg.poly(x_vec)
    level = [x]
    for _ in range(k):
        nxt = []
        for y in level:
            for a in range(alg.top + 1):
                y1 = alg.div_beta(y + a)
                if integral and not alg.is_integral(y1):
                    continue
                if alg.value(y1) < 1:
                    nxt.append(y1)
        level = nxt
    bk = alg.red(B**k)
    return sorted(alg.vec(alg.red(y * bk)) for y in level)


def residue_address(alg: Alg, vec, k: int) -> tuple[int, ...]:
    """Digits d_j in {0..|N|-1} with x = d_0 + beta x_1, by exact division."""
    n = abs(alg.norm)
    p = alg.poly(vec)
    out = []
    for _ in range(k):
        for d in range(n):
            q = alg.div_beta(p - d)
            if alg.is_integral(q):
                out.append(d)
                p = q
                break
        else:
            raise AssertionError("no residue digit")
    return tuple(out)


def quasi_greedy_orbit(alg: Alg, cap: int = 200) -> list[tuple[Fraction, ...]]:
    """{T^k(1-)} from the quasi-greedy map with sympy arithmetic."""
    x = alg.red(sympy.Integer(1))
    seen = []
    while alg.vec(x) not in seen:
        seen.append(alg.vec(x))
        y = alg.red(x * B)
        val = alg.value(y)
        a = int(mpmath.ceil(val)) - 1
        x = alg.red(y - a)
        if len(seen) > cap:
            raise AssertionError("orbit too long")
    return seen


def lattice_rank(vectors) -> int:
    if not vectors:
        return 0
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in vectors]).rank()


def greedy_digits(alg: Alg, x_vec, n: int) -> list[int]:
    x = alg.poly(x_vec)
    out = []
    for _ in range(n):
        y = alg.red(x * B)
        a = int(mpmath.floor(alg.value(y)))
        out.append(a)
        x = alg.red(y - a)
    return out


def purely_periodic_rational(alg: Alg, q: Fraction, cap: int = 20000) -> bool:
    x = alg.poly((q,))
    start = alg.vec(x)
    seen = set()
    cur = start
    while cur not in seen:
        seen.add(cur)
        y = alg.red(x * B)
        a = int(mpmath.floor(alg.value(y)))
        x = alg.red(y - a)
        cur = alg.vec(x)
        if cur == start:
            return True
        if len(seen) > cap:
            raise AssertionError("cap")
    return False


def spectral_radius_charpoly(mat) -> float:
    """Largest real root modulus of det(tI - A) via sympy."""
    m = sympy.Matrix(mat)
    t = sympy.Symbol("t")
    # the square-free part has the same roots and keeps nroots convergent
    cp = sympy.Poly(m.charpoly(t).as_expr(), t).sqf_part()
    return max(abs(complex(r)) for r in cp.nroots(n=30, maxsteps=500)) if cp.degree() > 0 else 0.0


def integer_points_in_box(alg: Alg, lo: float, hi: float, conj_bound: float, coeff_range: int):
    """Brute-force Z[beta] points with lo <= x < hi and every conjugate bounded."""
    others = [r for r in alg.roots if abs(r - alg.beta_mp) > 1e-30]
    out = []
    for c in itertools.product(range(-coeff_range, coeff_range + 1), repeat=alg.d):
        val = sum(ci * alg.beta_f**i for i, ci in enumerate(c))
        if not lo - 1e-9 <= val < hi + 1e-9:
            continue
        if all(abs(sum(ci * complex(r) ** i for i, ci in enumerate(c))) <= conj_bound for r in others):
            out.append(c)
    return out
