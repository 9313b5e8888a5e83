"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element of Q(zeta_N) is stored as a polynomial in zeta_N of degree
< phi(N), reduced modulo the N-th cyclotomic polynomial.  Internally the
coefficients are kept as a tuple of integer numerators over one positive
common denominator, which is much cheaper than a tuple of Fractions; the
representation is canonical (gcd of everything is 1), so equality at a
fixed conductor is tuple comparison.

Values of different conductors are combined by lifting both to the least
common multiple of the conductors.

Sines and cosines of rational multiples of pi live in these fields, which
gives exact zero tests for rational combinations of them.  Signs of real
elements are certified with interval arithmetic (mpmath.iv) after the exact
zero test has ruled out zero.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "CyclotomicNumber",
    "PrecisionExhausted",
    "RationalAngle",
    "Sign",
    "cos_of",
    "cosine_combination_is_zero",
    "cyclotomic_polynomial",
    "euler_phi",
    "is_zero",
    "root_power",
    "sign_of_real",
    "sin_of",
]

START_PRECISION = 64
MAX_PRECISION = 2**16


class PrecisionExhausted(ArithmeticError):
    """Interval refinement hit the precision cap without separating from 0."""


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact_monic(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient of a by the monic polynomial b; the remainder must be zero."""
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for j, y in enumerate(b):
                a[k - db + j] -= c * y
    if any(a[:db]):
        raise ArithmeticError("non-exact polynomial division")
    return q


@functools.cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Uses x^n - 1 = prod_{d | n} Phi_d.
    """
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _poly_divexact_monic(num, cyclotomic_polynomial(d))
    return tuple(num)


@functools.cache
def _monomials(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds x^e mod Phi_n for 0 <= e < n."""
    phi = cyclotomic_polynomial(n)
    d = len(phi) - 1
    rows = []
    cur = [1] + [0] * (d - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(d):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(n: int, acc: Sequence[int]) -> list[int]:
    """Reduce an integer polynomial in zeta_n (any degree) modulo Phi_n."""
    rows = _monomials(n)
    d = len(rows[0])
    out = [0] * d
    for e, c in enumerate(acc):
        if c:
            if e < d:
                out[e] += c
            else:
                row = rows[e % n]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
    return out


def _normalize(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = den
    for x in nums:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                break
    if not any(nums):
        return tuple(0 for _ in nums), 1
    if g != 1:
        return tuple(x // g for x in nums), den // g
    return tuple(nums), den


def _solve_exact(rows: list[list[Fraction]], unknowns: int) -> list[Fraction] | None:
    """Gauss-Jordan over Q on an augmented matrix; None if inconsistent."""
    rows = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(unknowns):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                m = rows[i][c]
                rows[i] = [a - m * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    out = [Fraction(0)] * unknowns
    for i, c in enumerate(pivots):
        out[c] = rows[i][-1]
    return out


class CyclotomicNumber:
    """Immutable element of Q(zeta_N).

    ``conductor`` is N and ``coeffs`` the phi(N) rational coefficients of
    the canonical representative in the basis 1, zeta_N, ..., zeta_N^(d-1).
    """

    __slots__ = ("conductor", "_nums", "_den")

    def __init__(self, conductor: int, coeffs: Iterable = (), _den: int | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        d = euler_phi(conductor)
        if _den is not None:
            nums, den = list(coeffs), _den
        else:
            fr = [Fraction(c) for c in coeffs]
            if len(fr) > d:
                # accept an arbitrary polynomial in zeta_N and reduce it
                den = math.lcm(*(f.denominator for f in fr))
                nums = _reduce(conductor, [f.numerator * (den // f.denominator) for f in fr])
            else:
                fr += [Fraction(0)] * (d - len(fr))
                den = math.lcm(*(f.denominator for f in fr)) if fr else 1
                nums = [f.numerator * (den // f.denominator) for f in fr]
        if len(nums) != d:
            raise ValueError(f"expected {d} coefficients for conductor {conductor}")
        self.conductor = conductor
        self._nums, self._den = _normalize(nums, den)

    @classmethod
    def _raw(cls, conductor: int, nums: Sequence[int], den: int) -> CyclotomicNumber:
        return cls(conductor, nums, _den=den)

    @classmethod
    def rational(cls, value, conductor: int = 1) -> CyclotomicNumber:
        q = Fraction(value)
        nums = [0] * euler_phi(conductor)
        nums[0] = q.numerator
        return cls._raw(conductor, nums, q.denominator)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._nums)

    @property
    def degree(self) -> int:
        return len(self._nums)

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"CyclotomicNumber(N={self.conductor}, [{body}])"

    # -- conductor changes ------------------------------------------------

    def lift(self, conductor: int) -> CyclotomicNumber:
        """The same field element written at a multiple of the conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        step = conductor // self.conductor
        acc = [0] * ((len(self._nums) - 1) * step + 1)
        for e, c in enumerate(self._nums):
            acc[e * step] = c
        return CyclotomicNumber._raw(conductor, _reduce(conductor, acc), self._den)

    def descend(self, conductor: int) -> CyclotomicNumber:
        """Rewrite at a divisor of the conductor; ValueError if the element is not in that subfield."""
        if conductor == self.conductor:
            return self
        if self.conductor % conductor:
            raise ValueError(f"{conductor} does not divide {self.conductor}")
        # images of the basis 1, z, ..., z^(d-1) of Q(zeta_conductor), solved exactly
        d = euler_phi(conductor)
        cols = [root_power(conductor, e).lift(self.conductor).coeffs for e in range(d)]
        rows = [[cols[e][r] for e in range(d)] + [c] for r, c in enumerate(self.coeffs)]
        solution = _solve_exact(rows, d)
        if solution is None:
            raise ValueError(f"element is not in Q(zeta_{conductor})")
        return CyclotomicNumber(conductor, solution)

    def _common(self, other: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if self.conductor == other.conductor:
            return self, other
        m = math.lcm(self.conductor, other.conductor)
        return self.lift(m), other.lift(m)

    def _coerce(self, other) -> CyclotomicNumber | None:
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Rational)):
            return CyclotomicNumber.rational(other, self.conductor)
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        if a._den == b._den:
            nums = [x + y for x, y in zip(a._nums, b._nums)]
            return CyclotomicNumber._raw(a.conductor, nums, a._den)
        nums = [x * b._den + y * a._den for x, y in zip(a._nums, b._nums)]
        return CyclotomicNumber._raw(a.conductor, nums, a._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber._raw(self.conductor, [-x for x in self._nums], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            return CyclotomicNumber._raw(
                self.conductor, [x * q.numerator for x in self._nums], self._den * q.denominator
            )
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        prod = _poly_mul(a._nums, b._nums)
        return CyclotomicNumber._raw(a.conductor, _reduce(a.conductor, prod), a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / q)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def galois(self, a: int) -> CyclotomicNumber:
        """Image under the automorphism zeta_N -> zeta_N^a (gcd(a, N) = 1)."""
        n = self.conductor
        if math.gcd(a, n) != 1:
            raise ValueError("exponent must be a unit modulo the conductor")
        acc = [0] * n
        for e, c in enumerate(self._nums):
            if c:
                acc[(a * e) % n] += c
        return CyclotomicNumber._raw(n, _reduce(n, acc), self._den)

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1)

    def inverse(self) -> CyclotomicNumber:
        """Multiplicative inverse as the product of the other Galois
        conjugates divided by the (rational) field norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        prod = CyclotomicNumber.rational(1, n)
        for a in range(2, n + 1):
            if math.gcd(a, n) == 1 and a % n != 1:
                prod = prod * self.galois(a)
        norm = self * prod
        if not norm.is_rational():
            raise ArithmeticError("norm is not rational")
        return prod * (1 / norm.rational_value())

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self._nums[0], self._den)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a._den == b._den and a._nums == b._nums

    # The canonical form depends on the conductor, so no hash consistent
    # with cross-conductor equality is available; use key() instead.
    __hash__ = None  # type: ignore[assignment]

    def key(self, conductor: int | None = None) -> tuple:
        """Hashable canonical form at the given (multiple) conductor."""
        x = self if conductor is None else self.lift(conductor)
        return (x.conductor, x._den, x._nums)

    # -- embeddings -------------------------------------------------------

    def to_complex(self) -> complex:
        n = self.conductor
        re = im = 0.0
        for e, c in enumerate(self._nums):
            if c:
                t = 2.0 * math.pi * e / n
                re += c * math.cos(t)
                im += c * math.sin(t)
        return complex(re / self._den, im / self._den)

    def __float__(self) -> float:
        return self.to_complex().real

    def real_interval(self, prec: int):
        """Enclosure of the real part of the canonical embedding."""
        ctx = mpmath.iv
        old = ctx.prec
        ctx.prec = prec
        try:
            n = self.conductor
            total = ctx.mpf(0)
            two_pi = 2 * ctx.pi
            for e, c in enumerate(self._nums):
                if c:
                    total += ctx.mpf(c) * ctx.cos(two_pi * e / n)
            return total / self._den
        finally:
            ctx.prec = old

    def evaluate(self, dps: int = 50):
        """High-precision complex value (mpmath.mpc)."""
        with mpmath.workdps(dps + 10):
            n = self.conductor
            total = mpmath.mpc(0)
            for e, c in enumerate(self._nums):
                if c:
                    total += c * mpmath.expjpi(mpmath.mpf(2 * e) / n)
            return total / self._den


# ---------------------------------------------------------------------------
# rational angles


@dataclass(frozen=True, order=False)
class RationalAngle:
    """The angle (numerator/denominator) * pi, kept in lowest terms."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise ZeroDivisionError("zero denominator")
        q = Fraction(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", q.numerator)
        object.__setattr__(self, "denominator", q.denominator)

    @classmethod
    def of(cls, value) -> RationalAngle:
        """Angle value * pi for a rational ``value`` (int, Fraction or 'p/q')."""
        q = Fraction(value)
        return cls(q.numerator, q.denominator)

    @property
    def value(self) -> Fraction:
        """The angle as a rational multiple of pi."""
        return Fraction(self.numerator, self.denominator)

    @property
    def radians(self) -> float:
        return math.pi * self.numerator / self.denominator

    def normalized(self) -> RationalAngle:
        """Representative in [0, 2 pi)."""
        return RationalAngle.of(self.value % 2)

    def __add__(self, other: RationalAngle) -> RationalAngle:
        return RationalAngle.of(self.value + other.value)

    def __sub__(self, other: RationalAngle) -> RationalAngle:
        return RationalAngle.of(self.value - other.value)

    def __neg__(self) -> RationalAngle:
        return RationalAngle(-self.numerator, self.denominator)

    def __mul__(self, k) -> RationalAngle:
        return RationalAngle.of(self.value * Fraction(k))

    __rmul__ = __mul__

    def __lt__(self, other: RationalAngle) -> bool:
        return self.value < other.value

    def __le__(self, other: RationalAngle) -> bool:
        return self.value <= other.value

    def __gt__(self, other: RationalAngle) -> bool:
        return self.value > other.value

    def __ge__(self, other: RationalAngle) -> bool:
        return self.value >= other.value

    def __str__(self) -> str:
        p, q = self.numerator, self.denominator
        if p == 0:
            return "0"
        head = {1: "pi", -1: "-pi"}.get(p, f"{p}pi")
        return head if q == 1 else f"{head}/{q}"


HALF_PI = RationalAngle(1, 2)


def _as_angle(angle) -> RationalAngle:
    return angle if isinstance(angle, RationalAngle) else RationalAngle.of(angle)


# ---------------------------------------------------------------------------
# operations


def root_power(n: int, a: int) -> CyclotomicNumber:
    """zeta_n ** a."""
    row = _monomials(n)[a % n]
    return CyclotomicNumber._raw(n, row, 1)


def cos_of(angle) -> CyclotomicNumber:
    """cos(p pi / q) = (zeta_2q^p + zeta_2q^-p) / 2, at conductor 2q."""
    angle = _as_angle(angle)
    n = 2 * angle.denominator
    p = angle.numerator
    rows = _monomials(n)
    nums = [x + y for x, y in zip(rows[p % n], rows[(-p) % n])]
    return CyclotomicNumber._raw(n, nums, 2)


def sin_of(angle) -> CyclotomicNumber:
    return cos_of(HALF_PI - _as_angle(angle))


def is_zero(x: CyclotomicNumber) -> bool:
    return x.is_zero()


def sign_of_real(x: CyclotomicNumber) -> Sign:
    """Certified sign of a real cyclotomic number.

    Exact zero test first; otherwise interval evaluation at doubling
    precision until the enclosure excludes zero.
    """
    if x.is_zero():
        return Sign.ZERO
    if not x.is_real():
        raise ValueError("sign_of_real needs a real element")
    if x.is_rational():
        return Sign.POSITIVE if x.rational_value() > 0 else Sign.NEGATIVE
    prec = START_PRECISION
    while prec <= MAX_PRECISION:
        box = x.real_interval(prec)
        if box.a > 0:
            return Sign.POSITIVE
        if box.b < 0:
            return Sign.NEGATIVE
        prec *= 2
    raise PrecisionExhausted("precision exhausted while certifying a sign")


def cosine_combination_is_zero(terms) -> bool:
    """Exact test of sum(coef * cos(angle)) == 0."""
    terms = list(terms)
    if not terms:
        raise ValueError("empty combination")
    total = None
    for coef, angle in terms:
        t = cos_of(angle) * Fraction(coef)
        total = t if total is None else total + t
    return total.is_zero()


def linear_combination(terms, fn=cos_of) -> CyclotomicNumber:
    """sum(coef * fn(angle)), lifted to the least common conductor once."""
    pairs = [(Fraction(c), fn(a)) for c, a in terms]
    n = math.lcm(*(v.conductor for _, v in pairs))
    total = CyclotomicNumber.rational(0, n)
    for c, v in pairs:
        if c:
            total = total + v.lift(n) * c
    return total
