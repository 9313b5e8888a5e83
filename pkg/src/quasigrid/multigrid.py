"""n-fold multigrids G_n(gamma) and the dualization maps K and f.

Grid i has unit normal zeta_n^i, where zeta_n = exp(2 i pi / n) for odd n and
exp(i pi / n) for even n.  Its lines are the points z with

    Re(z * conj(zeta_n^i)) - gamma_i = k,   k integer.

K(z) collects the ceilings of these n grid coordinates, f(z) sends the cell
containing z to the tiling vertex sum_i K_i(z) zeta_n^i.
"""

from __future__ import annotations

import functools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import mpmath
import numpy as np

from .cyclotomic import (
    CyclotomicNumber,
    RationalAngle,
    Sign,
    cos_of,
    root_power,
    sign_of_real,
    sin_of,
)

# Relative slack for float evaluations of grid coordinates.  The inputs are
# correctly rounded doubles and every formula below does at most a handful
# of roundings, so the true error is a few units of 2^-53; 2^-40 leaves a
# wide margin while still deciding all but near-degenerate cases.
FLOAT_SLACK = 2.0**-40


class OnLineError(ValueError):
    """A point lies exactly on a grid line and no side was selected."""

    def __init__(self, direction: int, index: int):
        super().__init__(f"point lies on grid line ({direction}, {index})")
        self.direction = direction
        self.index = index


def parse_rational(value) -> Fraction:
    """Exact rational from int, Fraction or a 'p/q' string; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not offsets")
    if isinstance(value, float):
        raise TypeError(f"floating-point value {value!r} rejected: give offsets as exact rationals like '1/5'")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class MultigridSpec:
    """The n-fold multigrid with rational offsets, each reduced into [0, 1)."""

    n: int
    offsets: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError("n must be an integer >= 3")
        offsets = tuple(parse_rational(g) % 1 for g in self.offsets)
        if len(offsets) != self.n:
            raise ValueError(f"expected {self.n} offsets, got {len(offsets)}")
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def uniform(cls, n: int, offset) -> MultigridSpec:
        return cls(n, (parse_rational(offset),) * n)

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    @property
    def base_angle(self) -> RationalAngle:
        """Argument of zeta_n."""
        return RationalAngle(2, self.n) if self.n % 2 else RationalAngle(1, self.n)

    @property
    def conductor(self) -> int:
        """Conductor of the field holding every zeta_n^i."""
        return 2 * self.n

    def is_uniform(self) -> bool:
        return len(set(self.offsets)) == 1

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        return f"n={self.n} offsets=" + ",".join(format_rational(g) for g in self.offsets)

    @classmethod
    def from_text(cls, text: str) -> MultigridSpec:
        m = re.fullmatch(r"\s*n=(\d+)\s+offsets=(\S+)\s*", text)
        if not m:
            raise ValueError(f"malformed multigrid spec: {text!r}")
        return cls(int(m.group(1)), tuple(m.group(2).split(",")))

    def to_dict(self) -> dict:
        return {"n": self.n, "offsets": [format_rational(g) for g in self.offsets]}

    @classmethod
    def from_dict(cls, data: Mapping) -> MultigridSpec:
        return cls(int(data["n"]), tuple(str(g) for g in data["offsets"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> MultigridSpec:
        return cls.from_dict(json.loads(text))

    # -- derived geometry (cached per spec) -------------------------------

    @cached_property
    def geometry(self) -> Geometry:
        return Geometry(self)


@dataclass(frozen=True, order=True)
class GridLine:
    """Line k of grid i: Re(z * conj(zeta_n^i)) - gamma_i = k."""

    direction: int
    index: int


class ExactPoint:
    """A point of the plane with exact real cyclotomic coordinates."""

    __slots__ = ("x", "y", "_approx")

    def __init__(self, x: CyclotomicNumber, y: CyclotomicNumber, check: bool = True):
        if not isinstance(x, CyclotomicNumber):
            x = CyclotomicNumber.rational(x)
        if not isinstance(y, CyclotomicNumber):
            y = CyclotomicNumber.rational(y)
        if check and not (x.is_real() and y.is_real()):
            raise ValueError("coordinates must be real")
        self.x = x
        self.y = y
        self._approx = None

    @property
    def approx(self) -> tuple[float, float]:
        """Double-precision embedding, for rendering and candidate guesses."""
        if self._approx is None:
            self._approx = (float(self.x.evaluate(30).real), float(self.y.evaluate(30).real))
        return self._approx

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return "ExactPoint(%.12g, %.12g)" % self.approx


class Geometry:
    """Exact and float trigonometry of one multigrid's directions."""

    def __init__(self, spec: MultigridSpec):
        n = spec.n
        self.spec = spec
        self.angles = [spec.base_angle * i for i in range(n)]
        self.cos = [cos_of(a) for a in self.angles]
        self.sin = [sin_of(a) for a in self.angles]
        with mpmath.workdps(40):
            # correctly rounded doubles
            self.cos_f = np.array([float(mpmath.cospi(a.value)) for a in self.angles])
            self.sin_f = np.array([float(mpmath.sinpi(a.value)) for a in self.angles])
            # sin(j * base angle) for -n < j < n, index j + n
            self._sin_steps_f = np.array(
                [float(mpmath.sinpi(spec.base_angle.value * j)) for j in range(-n, n)]
            )
            self._cos_steps_f = np.array(
                [float(mpmath.cospi(spec.base_angle.value * j)) for j in range(-n, n)]
            )
        self.offsets_f = np.array([float(g) for g in spec.offsets])

    @functools.lru_cache(maxsize=None)
    def sin_step(self, j: int) -> CyclotomicNumber:
        """Exact sin(j * base angle)."""
        return sin_of(self.spec.base_angle * j)

    @functools.lru_cache(maxsize=None)
    def cos_step(self, j: int) -> CyclotomicNumber:
        return cos_of(self.spec.base_angle * j)

    def sin_step_f(self, j):
        return self._sin_steps_f[np.asarray(j) + self.spec.n]

    def cos_step_f(self, j):
        return self._cos_steps_f[np.asarray(j) + self.spec.n]

    @functools.lru_cache(maxsize=None)
    def inverse_sin_step(self, j: int) -> CyclotomicNumber:
        return self.sin_step(j).inverse()

    @functools.lru_cache(maxsize=None)
    def direction(self, i: int) -> CyclotomicNumber:
        """zeta_n^i as a complex element at conductor 2n."""
        n = self.spec.n
        return root_power(2 * n, (2 * i if n % 2 else i) % (2 * n))


# ---------------------------------------------------------------------------
# operations


def _check_index(spec: MultigridSpec, i: int) -> None:
    if not 0 <= i < spec.n:
        raise IndexError(f"direction index {i} out of range for n={spec.n}")


def direction_angle(spec: MultigridSpec, i: int) -> RationalAngle:
    _check_index(spec, i)
    return spec.base_angle * i


def line_value(spec: MultigridSpec, i: int, z: ExactPoint) -> CyclotomicNumber:
    """Exact grid coordinate Re(z * conj(zeta_n^i)) - gamma_i."""
    _check_index(spec, i)
    g = spec.geometry
    return z.x * g.cos[i] + z.y * g.sin[i] - spec.offsets[i]


def certified_ceil(v: CyclotomicNumber, guess: float | None = None) -> int:
    """Ceiling of a real cyclotomic number, decided by certified signs."""
    if v.is_rational():
        return math.ceil(v.rational_value())
    c = math.ceil(float(v.evaluate(20).real) if guess is None else guess)
    # ceil(v) = c  iff  c - 1 < v <= c
    while True:
        if sign_of_real(v - c) is Sign.POSITIVE:
            c += 1
        elif sign_of_real(v - (c - 1)) is not Sign.POSITIVE:
            c -= 1
        else:
            return c


def K(spec: MultigridSpec, z: ExactPoint, sides: Mapping[int, int] | None = None) -> tuple[int, ...]:
    """Index vector of the cell containing z.

    ``sides`` maps a direction i whose line passes through z to 0 (the cell
    below the line, ceiling k) or 1 (the cell above, ceiling k + 1).
    """
    sides = sides or {}
    out = []
    for i in range(spec.n):
        v = line_value(spec, i, z)
        c = certified_ceil(v)
        if (v - c).is_zero():
            if i not in sides:
                raise OnLineError(i, c)
            c += 1 if sides[i] else 0
        out.append(c)
    return tuple(out)


def embed(spec: MultigridSpec, index_vector: Sequence[int]) -> ExactPoint:
    """sum_i index_vector[i] * zeta_n^i as an exact point."""
    g = spec.geometry
    x = CyclotomicNumber.rational(0, 1)
    y = CyclotomicNumber.rational(0, 1)
    for i, k in enumerate(index_vector):
        if k:
            x = x + g.cos[i] * k
            y = y + g.sin[i] * k
    return ExactPoint(x, y, check=False)


def embed_complex(spec: MultigridSpec, index_vector: Sequence[int]) -> CyclotomicNumber:
    """sum_i index_vector[i] * zeta_n^i as one complex field element."""
    g = spec.geometry
    total = CyclotomicNumber.rational(0, spec.conductor)
    for i, k in enumerate(index_vector):
        if k:
            total = total + g.direction(i) * k
    return total


def f(spec: MultigridSpec, z: ExactPoint, sides: Mapping[int, int] | None = None) -> ExactPoint:
    return embed(spec, K(spec, z, sides))


def rotate(z: ExactPoint, angle) -> ExactPoint:
    """Exact rotation about the origin by a rational angle."""
    angle = angle if isinstance(angle, RationalAngle) else RationalAngle.of(angle)
    c, s = cos_of(angle), sin_of(angle)
    return ExactPoint(z.x * c - z.y * s, z.x * s + z.y * c, check=False)


def float_line_values(spec: MultigridSpec, xy: np.ndarray) -> np.ndarray:
    """Grid coordinates of many points in double precision, shape (m, n)."""
    g = spec.geometry
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    return xy[:, :1] * g.cos_f + xy[:, 1:] * g.sin_f - g.offsets_f
