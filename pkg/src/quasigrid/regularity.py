"""Intersections, exact concurrency tests and sufficient regularity conditions.

A multigrid is singular when three or more of its lines meet in a point.
Concurrency is decided exactly: a float evaluation with a rigorous error
bound settles the clear cases and every near-miss is re-decided in the
cyclotomic field.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .cyclotomic import (
    CyclotomicNumber,
    RationalAngle,
    Sign,
    cosine_combination_is_zero,
    linear_combination,
    sign_of_real,
    sin_of,
)
from .multigrid import (
    FLOAT_SLACK,
    ExactPoint,
    GridLine,
    MultigridSpec,
    line_value,
)


class Verdict(str, enum.Enum):
    REGULAR_BY_THEOREM = "RegularByTheorem"
    NOT_COVERED = "NotCovered"


class TripleCase(str, enum.Enum):
    PENTAGON = "PentagonCase"
    PHI_FAMILY = "PhiFamilyCase"
    NO_VANISHING = "NoVanishing"


class CorollaryViolation(AssertionError):
    """A vanishing cosine triple outside the two known families."""


@dataclass(frozen=True)
class CosineTripleClassification:
    case: TripleCase
    phi: RationalAngle | None = None


@dataclass(frozen=True)
class Witness:
    """Parameters making r0 sin((p-q)a) + rp sin(q a) - rq sin(p a) vanish.

    ``base`` is the direction rotated onto direction 0; the three lines are
    in directions base, base + q and base + p.
    """

    base: int
    p: int
    q: int
    r0: Fraction
    rp: Fraction
    rq: Fraction


@dataclass(frozen=True)
class SingularityReport:
    spec: MultigridSpec
    lines: tuple[GridLine, ...]
    witness: Witness

    @cached_property
    def point(self) -> ExactPoint:
        return intersect_pair(self.spec, self.lines[0], self.lines[1])

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "point": list(self.point.approx),
            "lines": [[ln.direction, ln.index] for ln in self.lines],
            "witness": {
                "base": w.base,
                "p": w.p,
                "q": w.q,
                "r0": _fmt(w.r0),
                "rp": _fmt(w.rp),
                "rq": _fmt(w.rq),
            },
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class Intersection:
    """Crossing of two grid lines, line_a.direction < line_b.direction."""

    spec: MultigridSpec
    line_a: GridLine
    line_b: GridLine
    approx: tuple[float, float]

    @cached_property
    def point(self) -> ExactPoint:
        return intersect_pair(self.spec, self.line_a, self.line_b)


def _t(spec: MultigridSpec, line: GridLine) -> Fraction:
    # signed distance of the line from the origin
    return line.index + spec.offsets[line.direction]


def intersect_pair(spec: MultigridSpec, a: GridLine, b: GridLine) -> ExactPoint:
    if a.direction == b.direction:
        raise ValueError("lines of the same grid are parallel")
    g = spec.geometry
    ta, tb = _t(spec, a), _t(spec, b)
    inv = g.inverse_sin_step(b.direction - a.direction)
    x = (g.sin[b.direction] * ta - g.sin[a.direction] * tb) * inv
    y = (g.cos[a.direction] * tb - g.cos[b.direction] * ta) * inv
    return ExactPoint(x, y, check=False)


def concurrency_test(spec: MultigridSpec, a: GridLine, b: GridLine, c: GridLine) -> bool:
    """Whether the three lines pass through one point (exact)."""
    if len({a.direction, b.direction, c.direction}) != 3:
        raise ValueError("three distinct directions required")
    z = intersect_pair(spec, a, b)
    return (line_value(spec, c.direction, z) - c.index).is_zero()


# ---------------------------------------------------------------------------
# vectorized enumeration of intersections


@dataclass
class PairBlock:
    """All intersections of grids a < b inside a disc.

    ``K`` holds, per intersection, the ceilings of every grid coordinate at
    the point; columns a and b hold the line indices themselves.
    ``concurrent`` lists (row, direction, index) of further lines through
    the point.
    """

    a: int
    b: int
    ka: np.ndarray
    kb: np.ndarray
    xy: np.ndarray
    K: np.ndarray | None = None
    concurrent: list[tuple[int, int, int]] | None = None


def _line_range(spec: MultigridSpec, i: int, radius: Fraction) -> range:
    # lines of grid i at distance |k + gamma_i| <= radius from the origin
    g = spec.offsets[i]
    return range(math.ceil(-radius - g), math.floor(radius - g) + 1)


def _inside_exact(spec, a, b, ta: Fraction, tb: Fraction, radius: Fraction) -> bool:
    g = spec.geometry
    c, s = g.cos_step(b - a), g.sin_step(b - a)
    lhs = c * (-2 * ta * tb) + (ta * ta + tb * tb) - s * s * (radius * radius)
    return sign_of_real(lhs) is not Sign.POSITIVE


def pair_blocks(spec: MultigridSpec, radius, classify: bool = True) -> Iterator[PairBlock]:
    """Yield the intersections inside the closed disc, grouped by direction pair."""
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = spec.n
    g = spec.geometry
    gam = [Fraction(x) for x in spec.offsets]
    r2 = float(radius) ** 2
    ranges = [_line_range(spec, i, radius) for i in range(n)]
    for a, b in itertools.combinations(range(n), 2):
        if not ranges[a] or not ranges[b]:
            continue
        ka, kb = np.meshgrid(
            np.arange(ranges[a].start, ranges[a].stop, dtype=np.int64),
            np.arange(ranges[b].start, ranges[b].stop, dtype=np.int64),
            indexing="ij",
        )
        ka, kb = ka.ravel(), kb.ravel()
        ta = ka + g.offsets_f[a]
        tb = kb + g.offsets_f[b]
        s = g.sin_step_f(b - a)
        c = g.cos_step_f(b - a)
        d2 = (ta * ta + tb * tb - 2.0 * ta * tb * c) / (s * s)
        inside = d2 < r2 * (1 - 1e-9)
        edge = np.flatnonzero(np.abs(d2 - r2) <= r2 * 1e-9)
        for idx in edge:
            ta_q = int(ka[idx]) + gam[a]
            tb_q = int(kb[idx]) + gam[b]
            inside[idx] = _inside_exact(spec, a, b, ta_q, tb_q, radius)
        if not inside.any():
            continue
        ka, kb, ta, tb = ka[inside], kb[inside], ta[inside], tb[inside]
        x = (ta * g.sin_f[b] - tb * g.sin_f[a]) / s
        y = (tb * g.cos_f[a] - ta * g.cos_f[b]) / s
        block = PairBlock(a, b, ka, kb, np.column_stack([x, y]))
        if classify:
            _classify(spec, block, ta, tb)
        yield block


def _classify(spec: MultigridSpec, block: PairBlock, ta: np.ndarray, tb: np.ndarray) -> None:
    """Certified ceilings of every other grid coordinate at the block's points."""
    n = spec.n
    g = spec.geometry
    a, b = block.a, block.b
    m_all = np.arange(n)
    s_ab = g.sin_step_f(b - a)
    cm = g.sin_step_f(b - m_all) / s_ab
    dm = g.sin_step_f(m_all - a) / s_ab
    v = ta[:, None] * cm[None, :] + tb[:, None] * dm[None, :] - g.offsets_f[None, :]
    bound = FLOAT_SLACK * (np.abs(ta)[:, None] * np.abs(cm) + np.abs(tb)[:, None] * np.abs(dm) + 1.0)
    nearest = np.rint(v)
    K = np.ceil(v).astype(np.int64)
    unsure = np.abs(v - nearest) <= bound
    unsure[:, a] = unsure[:, b] = False
    K[:, a] = block.ka
    K[:, b] = block.kb
    concurrent = []
    if unsure.any():
        sign_ab = 1 if s_ab > 0 else -1
        for row, m in zip(*np.nonzero(unsure)):
            row, m = int(row), int(m)
            k = int(nearest[row, m])
            ta_q = int(block.ka[row]) + spec.offsets[a]
            tb_q = int(block.kb[row]) + spec.offsets[b]
            # (value_m - k) * sin((b - a) alpha)
            e = (
                g.sin_step(b - m) * ta_q
                + g.sin_step(m - a) * tb_q
                - g.sin_step(b - a) * (k + spec.offsets[m])
            )
            sgn = sign_of_real(e) * sign_ab
            if sgn == 0:
                concurrent.append((row, m, k))
                K[row, m] = k
            else:
                K[row, m] = k if sgn < 0 else k + 1
    block.K = K
    block.concurrent = concurrent


def enumerate_intersections(spec: MultigridSpec, radius) -> list[Intersection]:
    out = []
    for blk in pair_blocks(spec, radius, classify=False):
        for ka, kb, (x, y) in zip(blk.ka.tolist(), blk.kb.tolist(), blk.xy.tolist()):
            out.append(Intersection(spec, GridLine(blk.a, ka), GridLine(blk.b, kb), (x, y)))
    return out


def count_intersections(spec: MultigridSpec, radius) -> int:
    return sum(len(blk.ka) for blk in pair_blocks(spec, radius, classify=False))


# ---------------------------------------------------------------------------
# singularities


def witness_for(spec: MultigridSpec, lines: Sequence[GridLine]) -> Witness:
    """Sine-equation witness built from the first three concurrent lines."""
    i, j, m = sorted(lines, key=lambda ln: ln.direction)[:3]
    return Witness(
        base=i.direction,
        p=m.direction - i.direction,
        q=j.direction - i.direction,
        r0=_t(spec, i),
        rp=_t(spec, m),
        rq=_t(spec, j),
    )


def find_singularities(spec: MultigridSpec, radius) -> list[SingularityReport]:
    """Every point of the closed disc where three or more lines meet."""
    seen: dict[tuple[GridLine, ...], SingularityReport] = {}
    for blk in pair_blocks(spec, radius):
        if not blk.concurrent:
            continue
        by_row: dict[int, list[GridLine]] = {}
        for row, m, k in blk.concurrent:
            by_row.setdefault(row, []).append(GridLine(m, k))
        for row, extra in by_row.items():
            lines = tuple(
                sorted([GridLine(blk.a, int(blk.ka[row])), GridLine(blk.b, int(blk.kb[row]))] + extra)
            )
            if lines not in seen:
                seen[lines] = SingularityReport(spec, lines, witness_for(spec, lines))
    return [seen[k] for k in sorted(seen)]


def _sine_angles(n: int, p: int, q: int) -> tuple[RationalAngle, RationalAngle, RationalAngle]:
    step = RationalAngle(2, n) if n % 2 else RationalAngle(1, n)
    return step * (p - q), step * q, step * p


def trig_inequation_lhs(n: int, p: int, q: int, r0, rp, rq) -> CyclotomicNumber:
    if not 0 < q < p < n:
        raise ValueError("need 0 < q < p < n")
    a0, aq, ap = _sine_angles(n, p, q)
    return linear_combination([(r0, a0), (rp, aq), (-Fraction(rq), ap)], fn=sin_of)


def trig_inequation_holds(n: int, p: int, q: int, r0, rp, rq) -> bool:
    """True when r0 sin((p-q)a) + rp sin(q a) - rq sin(p a) != 0, a = 2pi/n
    for odd n and pi/n for even n."""
    return not trig_inequation_lhs(n, p, q, r0, rp, rq).is_zero()


# ---------------------------------------------------------------------------
# trigonometric reductions


def angle_normalize(theta: RationalAngle) -> tuple[int, RationalAngle]:
    """(eps, phi) with sin(theta) = eps * cos(phi), phi in [0, pi/2]."""
    t = theta.value
    if not 0 <= t < 2:
        raise ValueError("theta must lie in [0, 2 pi)")
    half_turns = math.floor(t)
    eps = -1 if half_turns % 2 else 1
    sgn = -1 if math.floor(2 * t) % 2 else 1
    phi = sgn * (half_turns + Fraction(1, 2) - t)
    return eps, RationalAngle.of(phi)


def phi_preimage(phi: RationalAngle) -> list[RationalAngle]:
    """All theta in [0, 2 pi) with angle_normalize(theta)[1] == phi."""
    h = Fraction(1, 2)
    cands = {(h - phi.value) % 2, (h + phi.value) % 2, (3 * h - phi.value) % 2, (3 * h + phi.value) % 2}
    return sorted(
        (RationalAngle.of(c) for c in cands if angle_normalize(RationalAngle.of(c))[1] == phi),
        key=lambda a: a.value,
    )


_PENTAGON = (RationalAngle(1, 5), RationalAngle(1, 3), RationalAngle(2, 5))


def classify_cosine_triple(terms) -> CosineTripleClassification:
    """Decide A cos a + B cos b + C cos c = 0 and name the family it belongs to."""
    terms = [(Fraction(c), a if isinstance(a, RationalAngle) else RationalAngle.of(a)) for c, a in terms]
    if len(terms) != 3:
        raise ValueError("exactly three terms required")
    for c, a in terms:
        if c == 0:
            raise ValueError("coefficients must be non-zero")
        if not 0 < a.value < Fraction(1, 2):
            raise ValueError("angles must lie strictly between 0 and pi/2")
    if len({a for _, a in terms}) == 1:
        raise ValueError("angles must not all be equal")
    if not cosine_combination_is_zero(terms):
        return CosineTripleClassification(TripleCase.NO_VANISHING)
    (A, a), (B, b), (C, c) = sorted(terms, key=lambda t: t[1].value)
    if B == C == -A:
        if (a, b, c) == _PENTAGON:
            return CosineTripleClassification(TripleCase.PENTAGON)
        third = Fraction(1, 3)
        if a.value < Fraction(1, 6) and b.value == third - a.value and c.value == third + a.value:
            return CosineTripleClassification(TripleCase.PHI_FAMILY, a)
    raise CorollaryViolation(f"vanishing triple outside the known families: {terms}")


def theorem2_applies(spec: MultigridSpec) -> Verdict:
    """Sufficient regularity condition for rational offsets.

    Covered: every offset non-zero and either n odd, all offsets equal, or
    (even n) gamma_i - gamma_j - gamma_k not an integer for distinct i, j, k.
    A NOT_COVERED verdict says nothing about singularity.
    """
    gam = spec.offsets
    if any(x == 0 for x in gam):
        return Verdict.NOT_COVERED
    if spec.n % 2 or spec.is_uniform():
        return Verdict.REGULAR_BY_THEOREM
    for i in range(spec.n):
        for j, k in itertools.combinations([x for x in range(spec.n) if x != i], 2):
            if (gam[i] - gam[j] - gam[k]).denominator == 1:
                return Verdict.NOT_COVERED
    return Verdict.REGULAR_BY_THEOREM
