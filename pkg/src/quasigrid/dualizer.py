"""Dual rhombus tilings P_n(gamma) of regular multigrids.

Every intersection of lines (i, k_i) and (j, k_j) becomes one rhombus; its
four vertices are the index vectors of the four cells around the point,
which agree with the point's ceilings in every other direction and take
k_i or k_i + 1 (resp. k_j or k_j + 1) in directions i and j.  Vertices are
identified by their index vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .cyclotomic import RationalAngle
from .multigrid import ExactPoint, GridLine, MultigridSpec, certified_ceil, embed, line_value
from .regularity import (
    Intersection,
    PairBlock,
    SingularityReport,
    Verdict,
    pair_blocks,
    theorem2_applies,
    witness_for,
)


class SingularPointError(RuntimeError):
    """A third grid line passes through an intersection being dualized."""

    def __init__(self, report: SingularityReport):
        lines = ", ".join(f"({ln.direction},{ln.index})" for ln in report.lines)
        super().__init__(f"singular point: lines {lines} are concurrent")
        self.report = report


class NotCoveredError(ValueError):
    """The spec is outside the sufficient regularity condition."""


@dataclass(frozen=True)
class TilingVertex:
    id: int
    index_vector: tuple[int, ...]
    spec: MultigridSpec = field(repr=False, compare=False)

    @cached_property
    def position(self) -> ExactPoint:
        return embed(self.spec, self.index_vector)


@dataclass(frozen=True)
class RhombusTile:
    """Dual of the crossing of lines (i, k_i) and (j, k_j), i < j.

    ``vertex_ids`` run 00 -> 10 -> 11 -> 01, the first bit selecting k_i or
    k_i + 1 in direction i and the second k_j or k_j + 1 in direction j.
    """

    dirs: tuple[int, int]
    lines: tuple[int, int]
    vertex_ids: tuple[int, int, int, int]

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (*self.dirs, *self.lines)


def shape_class(spec: MultigridSpec, dirs: tuple[int, int]) -> RationalAngle:
    """Acute angle of the rhombus with edge directions dirs."""
    i, j = dirs
    if not i < j:
        raise ValueError("need i < j")
    delta = (spec.base_angle * (j - i)).value % 1
    return RationalAngle.of(min(delta, 1 - delta))


def corner_angle(spec: MultigridSpec, dirs: tuple[int, int]) -> RationalAngle:
    """Interior angle of the tile at vertices 00 and 11 (between +zeta^i and +zeta^j)."""
    i, j = dirs
    delta = (spec.base_angle * (j - i)).value % 2
    return RationalAngle.of(delta if delta <= 1 else 2 - delta)


def core_radius(spec: MultigridSpec, radius) -> Fraction:
    """Radius in tiling space inside which a patch generated from the
    multigrid disc of the given radius is complete.

    f(z) = (n/2) z + sum_i d_i zeta^i with d_i in [-gamma_i, 1 - gamma_i), so
    a tile dual to a point z lies within B = sum_i max(gamma_i, 1 - gamma_i)
    of (n/2) z.
    """
    radius = Fraction(radius)
    slack = sum(max(g, 1 - g) for g in spec.offsets)
    return max(Fraction(0), Fraction(spec.n, 2) * radius - slack)


@dataclass
class Tiling:
    spec: MultigridSpec
    radius: Fraction
    vertices: list[TilingVertex]
    tiles: list[RhombusTile]
    core_radius: Fraction = Fraction(0)

    @cached_property
    def index_matrix(self) -> np.ndarray:
        if not self.vertices:
            return np.zeros((0, self.spec.n), dtype=np.int64)
        return np.array([v.index_vector for v in self.vertices], dtype=np.int64)

    @cached_property
    def positions(self) -> np.ndarray:
        """Float vertex positions, shape (V, 2); display and region tests only."""
        g = self.spec.geometry
        m = self.index_matrix
        return np.column_stack([m @ g.cos_f, m @ g.sin_f]) if len(m) else np.zeros((0, 2))

    @cached_property
    def edges(self) -> dict[tuple[int, int], int]:
        """Undirected edges mapped to the number of tiles using them."""
        count: dict[tuple[int, int], int] = {}
        for t in self.tiles:
            v = t.vertex_ids
            for u, w in ((v[0], v[1]), (v[1], v[2]), (v[2], v[3]), (v[3], v[0])):
                e = (u, w) if u < w else (w, u)
                count[e] = count.get(e, 0) + 1
        return count

    def vertex_by_index(self) -> dict[tuple[int, ...], int]:
        return {v.index_vector: v.id for v in self.vertices}


def _block_vertices(block: PairBlock) -> np.ndarray:
    """Index vectors of the four corners per intersection, shape (m, 4, n)."""
    base = block.K.copy()
    out = np.repeat(base[:, None, :], 4, axis=1)
    for c, (s, t) in enumerate(((0, 0), (1, 0), (1, 1), (0, 1))):
        out[:, c, block.a] += s
        out[:, c, block.b] += t
    return out


def _singular(spec: MultigridSpec, block: PairBlock) -> SingularityReport:
    row = block.concurrent[0][0]
    lines = [GridLine(block.a, int(block.ka[row])), GridLine(block.b, int(block.kb[row]))]
    lines += [GridLine(m, k) for r, m, k in block.concurrent if r == row]
    lines.sort()
    return SingularityReport(spec, tuple(lines), witness_for(spec, lines))


def dual_tile(spec: MultigridSpec, inter: Intersection) -> tuple[RhombusTile, list[tuple[int, ...]]]:
    """Rhombus dual to one intersection, with its four corner index vectors.

    Tile vertex ids are 0..3 in corner order; generate_tiling renumbers them.
    """
    a, b = inter.line_a, inter.line_b
    z = inter.point
    base = []
    for m in range(spec.n):
        if m == a.direction:
            base.append(a.index)
        elif m == b.direction:
            base.append(b.index)
        else:
            v = line_value(spec, m, z)
            c = certified_ceil(v)
            if (v - c).is_zero():
                lines = sorted([a, b, GridLine(m, c)])
                raise SingularPointError(SingularityReport(spec, tuple(lines), witness_for(spec, lines)))
            base.append(c)
    corners = []
    for s, t in ((0, 0), (1, 0), (1, 1), (0, 1)):
        k = list(base)
        k[a.direction] += s
        k[b.direction] += t
        corners.append(tuple(k))
    tile = RhombusTile((a.direction, b.direction), (a.index, b.index), (0, 1, 2, 3))
    return tile, corners


def generate_tiling(spec: MultigridSpec, radius, force: bool = False) -> Tiling:
    """Dualize every intersection in the closed disc of the given radius."""
    radius = Fraction(radius)
    if not force and theorem2_applies(spec) is not Verdict.REGULAR_BY_THEOREM:
        raise NotCoveredError(f"{spec.to_text()} is not covered by the regularity theorem; use force=True")
    ids: dict[tuple[int, ...], int] = {}
    vertices: list[TilingVertex] = []
    tiles: list[RhombusTile] = []
    for block in pair_blocks(spec, radius):
        if block.concurrent:
            raise SingularPointError(_singular(spec, block))
        corners = _block_vertices(block).tolist()
        for ka, kb, quad in zip(block.ka.tolist(), block.kb.tolist(), corners):
            vid = []
            for kv in quad:
                kv = tuple(kv)
                j = ids.get(kv)
                if j is None:
                    j = ids[kv] = len(vertices)
                    vertices.append(TilingVertex(j, kv, spec))
                vid.append(j)
            tiles.append(RhombusTile((block.a, block.b), (ka, kb), tuple(vid)))
    return Tiling(spec, radius, vertices, tiles, core_radius(spec, radius))


def tiling_from_parts(
    spec: MultigridSpec,
    radius,
    index_vectors: Sequence[Sequence[int]],
    tiles: Sequence[RhombusTile],
    core: Fraction | None = None,
) -> Tiling:
    """Assemble a Tiling from explicit vertices (ids in list order) and tiles."""
    radius = Fraction(radius)
    verts = [TilingVertex(i, tuple(int(x) for x in kv), spec) for i, kv in enumerate(index_vectors)]
    return Tiling(spec, radius, verts, list(tiles), core_radius(spec, radius) if core is None else Fraction(core))
