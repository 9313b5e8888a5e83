"""Checks of generated patches: rhombi, edge-to-edge, rotational symmetry.

Everything is decided with integer index-vector arithmetic or exact
cyclotomic arithmetic.  Floats only choose which vertices lie in the core
disc, with a safety margin, so the tested set is always a subset of the
truly complete region.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclotomic import RationalAngle, _monomials
from .dualizer import Tiling, corner_angle, shape_class
from .multigrid import MultigridSpec

CORE_MARGIN = 1e-6


class UnsupportedOrder(ValueError):
    """Rotation order that does not map the edge-direction star to itself."""


@dataclass
class ValidationReport:
    rhombus_ok: bool
    edge_to_edge_ok: bool
    symmetry: dict[int, bool] = field(default_factory=dict)
    shape_census: dict[RationalAngle, int] = field(default_factory=dict)
    core_radius: Fraction = Fraction(0)

    def to_dict(self) -> dict:
        return {
            "rhombus_ok": self.rhombus_ok,
            "edge_to_edge_ok": self.edge_to_edge_ok,
            "symmetry": {str(k): v for k, v in sorted(self.symmetry.items())},
            "shape_census": {str(k): v for k, v in sorted(self.shape_census.items(), key=lambda kv: kv[0].value)},
            "core_radius": _fmt(self.core_radius),
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def core_mask(tiling: Tiling) -> np.ndarray:
    """Vertices safely inside the core disc."""
    pos = tiling.positions
    r = float(tiling.core_radius) - CORE_MARGIN
    if r <= 0 or not len(pos):
        return np.zeros(len(pos), dtype=bool)
    return np.hypot(pos[:, 0], pos[:, 1]) < r


# ---------------------------------------------------------------------------


def check_rhombi(tiling: Tiling) -> bool:
    """Every tile is a unit rhombus with edges +-zeta^i, +-zeta^j."""
    spec = tiling.spec
    g = spec.geometry
    for i in range(spec.n):
        d = g.direction(i)
        if d * d.conjugate() != 1:
            return False
    if not tiling.tiles:
        return True
    nv = len(tiling.vertices)
    ids = np.array([t.vertex_ids for t in tiling.tiles], dtype=np.int64)
    if ids.min() < 0 or ids.max() >= nv:
        return False
    dirs = np.array([t.dirs for t in tiling.tiles], dtype=np.int64)
    if np.any(dirs[:, 0] == dirs[:, 1]) or dirs.min() < 0 or dirs.max() >= spec.n:
        return False
    kv = tiling.index_matrix[ids]  # (T, 4, n)
    eye = np.eye(spec.n, dtype=np.int64)
    ei, ej = eye[dirs[:, 0]], eye[dirs[:, 1]]
    steps = [
        (kv[:, 1] - kv[:, 0], ei),
        (kv[:, 2] - kv[:, 1], ej),
        (kv[:, 2] - kv[:, 3], ei),
        (kv[:, 3] - kv[:, 0], ej),
    ]
    return all(np.array_equal(got, want) for got, want in steps)


def check_edge_to_edge(tiling: Tiling) -> bool:
    """Tiles meet full edge to full edge inside the core disc.

    No edge is used by more than two tiles; edges with both ends in the
    core are used by exactly two; the tile corners around each core vertex
    add up to exactly a full turn (a partial overlap or a gap would break
    the sum).
    """
    spec = tiling.spec
    edges = tiling.edges
    if any(c > 2 for c in edges.values()):
        return False
    inside = core_mask(tiling)
    for (u, w), c in edges.items():
        if inside[u] and inside[w] and c != 2:
            return False
    turn: Counter = Counter()
    angle_cache: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    for t in tiling.tiles:
        if t.dirs not in angle_cache:
            a = corner_angle(spec, t.dirs).value
            angle_cache[t.dirs] = (a, 1 - a)
        a, b = angle_cache[t.dirs]
        v = t.vertex_ids
        for vid, ang in ((v[0], a), (v[1], b), (v[2], a), (v[3], b)):
            if inside[vid]:
                turn[vid] += ang
    return all(turn.get(int(v), 0) == 2 for v in np.flatnonzero(inside))


# ---------------------------------------------------------------------------
# symmetry


def _check_order(spec: MultigridSpec, order: int) -> None:
    if order < 1 or (2 * spec.n) % order:
        raise UnsupportedOrder(f"order {order} does not divide {2 * spec.n}")


def k_action(spec: MultigridSpec, order: int):
    """Induced action of the rotation by 2 pi / order on index vectors.

    Returns (perm, sign, shift) with K'(i) = sign[i] * K[perm[i]] + shift[i],
    or None when the offsets are not compatible with a combinatorial action.
    """
    _check_order(spec, order)
    n = spec.n
    step = spec.base_angle.value
    perm, sign, shift = [], [], []
    for i in range(n):
        # angle of R^-1 zeta^i, in multiples of pi
        target = (step * i - Fraction(2, order)) % 2
        for j in range(n):
            d = (target - step * j) % 2
            if d in (0, 1):
                break
        else:  # pragma: no cover - excluded by _check_order
            raise UnsupportedOrder(order)
        gi, gj = spec.offsets[i], spec.offsets[j]
        if d == 0:
            c = gj - gi
            if c.denominator != 1:
                return None
            perm.append(j), sign.append(1), shift.append(int(c))
        else:
            c = gj + gi
            if c.denominator != 1:
                return None
            perm.append(j), sign.append(-1), shift.append(1 - int(c))
    return np.array(perm), np.array(sign), np.array(shift)


def _core_tiles(tiling: Tiling, inside: np.ndarray) -> list[int]:
    return [k for k, t in enumerate(tiling.tiles) if all(inside[v] for v in t.vertex_ids)]


def symmetry_combinatorial(tiling: Tiling, order: int) -> bool | None:
    action = k_action(tiling.spec, order)
    if action is None:
        return None
    perm, sign, shift = action
    inside = core_mask(tiling)
    mat = tiling.index_matrix
    images = mat[:, perm] * sign + shift
    known = tiling.vertex_by_index()
    image_ids = np.full(len(mat), -1, dtype=np.int64)
    for v in np.flatnonzero(inside):
        j = known.get(tuple(images[v].tolist()))
        if j is None:
            return False
        image_ids[v] = j
    tile_keys = {frozenset(t.vertex_ids) for t in tiling.tiles}
    for k in _core_tiles(tiling, inside):
        if frozenset(int(image_ids[v]) for v in tiling.tiles[k].vertex_ids) not in tile_keys:
            return False
    return True


def _embedding_matrix(spec: MultigridSpec) -> np.ndarray:
    """Row i: coefficients of zeta_n^i at conductor 2n."""
    g = spec.geometry
    rows = [g.direction(i) for i in range(spec.n)]
    return np.array([r.key()[2] for r in rows], dtype=np.int64)


def symmetry_geometric(tiling: Tiling, order: int) -> bool:
    """Rotate exact vertex positions (elements of Q(zeta_2n)) and look them up."""
    spec = tiling.spec
    _check_order(spec, order)
    n2 = spec.conductor
    emb = _embedding_matrix(spec)
    mat = tiling.index_matrix
    d = emb.shape[1]
    rows = _monomials(n2)
    rot = np.array([rows[(e + n2 // order) % n2] for e in range(d)], dtype=np.int64)
    # integer coordinates stay far below 2^63 for any desk-scale patch
    bound = (np.abs(mat).max(initial=0) * np.abs(emb).sum(axis=0).max()) * np.abs(rot).sum(axis=0).max()
    if bound >= 2**62:
        raise OverflowError("index vectors too large for exact int64 rotation")
    pos = mat @ emb
    # multiplication by zeta_2n^(2n/order) acts linearly on coefficient vectors
    rotated = pos @ rot
    known = {tuple(p): k for k, p in enumerate(pos.tolist())}
    inside = core_mask(tiling)
    image_ids = {}
    for v in np.flatnonzero(inside):
        j = known.get(tuple(rotated[v].tolist()))
        if j is None:
            return False
        image_ids[int(v)] = j
    tile_keys = {frozenset(t.vertex_ids) for t in tiling.tiles}
    for k in _core_tiles(tiling, inside):
        if frozenset(image_ids[v] for v in tiling.tiles[k].vertex_ids) not in tile_keys:
            return False
    return True


def check_rotational_symmetry(tiling: Tiling, order: int) -> bool:
    """Invariance of the core patch under rotation by 2 pi / order about 0."""
    result = symmetry_combinatorial(tiling, order)
    if result is None:
        result = symmetry_geometric(tiling, order)
    return result


def shape_census(tiling: Tiling) -> dict[RationalAngle, int]:
    count: Counter = Counter()
    for t in tiling.tiles:
        count[t.dirs] += 1
    out: Counter = Counter()
    for dirs, c in count.items():
        out[shape_class(tiling.spec, dirs)] += c
    return dict(sorted(out.items(), key=lambda kv: kv[0].value))


def symmetry_orders(spec: MultigridSpec) -> list[int]:
    """Orders worth testing: n, and 2n for even n or offset 1/2."""
    return sorted({spec.n, 2 * spec.n})


def validate(tiling: Tiling, orders=None) -> ValidationReport:
    orders = symmetry_orders(tiling.spec) if orders is None else orders
    return ValidationReport(
        rhombus_ok=check_rhombi(tiling),
        edge_to_edge_ok=check_edge_to_edge(tiling),
        symmetry={m: check_rotational_symmetry(tiling, m) for m in orders},
        shape_census=shape_census(tiling),
        core_radius=tiling.core_radius,
    )
