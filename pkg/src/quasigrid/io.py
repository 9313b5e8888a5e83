"""Tiling interchange (JSON) and SVG rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping
from xml.sax.saxutils import quoteattr

from .cyclotomic import RationalAngle
from .dualizer import RhombusTile, Tiling, shape_class, tiling_from_parts
from .multigrid import MultigridSpec, format_rational, parse_rational
from .validator import core_mask

FORMAT_VERSION = "1"

DEFAULT_PALETTE = (
    "#f2c14e", "#5b8e7d", "#e07a5f", "#3d5a80", "#98c1d9", "#b56576",
    "#81b29a", "#f4a261", "#6d597a", "#2a9d8f", "#e9c46a", "#8d99ae",
)


class FormatError(ValueError):
    pass


def tiling_to_dict(tiling: Tiling) -> dict:
    pos = tiling.positions
    return {
        "format_version": FORMAT_VERSION,
        "spec": tiling.spec.to_dict(),
        "radius": format_rational(tiling.radius),
        "core_radius": format_rational(tiling.core_radius),
        "vertices": [
            {"id": v.id, "index_vector": list(v.index_vector), "position": [round(float(x), 9) for x in pos[v.id]]}
            for v in tiling.vertices
        ],
        "tiles": [
            {"dirs": list(t.dirs), "lines": list(t.lines), "vertex_ids": list(t.vertex_ids)} for t in tiling.tiles
        ],
    }


def tiling_from_dict(data: Mapping) -> Tiling:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version!r}")
    spec = MultigridSpec.from_dict(data["spec"])
    verts = sorted(data["vertices"], key=lambda v: v["id"])
    if [v["id"] for v in verts] != list(range(len(verts))):
        raise FormatError("vertex ids must be 0..V-1")
    for v in verts:
        if len(v["index_vector"]) != spec.n:
            raise FormatError(f"vertex {v['id']} has the wrong dimension")
    tiles = [
        RhombusTile(tuple(t["dirs"]), tuple(t["lines"]), tuple(t["vertex_ids"])) for t in data["tiles"]
    ]
    return tiling_from_parts(
        spec,
        parse_rational(data["radius"]),
        [v["index_vector"] for v in verts],
        tiles,
        core=parse_rational(data["core_radius"]),
    )


def dumps(tiling: Tiling) -> str:
    return json.dumps(tiling_to_dict(tiling), separators=(",", ":"))


def loads(text: str) -> Tiling:
    return tiling_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# SVG


@dataclass
class RenderOptions:
    scale: float = 40.0  # pixels per unit edge
    stroke_width: float = 1.0
    stroke: str = "#222222"
    palette: Mapping[RationalAngle, str] | None = None
    crop_to_core: bool = False
    margin: float = 10.0
    background: str | None = "#ffffff"


def _num(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _palette(tiling: Tiling, options: RenderOptions) -> dict[RationalAngle, str]:
    n = tiling.spec.n
    classes = sorted({shape_class(tiling.spec, (0, j)) for j in range(1, n)}, key=lambda a: a.value)
    colours = {c: DEFAULT_PALETTE[k % len(DEFAULT_PALETTE)] for k, c in enumerate(classes)}
    if options.palette:
        colours.update(options.palette)
    return colours


def render_svg(tiling: Tiling, options: RenderOptions | None = None) -> str:
    """SVG 1.1 document with one polygon per tile, in tile-key order."""
    options = options or RenderOptions()
    spec = tiling.spec
    pos = tiling.positions
    tiles = sorted(tiling.tiles, key=lambda t: t.key)
    if options.crop_to_core:
        inside = core_mask(tiling)
        tiles = [t for t in tiles if all(inside[v] for v in t.vertex_ids)]
    colours = _palette(tiling, options)
    s = options.scale

    used = sorted({v for t in tiles for v in t.vertex_ids})
    if used:
        pts = pos[used]
        xmin, ymin = pts[:, 0].min() * s, -pts[:, 1].max() * s
        xmax, ymax = pts[:, 0].max() * s, -pts[:, 1].min() * s
    else:
        xmin = ymin = xmax = ymax = 0.0
    m = options.margin
    x0, y0 = xmin - m, ymin - m
    w, h = xmax - xmin + 2 * m, ymax - ymin + 2 * m

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(w)}" height="{_num(h)}" '
        f'viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}">',
        f"<title>{spec.to_text()}</title>",
    ]
    if options.background:
        out.append(
            f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(w)}" height="{_num(h)}" fill={quoteattr(options.background)}/>'
        )
    out.append(
        f'<g stroke={quoteattr(options.stroke)} stroke-width="{_num(options.stroke_width)}" stroke-linejoin="round">'
    )
    step = spec.base_angle
    for t in tiles:
        ids = list(t.vertex_ids)
        # 00-10-11-01 is clockwise when zeta^j lies more than pi past zeta^i
        if (step * (t.dirs[1] - t.dirs[0])).value % 2 > 1:
            ids.reverse()
        pts = " ".join(f"{_num(pos[v, 0] * s)},{_num(-pos[v, 1] * s)}" for v in ids)
        fill = colours[shape_class(spec, t.dirs)]
        out.append(f'<polygon points="{pts}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def spec_from_args(n: int, offset: str | None, offsets: str | None) -> MultigridSpec:
    if offset is not None and offsets is not None:
        raise ValueError("give either --offset or --offsets, not both")
    if offsets is not None:
        return MultigridSpec(n, tuple(offsets.split(",")))
    if offset is not None:
        return MultigridSpec.uniform(n, offset)
    raise ValueError("one of --offset or --offsets is required")


__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "RenderOptions",
    "dumps",
    "loads",
    "render_svg",
    "tiling_from_dict",
    "tiling_to_dict",
]
