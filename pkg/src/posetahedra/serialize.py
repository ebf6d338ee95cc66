"""JSON wire formats and the OFF export.

Rationals are serialized as "p/q" strings with positive denominator and
coprime parts, so every export round-trips exactly.  The shipped schemas
are enforced on both import and export.
"""

from __future__ import annotations

import json
from decimal import Decimal, getcontext
from fractions import Fraction
import jsonschema

from .affine import AffinePoset, build_affine_poset
from .compact import ConfigPoint
from .polytope import RationalPolytope
from .poset import Poset, build_poset
from .rational import format_rational, parse_rational
from .tubes import Tube, Tubing

POSET_SCHEMA = {
    "type": "object",
    "properties": {
        "covers": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer"},
                "minItems": 2,
                "maxItems": 2,
            },
        }
    },
    "required": ["covers"],
    "additionalProperties": False,
}

AFFINE_POSET_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "covers": POSET_SCHEMA["properties"]["covers"],
    },
    "required": ["n", "covers"],
    "additionalProperties": False,
}

RATIONAL = {"type": "string", "pattern": "^-?[0-9]+/[1-9][0-9]*$"}

POLYTOPE_SCHEMA = {
    "type": "object",
    "properties": {
        "chart_dim": {"type": "integer", "minimum": 0},
        "vertices": {
            "type": "array",
            "items": {"type": "array", "items": RATIONAL},
        },
        "facets": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "normal": {"type": "array", "items": RATIONAL},
                    "offset": RATIONAL,
                    "tube": {"type": "array", "items": {"type": "integer"}},
                },
                "required": ["normal", "offset"],
            },
        },
        "vertex_labels": {"type": "array"},
    },
    "required": ["chart_dim", "vertices", "facets"],
}

CONFIG_POINT_SCHEMA = {
    "type": "object",
    "properties": {
        "tubes": {
            "type": "object",
            "patternProperties": {
                "^-?[0-9]+(,-?[0-9]+)*$": {"type": "array", "items": RATIONAL}
            },
            "additionalProperties": False,
        }
    },
    "required": ["tubes"],
    "additionalProperties": False,
}


def poset_to_json(P: Poset) -> dict:
    return {"covers": [list(c) for c in P.covers]}


def poset_from_json(data) -> Poset:
    jsonschema.validate(data, POSET_SCHEMA)
    return build_poset([tuple(c) for c in data["covers"]])


def affine_poset_to_json(A: AffinePoset) -> dict:
    return {"n": A.n, "covers": [list(c) for c in A.gen_covers]}


def affine_poset_from_json(data) -> AffinePoset:
    jsonschema.validate(data, AFFINE_POSET_SCHEMA)
    return build_affine_poset(data["n"], [tuple(c) for c in data["covers"]])


def tubing_from_json(P: Poset, data) -> Tubing:
    return Tubing.of(P, [Tube.of(t) for t in data])


def _label_json(label) -> list:
    """Vertex labels are admissible tubings; emit just the proper tubes."""
    tubes = [t for t in label if getattr(t, "members", None) and not getattr(t, "is_full", False)]
    if not tubes:
        return []
    ground = set().union(*(t.members for t in tubes))
    ambient = None if any(getattr(t, "is_full", False) for t in label) else tuple(sorted(ground))
    proper = [t for t in tubes if len(t.members) > 1 and t.members != ambient]
    return sorted(list(t.members) for t in proper)


def polytope_to_json(Q: RationalPolytope) -> dict:
    out = {
        "chart_dim": Q.dim,
        "vertices": [[format_rational(x) for x in v] for v in Q.vertices],
        "facets": [
            {
                "normal": [format_rational(x) for x in f.normal],
                "offset": format_rational(f.offset),
                **({"tube": _facet_tube(f.label)} if _facet_tube(f.label) is not None else {}),
            }
            for f in Q.facets
        ],
    }
    if Q.vertex_labels is not None:
        out["vertex_labels"] = [_label_json(lab) for lab in Q.vertex_labels]
    jsonschema.validate(out, POLYTOPE_SCHEMA)
    return out


def _facet_tube(label) -> list[int] | None:
    """Facets of realized polytopes are labeled by one proper tube each.

    The label is an admissible tubing; dropping the ambient tube (the whole
    poset, or the full-line marker) and the singletons leaves the tube.
    """
    if label is None:
        return None
    try:
        tubes = [t for t in label if not getattr(t, "is_full", False)]
    except TypeError:
        return None
    if not tubes or any(not hasattr(t, "members") for t in tubes):
        return None
    ground = set().union(*(t.members for t in tubes))
    ambient = None if any(getattr(t, "is_full", False) for t in label) else tuple(sorted(ground))
    proper = [t for t in tubes if len(t.members) > 1 and t.members != ambient]
    if len(proper) == 1:
        return list(proper[0].members)
    return None


def polytope_from_json(data) -> RationalPolytope:
    """Rebuild vertices/facets exactly; incidence is recomputed and certified."""
    from .polytope import Facet, polytope_from_data

    jsonschema.validate(data, POLYTOPE_SCHEMA)
    vertices = [tuple(parse_rational(x) for x in v) for v in data["vertices"]]
    facets = [
        Facet(
            tuple(parse_rational(x) for x in f["normal"]),
            parse_rational(f["offset"]),
            label=tuple(f["tube"]) if "tube" in f else None,
        )
        for f in data["facets"]
    ]
    return polytope_from_data(data["chart_dim"], vertices, facets)


def config_point_to_json(c: ConfigPoint) -> dict:
    tubes = {}
    for tube in sorted(c.components, key=lambda t: t.members):
        vec = c.components[tube]
        key = ",".join(str(i) for i in tube.members)
        tubes[key] = [format_rational(vec[i]) for i in tube.members]
    out = {"tubes": tubes}
    jsonschema.validate(out, CONFIG_POINT_SCHEMA)
    return out


def config_point_from_json(P: Poset, data) -> ConfigPoint:
    jsonschema.validate(data, CONFIG_POINT_SCHEMA)
    comps = {}
    for key, values in data["tubes"].items():
        members = tuple(int(x) for x in key.split(","))
        comps[Tube.of(members)] = {
            i: parse_rational(v) for i, v in zip(members, values)
        }
    point = ConfigPoint(P, comps)
    point.validate()
    return point


def ratio_report_to_json(report) -> dict:
    def curve_json(curve):
        return {
            "target": "inf" if curve.target is None else format_rational(curve.target),
            "samples": [
                {
                    "t": format_rational(t),
                    "x": {str(i): format_rational(v) for i, v in sorted(x.items())},
                    "ratio": format_rational(r),
                }
                for t, x, r in curve.samples
            ],
        }

    return {
        "poset": poset_to_json(report.host),
        "curves": [curve_json(c) for c in report.curves],
        "limit": config_point_to_json(report.limit),
        "pair_deviation": [[format_rational(t), format_rational(d)] for t, d in report.pair_deviation],
        "limit_deviation": [[format_rational(t), format_rational(d)] for t, d in report.limit_deviation],
        "ratio_gap": [[format_rational(t), format_rational(g)] for t, g in report.ratio_gap],
    }


def polytope_to_off(Q: RationalPolytope, precision: int = 12) -> str:
    """OFF export with decimal approximations (flagged approximate).

    Only 2- and 3-dimensional polytopes have a standard OFF rendering; 3d
    facet vertex cycles are ordered by angle inside each facet plane using
    float projections, which only affects the (approximate) output order.
    """
    if Q.dim not in (2, 3):
        raise ValueError("OFF export supports dimensions 2 and 3 only")
    getcontext().prec = precision + 10

    def fmt(x: Fraction) -> str:
        q = Decimal(x.numerator) / Decimal(x.denominator)
        return f"{q:.{precision}f}"

    verts3 = [tuple(v) + (Fraction(0),) * (3 - Q.dim) for v in Q.vertices]
    if Q.dim == 2:
        faces = [_cycle2d(Q)]
    else:
        faces = [_cycle3d(Q, k) for k in range(len(Q.facets))]
    lines = [
        "OFF",
        f"# approximate coordinates ({precision} decimal digits); "
        "exact data lives in the JSON export",
        f"{len(verts3)} {len(faces)} 0",
    ]
    lines += [" ".join(fmt(x) for x in v) for v in verts3]
    lines += [str(len(f)) + " " + " ".join(map(str, f)) for f in faces]
    return "\n".join(lines) + "\n"


def _cycle2d(Q: RationalPolytope) -> list[int]:
    import math

    cx = [float(sum(v[k] for v in Q.vertices)) / len(Q.vertices) for k in range(2)]
    order = sorted(
        range(len(Q.vertices)),
        key=lambda i: math.atan2(float(Q.vertices[i][1]) - cx[1], float(Q.vertices[i][0]) - cx[0]),
    )
    return order


def _cycle3d(Q: RationalPolytope, k: int) -> list[int]:
    import math

    ids = sorted(Q.incidence[k])
    pts = [tuple(map(float, Q.vertices[i])) for i in ids]
    cx = [sum(p[a] for p in pts) / len(pts) for a in range(3)]
    normal = tuple(map(float, Q.facets[k].normal))
    # build a 2d frame inside the facet plane
    axis = min(range(3), key=lambda a: abs(normal[a]))
    e1 = [0.0, 0.0, 0.0]
    e1[axis] = 1.0
    u = _cross(normal, e1)
    v = _cross(normal, u)
    angles = []
    for i, p in zip(ids, pts):
        rel = [p[a] - cx[a] for a in range(3)]
        angles.append((math.atan2(_dot(rel, v), _dot(rel, u)), i))
    return [i for _, i in sorted(angles)]


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
