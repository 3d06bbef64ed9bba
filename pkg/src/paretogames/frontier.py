"""Exact planar Pareto frontiers.

A :class:`Frontier` represents a nonempty, downward-closed, convex subset of
the plane by the canonical vertex list of its Pareto frontier: x strictly
increasing, y strictly decreasing, segment slopes strictly decreasing.  The
represented set is

    { (a, b) : a <= x_last and b <= F(a) }

where ``F(a) = y_first`` for ``a <= x_first`` and F interpolates linearly on
``[x_first, x_last]`` — i.e. the polyline extended by an implicit horizontal
ray to the left and vertical ray below the last vertex.

All coordinates are :class:`fractions.Fraction`; every operation is exact and
pure, so frontiers are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import BadDirection, EmptyInput, OutOfDomain, WeightsInvalid

Point = tuple[Fraction, Fraction]
RationalLike = Union[int, str, Fraction, Rational]

#: Sentinel for the slope of the vertical ray below the last vertex.  It is a
#: float so that exact Fraction slopes compare correctly against it.
MINUS_INFINITY = float("-inf")


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, rational strings like ``"-2/3"``, and Fractions exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):  # bool is an int; reject it as a coordinate
        raise TypeError("boolean is not a coordinate")
    if isinstance(value, (int, str, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            "float coordinates are not accepted; pass Fraction, int, or 'p/q' string"
        )
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_point(pair: Sequence[RationalLike]) -> Point:
    if len(pair) != 2:
        raise TypeError(f"a point needs exactly two coordinates, got {pair!r}")
    return (as_fraction(pair[0]), as_fraction(pair[1]))


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Frontier:
    """Canonical Pareto frontier of a downward-closed convex planar set."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise EmptyInput("a frontier needs at least one vertex")
        verts = tuple((as_fraction(x), as_fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            if not (x0 < x1 and y0 > y1):
                raise ValueError(
                    f"vertices must be strictly decreasing staircase-free: "
                    f"({x0},{y0}) then ({x1},{y1})"
                )
        for a, b, c in zip(verts, verts[1:], verts[2:]):
            if _cross(a, b, c) >= 0:
                raise ValueError(
                    f"vertices must be strictly concave: {a}, {b}, {c} are not"
                )

    # -- basic accessors ----------------------------------------------------

    @property
    def x_first(self) -> Fraction:
        return self.vertices[0][0]

    @property
    def x_last(self) -> Fraction:
        return self.vertices[-1][0]

    @property
    def y_first(self) -> Fraction:
        return self.vertices[0][1]

    @property
    def y_last(self) -> Fraction:
        return self.vertices[-1][1]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:  # keep exact but compact
        pts = ", ".join(f"({x},{y})" for x, y in self.vertices)
        return f"Frontier[{pts}]"


PointsLike = Union[Frontier, Iterable[Sequence[RationalLike]]]


def _vertices_of(f: PointsLike) -> tuple[Point, ...]:
    if isinstance(f, Frontier):
        return f.vertices
    return tuple(as_point(p) for p in f)


# ---------------------------------------------------------------------------
# Canonicalization


def canonicalize(points: PointsLike) -> Frontier:
    """Frontier of the downward-closed convex hull of ``points``.

    Keeps the maximal (non-dominated) points, then the upper concave chain
    of those, removing collinear interior vertices.  Idempotent.
    """
    pts = sorted(set(_vertices_of(points)))
    if not pts:
        raise EmptyInput("cannot build a frontier from no points")
    # Domination sweep: walk x descending, keep points with strictly
    # increasing y.  Equal x was collapsed to the max y by the sort order.
    kept: list[Point] = []
    best_y: Fraction | None = None
    i = len(pts) - 1
    while i >= 0:
        x = pts[i][0]
        # the last point with this x in sorted order has the greatest y
        top = pts[i]
        while i >= 0 and pts[i][0] == x:
            i -= 1
        if best_y is None or top[1] > best_y:
            kept.append(top)
            best_y = top[1]
    kept.reverse()  # now x strictly increasing, y strictly decreasing
    # Upper concave hull: drop middle vertex whenever the turn is not
    # strictly right (cross >= 0 means collinear or convex dent).
    hull: list[Point] = []
    for p in kept:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    return Frontier(tuple(hull))


# ---------------------------------------------------------------------------
# Evaluation / slopes


def evaluate(f: Frontier, x: RationalLike) -> Fraction | None:
    """F(x): the frontier height at x, or None right of the domain."""
    x = as_fraction(x)
    if x > f.x_last:
        return None
    if x <= f.x_first:
        return f.y_first
    verts = f.vertices
    lo, hi = 0, len(verts) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if verts[mid][0] <= x:
            lo = mid
        else:
            hi = mid
    (x0, y0), (x1, y1) = verts[lo], verts[hi]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def slope_at(f: Frontier, x: RationalLike) -> tuple[Fraction, Union[Fraction, float]]:
    """(left slope, right slope) of the frontier at x.

    Left of the first vertex both slopes are 0 (horizontal ray); at the last
    vertex the right slope is MINUS_INFINITY (vertical ray).  At a vertex the
    left slope is the incoming segment's and the right slope the outgoing
    segment's; inside a segment both equal the segment slope.
    """
    x = as_fraction(x)
    if x > f.x_last:
        raise OutOfDomain(f"slope queried at x={x} > x_last={f.x_last}")
    verts = f.vertices

    def seg_slope(i: int) -> Fraction:
        (x0, y0), (x1, y1) = verts[i], verts[i + 1]
        return (y1 - y0) / (x1 - x0)

    if x < f.x_first:
        return (Fraction(0), Fraction(0))
    if x == f.x_first:
        left = Fraction(0)
        right: Union[Fraction, float] = (
            MINUS_INFINITY if len(verts) == 1 else seg_slope(0)
        )
        return (left, right)
    # locate the segment [verts[lo], verts[lo+1]] containing x (x > x_first)
    lo, hi = 0, len(verts) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if verts[mid][0] < x:
            lo = mid
        else:
            hi = mid
    if x == verts[hi][0]:  # at a vertex
        left = seg_slope(hi - 1)
        right = MINUS_INFINITY if hi == len(verts) - 1 else seg_slope(hi)
        return (left, right)
    s = seg_slope(lo)
    return (s, s)


# ---------------------------------------------------------------------------
# Set operations


def dwc_conv_union(f1: Frontier, f2: Frontier) -> Frontier:
    """Frontier of the downward-closed convex hull of the union."""
    return canonicalize(f1.vertices + f2.vertices)


def intersect_min(f1: Frontier, f2: Frontier) -> Frontier:
    """Frontier of the intersection: pointwise min on x <= min(x_last)."""
    x_hi = min(f1.x_last, f2.x_last)
    xs = sorted(
        {v[0] for v in f1.vertices if v[0] <= x_hi}
        | {v[0] for v in f2.vertices if v[0] <= x_hi}
        | {x_hi}
    )
    pts: list[Point] = []
    vals: list[tuple[Fraction, Fraction]] = []
    for x in xs:
        y1 = evaluate(f1, x)
        y2 = evaluate(f2, x)
        assert y1 is not None and y2 is not None
        vals.append((y1, y2))
        pts.append((x, min(y1, y2)))
    # exact crossing points inside each cell where the difference changes sign
    for (xa, (a1, a2)), (xb, (b1, b2)) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        da, db = a1 - a2, b1 - b2
        if (da > 0 > db) or (da < 0 < db):
            t = da / (da - db)
            xc = xa + (xb - xa) * t
            yc = a1 + (b1 - a1) * t
            pts.append((xc, yc))
    return canonicalize(pts)


def translate(f: Frontier, v: Sequence[RationalLike]) -> Frontier:
    """Shift every vertex by the vector v."""
    vx, vy = as_point(v)
    return Frontier(tuple((x + vx, y + vy) for x, y in f.vertices))


def weighted_sum(terms: Sequence[tuple[RationalLike, Frontier]]) -> Frontier:
    """Frontier of the probability-weighted Minkowski sum of 1-2 sets.

    Built by summing the scaled first vertices and then appending all scaled
    segments in order of strictly decreasing slope (equal slopes merge) —
    scaling a segment by p > 0 keeps its slope, so the merged chain is the
    frontier of the scaled Minkowski sum.
    """
    if not 1 <= len(terms) <= 2:
        raise WeightsInvalid(f"need 1-2 weighted terms, got {len(terms)}")
    weights = [as_fraction(p) for p, _ in terms]
    if any(p <= 0 for p in weights):
        raise WeightsInvalid(f"weights must be positive, got {weights}")
    if sum(weights) != 1:
        raise WeightsInvalid(f"weights must sum to 1, got {weights}")
    fronts = [f for _, f in terms]
    start = (
        sum(p * f.x_first for p, f in zip(weights, fronts)),
        sum(p * f.y_first for p, f in zip(weights, fronts)),
    )
    # gather scaled segment vectors with their slopes
    segs: list[tuple[Fraction, Fraction, Fraction]] = []  # (slope, dx, dy)
    for p, f in zip(weights, fronts):
        for (x0, y0), (x1, y1) in zip(f.vertices, f.vertices[1:]):
            dx, dy = p * (x1 - x0), p * (y1 - y0)
            segs.append((dy / dx, dx, dy))
    segs.sort(key=lambda s: s[0], reverse=True)
    verts: list[Point] = [start]
    for slope, dx, dy in segs:
        x, y = verts[-1]
        verts.append((x + dx, y + dy))
    # merging of equal-slope neighbours falls out of canonicalization
    return canonicalize(verts)


# ---------------------------------------------------------------------------
# Queries


def support(f: Frontier, w: Sequence[RationalLike]) -> Fraction:
    """max of w . z over the represented set, for w >= 0, w != 0."""
    w1, w2 = as_point(w)
    if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
        raise BadDirection(f"direction must be >=0 and nonzero, got ({w1},{w2})")
    # For w >= 0 the max over the downward-closed set is attained on the
    # vertex list (the rays only move points down/left).
    return max(w1 * x + w2 * y for x, y in f.vertices)


def contains(f: Frontier, z: Sequence[RationalLike]) -> bool:
    """Whether the point z lies in the represented downward-closed set."""
    zx, zy = as_point(z)
    yy = evaluate(f, zx)
    return yy is not None and zy <= yy


def extremal_points(f: Frontier) -> tuple[Point, ...]:
    """The canonical vertex list (the extremal points of the set)."""
    return f.vertices


_SLOPE_CAP = Fraction(1000)


def distance(f1: Frontier, f2: Frontier) -> Fraction:
    """Heuristic convergence gauge between two frontiers (not a metric).

    Max vertical gap |F1(x) - F2(x)| over the union of vertex x's and both
    x_last; where exactly one side is undefined, the horizontal overhang
    |x_last difference| is charged at the adjacent slope magnitude, clamped
    to [1, 1000].  Exact results never depend on this gauge.
    """
    xs = sorted(
        {v[0] for v in f1.vertices}
        | {v[0] for v in f2.vertices}
        | {f1.x_last, f2.x_last}
    )
    gap = Fraction(0)
    for x in xs:
        y1 = evaluate(f1, x)
        y2 = evaluate(f2, x)
        if y1 is not None and y2 is not None:
            gap = max(gap, abs(y1 - y2))
        else:
            # exactly one undefined: charge the x_last overhang once
            inner = f1 if y2 is None else f2
            overhang = abs(f1.x_last - f2.x_last)
            lslope, _ = slope_at(inner, inner.x_last)
            mag = min(max(abs(lslope), Fraction(1)), _SLOPE_CAP)
            gap = max(gap, overhang * mag)
    return gap


# ---------------------------------------------------------------------------
# Serialization


def frontier_to_csv(f: Frontier) -> str:
    """One row per vertex, each coordinate as an explicit 'num/den' string."""
    lines = [
        f"{x.numerator}/{x.denominator},{y.numerator}/{y.denominator}"
        for x, y in f.vertices
    ]
    return "\n".join(lines) + "\n"


def frontier_from_csv(text: str) -> Frontier:
    pts: list[Point] = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        a, b = line.split(",")
        pts.append((Fraction(a.strip()), Fraction(b.strip())))
    return canonicalize(pts)


def frontier_to_svg(
    f: Frontier,
    title: str = "frontier",
    width: int = 480,
    height: int = 360,
) -> str:
    """A standalone SVG drawing of the frontier with its rays clipped.

    Floating point is used only to place pixels; the underlying data stays
    exact.
    """
    xs = [float(x) for x, _ in f.vertices]
    ys = [float(y) for _, y in f.vertices]
    span_x = max(xs) - min(xs) or 1.0
    span_y = max(ys) - min(ys) or 1.0
    pad_x, pad_y = 0.25 * span_x, 0.25 * span_y
    lo_x, hi_x = min(xs) - pad_x, max(xs) + pad_x
    lo_y, hi_y = min(ys) - pad_y, max(ys) + pad_y
    margin = 40.0

    def px(x: float) -> float:
        return margin + (x - lo_x) / (hi_x - lo_x) * (width - 2 * margin)

    def py(y: float) -> float:
        return height - margin - (y - lo_y) / (hi_y - lo_y) * (height - 2 * margin)

    # polyline with the horizontal ray clipped at the left edge and the
    # vertical ray clipped at the bottom edge
    coords = [(lo_x, ys[0])] + list(zip(xs, ys)) + [(xs[-1], lo_y)]
    points_attr = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in coords)
    dots = "".join(
        f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="#c0392b"/>'
        for x, y in zip(xs, ys)
    )
    labels = "".join(
        f'<text x="{px(x) + 6:.2f}" y="{py(y) - 6:.2f}" font-size="10" '
        f'fill="#333">({vx},{vy})</text>'
        for (x, y), (vx, vy) in zip(zip(xs, ys), f.vertices)
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
        f'<rect width="{width}" height="{height}" fill="white"/>'
        f'<text x="{margin}" y="20" font-size="12" fill="#111">{title}</text>'
        f'<polyline points="{points_attr}" fill="none" stroke="#2c3e50" '
        f'stroke-width="2"/>'
        f"{dots}{labels}</svg>"
    )
