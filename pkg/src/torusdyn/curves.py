"""Exact PL curves on the torus.

A curve is stored as one period of a lift: a chain of rational vertices
v_0 ... v_{k-1} in R^2 plus the integer closing displacement w, so the
chain continues with v_0 + w.  The displacement is the homology class.
All predicates (simplicity, intersection, crossing numbers) are decided
in exact rational arithmetic over integer deck translates, with a float
bounding box prefilter that only prunes, never decides.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InapplicableError,
    InputError,
    MalformedCurveError,
    NonGenericError,
    ResolutionError,
)
from .maps import LiftedMap, _egcd, evaluate_points, iterate_points, linear_part

BBOX_PAD = 1e-9
SNAP_DENOMINATOR = 10**9
IMAGE_RETRIES = 8


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise MalformedCurveError(f"cannot coerce {x!r} to a rational")


@dataclass(frozen=True)
class PLCurve:
    """One period of a lifted closed PL curve on the torus."""

    verts: tuple
    w: tuple

    def __post_init__(self):
        verts = tuple(
            (_frac(v[0]), _frac(v[1])) for v in self.verts
        )
        if not verts:
            raise MalformedCurveError("curve needs at least one vertex")
        w = self.w
        if len(w) != 2 or any(int(v) != v for v in w):
            raise MalformedCurveError("closing displacement must be integral")
        w = (int(w[0]), int(w[1]))
        k = len(verts)
        closing = (verts[0][0] + w[0], verts[0][1] + w[1])
        for i in range(k):
            nxt = verts[i + 1] if i + 1 < k else closing
            if verts[i] == nxt:
                raise MalformedCurveError("zero-length edge in curve chain")
        object.__setattr__(self, "verts", verts)
        object.__setattr__(self, "w", w)

    @property
    def segments(self) -> tuple:
        v = self.verts
        closing = (v[0][0] + self.w[0], v[0][1] + self.w[1])
        return tuple(
            (v[i], v[i + 1] if i + 1 < len(v) else closing)
            for i in range(len(v))
        )

    def translated(self, dx, dy) -> "PLCurve":
        dx, dy = _frac(dx), _frac(dy)
        return PLCurve(
            tuple((x + dx, y + dy) for x, y in self.verts), self.w
        )

    def to_float_array(self) -> np.ndarray:
        return np.asarray([[float(x), float(y)] for x, y in self.verts])


def homology_class(c: PLCurve) -> tuple:
    return c.w


def is_essential_class(w) -> bool:
    return w != (0, 0) and math.gcd(abs(w[0]), abs(w[1])) == 1


def straight_curve(w, base=(0, 0)) -> PLCurve:
    """The straight curve of class w through the base point."""
    w = (int(w[0]), int(w[1]))
    if not is_essential_class(w):
        raise InputError("straight curve class must be primitive")
    return PLCurve(((_frac(base[0]), _frac(base[1])),), w)


def horizontal_circle(y) -> PLCurve:
    return straight_curve((1, 0), (Fraction(0), _frac(y)))


def vertical_circle(x) -> PLCurve:
    return straight_curve((0, 1), (_frac(x), Fraction(0)))


# ---------------------------------------------------------------------------
# exact segment predicates


def _cross3(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _seg_contact(p1, p2, q1, q2):
    """Contact of two closed rational segments.

    Returns ('none', None), ('point', pt) or ('overlap', None); the
    overlap case means a common subsegment of positive length.
    """
    d1 = _cross3(p1, p2, q1)
    d2 = _cross3(p1, p2, q2)
    d3 = _cross3(q1, q2, p1)
    d4 = _cross3(q1, q2, p2)
    if d1 == 0 and d2 == 0:
        axis = 0 if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]) else 1
        a0, a1 = sorted((p1[axis], p2[axis]))
        b0, b1 = sorted((q1[axis], q2[axis]))
        lo, hi = max(a0, b0), min(a1, b1)
        if lo > hi:
            return ("none", None)
        if lo < hi:
            return ("overlap", None)
        pt = p1 if p1[axis] == lo else p2
        return ("point", pt)
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0):
        return ("none", None)
    if (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return ("none", None)
    t = d3 / (d3 - d4)
    pt = (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
    return ("point", pt)


# ---------------------------------------------------------------------------
# candidate generation: float bounding boxes over integer translates


def _bbox_arrays(segments):
    lo = np.empty((len(segments), 2))
    hi = np.empty((len(segments), 2))
    for i, (p, q) in enumerate(segments):
        px, py = float(p[0]), float(p[1])
        qx, qy = float(q[0]), float(q[1])
        lo[i, 0], hi[i, 0] = min(px, qx), max(px, qx)
        lo[i, 1], hi[i, 1] = min(py, qy), max(py, qy)
    return lo - BBOX_PAD, hi + BBOX_PAD


def _pair_candidates(segs_a, segs_b, chunk: int = 256):
    """Yield (i, j, z) with bbox(segs_a[i]) meeting bbox(segs_b[j]) + z
    for an integer vector z.  Complete over all contacts; may yield
    false positives."""
    lo_a, hi_a = _bbox_arrays(segs_a)
    lo_b, hi_b = _bbox_arrays(segs_b)
    for start in range(0, len(segs_a), chunk):
        sl = slice(start, min(start + chunk, len(segs_a)))
        zx_lo = np.ceil(lo_a[sl, 0][:, None] - hi_b[:, 0][None, :])
        zx_hi = np.floor(hi_a[sl, 0][:, None] - lo_b[:, 0][None, :])
        zy_lo = np.ceil(lo_a[sl, 1][:, None] - hi_b[:, 1][None, :])
        zy_hi = np.floor(hi_a[sl, 1][:, None] - lo_b[:, 1][None, :])
        mask = (zx_lo <= zx_hi) & (zy_lo <= zy_hi)
        for ii, jj in np.argwhere(mask):
            i = start + int(ii)
            j = int(jj)
            for zx in range(int(zx_lo[ii, jj]), int(zx_hi[ii, jj]) + 1):
                for zy in range(int(zy_lo[ii, jj]), int(zy_hi[ii, jj]) + 1):
                    yield i, j, (zx, zy)


def _translate_seg(seg, z):
    (p, q) = seg
    return (
        (p[0] + z[0], p[1] + z[1]),
        (q[0] + z[0], q[1] + z[1]),
    )


# ---------------------------------------------------------------------------
# simplicity


def is_simple(c: PLCurve) -> bool:
    """Exact embeddedness check of the closed curve on the torus."""
    segs = c.segments
    k = len(segs)
    w = c.w
    for i, j, z in _pair_candidates(segs, segs):
        # (i, j, z) and (j, i, -z) describe the same segment pair; keep
        # one representative and skip a segment against itself
        if i > j or (i == j and z <= (0, 0)):
            continue
        kind, pt = _seg_contact(*segs[i], *_translate_seg(segs[j], z))
        if kind == "none":
            continue
        if kind == "overlap":
            return False
        allowed = False
        if j == i + 1 and z == (0, 0):
            allowed = pt == segs[i][1]
        elif i == 0 and j == k - 1 and z == (-w[0], -w[1]):
            allowed = pt == segs[0][0]
        elif k == 1:
            allowed = (z == w and pt == segs[0][1]) or (
                z == (-w[0], -w[1]) and pt == segs[0][0]
            )
        if not allowed:
            return False
    return True


def is_essential(c: PLCurve) -> bool:
    return is_essential_class(c.w) and is_simple(c)


# ---------------------------------------------------------------------------
# torus intersections with transversality


def _canonical_point(pt):
    x, y = pt
    return (x - math.floor(x), y - math.floor(y))


def _local_rays(c: PLCurve, pt):
    """Directions (d_in, d_out) of the curve branch through the torus
    point pt (canonical representative).  Assumes the curve is simple,
    so there is exactly one branch."""
    segs = c.segments
    k = len(segs)
    hits = []
    for idx, (P, Q) in enumerate(segs):
        zx_lo = math.ceil(min(P[0], Q[0]) - pt[0])
        zx_hi = math.floor(max(P[0], Q[0]) - pt[0])
        zy_lo = math.ceil(min(P[1], Q[1]) - pt[1])
        zy_hi = math.floor(max(P[1], Q[1]) - pt[1])
        for zx in range(zx_lo, zx_hi + 1):
            for zy in range(zy_lo, zy_hi + 1):
                T = (pt[0] + zx, pt[1] + zy)
                if T == P:
                    continue  # counted as the previous segment's endpoint
                d = _cross3(P, Q, T)
                if d != 0:
                    continue
                axis = 0 if abs(Q[0] - P[0]) >= abs(Q[1] - P[1]) else 1
                lo, hi = sorted((P[axis], Q[axis]))
                if not lo <= T[axis] <= hi:
                    continue
                d_in = (Q[0] - P[0], Q[1] - P[1])
                if T == Q:
                    nP, nQ = segs[(idx + 1) % k]
                    d_out = (nQ[0] - nP[0], nQ[1] - nP[1])
                else:
                    d_out = d_in
                hits.append((d_in, d_out))
    if len(hits) != 1:
        raise NonGenericError(
            f"expected one curve branch through {pt}, found {len(hits)}"
        )
    return hits[0]


def _in_left_sector(a_plus, a_minus, u) -> bool:
    """Whether ray u lies strictly in the sector counterclockwise from
    a_plus to a_minus (the left side of the oriented corner)."""
    if _cross2(a_plus, u) == 0 or _cross2(u, a_minus) == 0:
        raise NonGenericError("ray collinear with curve corner")
    c = _cross2(a_plus, a_minus)
    if c > 0:
        return _cross2(a_plus, u) > 0 and _cross2(u, a_minus) > 0
    if c < 0:
        return _cross2(a_plus, u) > 0 or _cross2(u, a_minus) > 0
    return _cross2(a_plus, u) > 0


@dataclass(frozen=True)
class Intersection:
    point: tuple
    transverse: bool


def intersections(a: PLCurve, b: PLCurve) -> list:
    """All torus intersection points of two simple curves, each flagged
    transverse or touching.  Overlapping subsegments raise
    NonGenericError."""
    segs_a = a.segments
    segs_b = b.segments
    points = set()
    for i, j, z in _pair_candidates(segs_a, segs_b):
        kind, pt = _seg_contact(*segs_a[i], *_translate_seg(segs_b[j], z))
        if kind == "overlap":
            raise NonGenericError("curves share a subsegment")
        if kind == "point":
            points.add(_canonical_point(pt))
    out = []
    for pt in sorted(points):
        a_in, a_out = _local_rays(a, pt)
        b_in, b_out = _local_rays(b, pt)
        a_plus = a_out
        a_minus = (-a_in[0], -a_in[1])
        r1 = (-b_in[0], -b_in[1])
        r2 = b_out
        transverse = _in_left_sector(a_plus, a_minus, r1) != _in_left_sector(
            a_plus, a_minus, r2
        )
        out.append(Intersection(pt, transverse))
    return out


def intersection_count(a: PLCurve, b: PLCurve) -> int:
    """Number of torus intersection points; fast exact path for a pair
    of straight curves."""
    if _is_straight(a) and _is_straight(b):
        det = _cross2(a.w, b.w)
        if det != 0:
            return abs(det)
    return len(intersections(a, b))


def _is_straight(c: PLCurve) -> bool:
    v0 = c.verts[0]
    w = c.w
    return all(
        (v[0] - v0[0]) * w[1] - (v[1] - v0[1]) * w[0] == 0 for v in c.verts
    )


def same_straight_curve(a: PLCurve, b: PLCurve) -> bool:
    """Whether two straight curves are the same subset of the torus."""
    if not (_is_straight(a) and _is_straight(b)):
        return False
    if _cross2(a.w, b.w) != 0:
        return False
    va, vb = a.verts[0], b.verts[0]
    h0 = a.w[0] * (vb[1] - va[1]) - a.w[1] * (vb[0] - va[0])
    return Fraction(h0).denominator == 1


def straight_class_intersection(u, v) -> int:
    """Minimal intersection number of the straight curves in classes u
    and v: the absolute homological pairing."""
    if not (is_essential_class(tuple(u)) and is_essential_class(tuple(v))):
        raise InputError("classes must be primitive and nonzero")
    return abs(u[0] * v[1] - u[1] * v[0])


# ---------------------------------------------------------------------------
# crossing number


def _complement_vector(w):
    g, x, y = _egcd(w[0], w[1])
    if g != 1:
        raise InapplicableError("base curve class must be primitive")
    # det(w, wp) = w0*x + w1*y = 1
    return (-y, x)


def crossing_number(a: PLCurve, b: PLCurve, validate: bool = True) -> int:
    """Number of distinct elevations of a met by one period of a lift
    of b in the plane.

    Elevations of a are indexed by deck translates modulo the cyclic
    group generated by the class of a.  Requires transverse crossings;
    touching contacts raise NonGenericError when validate is set.
    """
    if not is_essential_class(a.w):
        raise InapplicableError("crossing number needs an essential base curve")
    if _is_straight(a) and _is_straight(b):
        # elevations of a are the parallel lines h(x) = r for the
        # integer height h(x) = det(w_a, x - v_a); one period of b
        # sweeps h from h0 to h0 + det(w_a, w_b)
        va = a.verts[0]
        vb = b.verts[0]
        h0 = a.w[0] * (vb[1] - va[1]) - a.w[1] * (vb[0] - va[0])
        step = _cross2(a.w, b.w)
        if step == 0:
            if h0.denominator == 1:
                raise NonGenericError("parallel straight curves overlap")
            return 0
        lo, hi = sorted((h0, h0 + step))
        return max(0, math.floor(hi) - math.ceil(lo) + 1)
    if validate:
        for isec in intersections(a, b):
            if not isec.transverse:
                raise NonGenericError(
                    f"touching contact at {isec.point}; crossing number "
                    "needs transverse intersections"
                )
    w = a.w
    segs_a = a.segments
    segs_b = b.segments
    cosets = set()
    for j, i, z in _pair_candidates(segs_b, segs_a):
        # contact between segs_a[i] + z and segs_b[j]
        kind, _ = _seg_contact(*_translate_seg(segs_a[i], z), *segs_b[j])
        if kind == "overlap":
            raise NonGenericError("curves share a subsegment")
        if kind == "point":
            cosets.add(w[0] * z[1] - w[1] * z[0])
    return len(cosets)


# ---------------------------------------------------------------------------
# finite covers


def lift_to_cover(c: PLCurve, n: int, offset=(0, 0)) -> PLCurve:
    """A connected lift of the curve to the degree n^2 characteristic
    cover, rescaled back to the unit torus.

    The lift concatenates n periods of the chain; offset picks the
    elevation (offsets differing by the lattice generated by the class
    and n Z^2 give the same component)."""
    if n < 1 or int(n) != n:
        raise InputError("cover degree must be a positive integer")
    if not is_essential_class(c.w):
        raise InapplicableError("cover lift needs an essential curve")
    if any(int(v) != v for v in offset):
        raise InputError("elevation offset must be integral")
    n = int(n)
    ox, oy = int(offset[0]), int(offset[1])
    verts = []
    for m in range(n):
        for x, y in c.verts:
            verts.append(
                (
                    Fraction(x + m * c.w[0] + ox, n),
                    Fraction(y + m * c.w[1] + oy, n),
                )
            )
    return PLCurve(tuple(verts), c.w)


# ---------------------------------------------------------------------------
# image curves


def image_curve(
    F: LiftedMap,
    c: PLCurve,
    res: int = 16,
    reference: PLCurve = None,
    snap_denominator: int = SNAP_DENOMINATOR,
    n: int = 1,
) -> PLCurve:
    """Simple PL approximation of the image of the curve under the
    n-th iterate of the map.

    Samples res points per edge, maps them, snaps to rationals and
    closes with the exact image class A^n w.  If a reference curve is
    given the result must meet it transversally (or not at all); a
    deterministic translation schedule retries failed transversality.
    """
    if res < 1 or int(res) != res:
        raise InputError("resolution must be a positive integer")
    if n < 1 or int(n) != n:
        raise InputError("iterate count must be a positive integer")
    A = ((1, 0), (0, 1))
    A1 = linear_part(F)
    for _ in range(int(n)):
        A = (
            (
                A1[0][0] * A[0][0] + A1[0][1] * A[1][0],
                A1[0][0] * A[0][1] + A1[0][1] * A[1][1],
            ),
            (
                A1[1][0] * A[0][0] + A1[1][1] * A[1][0],
                A1[1][0] * A[0][1] + A1[1][1] * A[1][1],
            ),
        )
    w_img = (
        A[0][0] * c.w[0] + A[0][1] * c.w[1],
        A[1][0] * c.w[0] + A[1][1] * c.w[1],
    )
    samples = []
    for P, Q in c.segments:
        for s in range(int(res)):
            t = s / res
            samples.append(
                (
                    float(P[0]) * (1.0 - t) + float(Q[0]) * t,
                    float(P[1]) * (1.0 - t) + float(Q[1]) * t,
                )
            )
    if n == 1:
        mapped = evaluate_points(F, np.asarray(samples))
    else:
        mapped = iterate_points(F, np.asarray(samples), int(n))

    verts = []
    for x, y in mapped:
        fx = Fraction(float(x)).limit_denominator(snap_denominator)
        fy = Fraction(float(y)).limit_denominator(snap_denominator)
        if verts and verts[-1] == (fx, fy):
            continue  # snap collision, drop the duplicate
        verts.append((fx, fy))
    while len(verts) > 1 and verts[-1] == (
        verts[0][0] + w_img[0],
        verts[0][1] + w_img[1],
    ):
        verts.pop()
    if not verts:
        raise ResolutionError("all image samples snapped together")

    base = PLCurve(tuple(verts), w_img)
    if not is_simple(base):
        # maps with flat stretches can snap distinct image arcs onto
        # exactly overlapping segments; a deterministic microscopic
        # vertex jitter separates them without moving the curve beyond
        # snapping precision
        for k in range(1, IMAGE_RETRIES + 1):
            jittered = tuple(
                (
                    x + Fraction(k * ((37 * i) % 101 - 50), 10**12),
                    y + Fraction(k * ((53 * i) % 101 - 50), 10**12),
                )
                for i, (x, y) in enumerate(verts)
            )
            cand = PLCurve(jittered, w_img)
            if is_simple(cand):
                base = cand
                break
        else:
            raise ResolutionError(
                "image sampling is not simple; raise the resolution"
            )
    if reference is None:
        return base
    shift = (Fraction(1, 10**9), Fraction(1, 2 * 10**9))
    for attempt in range(IMAGE_RETRIES + 1):
        cand = base if attempt == 0 else base.translated(
            attempt * shift[0], attempt * shift[1]
        )
        try:
            if all(i.transverse for i in intersections(cand, reference)):
                return cand
        except NonGenericError:
            pass
    raise ResolutionError(
        "could not place the image curve transverse to the reference"
    )


def affine_image_curve(F: LiftedMap, c: PLCurve) -> PLCurve:
    """Exact image of a curve under a chain of linear and translation
    primitives.  Raises InapplicableError for other primitives."""
    from .maps import Linear as _Linear
    from .maps import Translation as _Translation

    verts = list(c.verts)
    for prim in F.primitives:
        if isinstance(prim, _Linear):
            (a, b), (d, e) = prim.matrix
            verts = [(a * x + b * y, d * x + e * y) for x, y in verts]
        elif isinstance(prim, _Translation):
            tx, ty = Fraction(prim.v[0]), Fraction(prim.v[1])
            verts = [(x + tx, y + ty) for x, y in verts]
        else:
            raise InapplicableError("exact images need an affine chain")
    ox, oy = F.deck_offset
    verts = [(x + ox, y + oy) for x, y in verts]
    A = linear_part(F)
    w_img = (
        A[0][0] * c.w[0] + A[0][1] * c.w[1],
        A[1][0] * c.w[0] + A[1][1] * c.w[1],
    )
    return PLCurve(tuple(verts), w_img)


# ---------------------------------------------------------------------------
# file format


_CLASS_RE = re.compile(r"^#\s*class\s+(-?\d+)\s+(-?\d+)\s*$")


def parse_curve(text: str) -> PLCurve:
    """Parse the curve file format: one '# class a b' line and one
    vertex 'x y' per line with rational coordinates."""
    w = None
    verts = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        m = _CLASS_RE.match(line)
        if m:
            if w is not None:
                raise InputError("duplicate class line in curve file")
            w = (int(m.group(1)), int(m.group(2)))
            continue
        if line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"bad curve vertex line: {line!r}")
        try:
            verts.append((Fraction(parts[0]), Fraction(parts[1])))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad rational in curve file: {line!r}")
    if w is None:
        raise InputError("curve file is missing the '# class a b' line")
    if not verts:
        raise InputError("curve file has no vertices")
    return PLCurve(tuple(verts), w)


def format_curve(c: PLCurve) -> str:
    lines = [f"# class {c.w[0]} {c.w[1]}"]
    for x, y in c.verts:
        lines.append(f"{x} {y}")
    return "\n".join(lines) + "\n"


def read_curve(path) -> PLCurve:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_curve(fh.read())


def write_curve(path, c: PLCurve) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_curve(c))
