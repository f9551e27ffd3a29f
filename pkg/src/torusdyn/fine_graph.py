"""Distances in the fine curve graph of the torus.

Vertices are actual essential simple closed curves; two curves span an
edge when they are disjoint or cross exactly once.  Distances are never
claimed exactly: the module produces verifiable upper bounds (explicit
adjacency paths built by curve surgery, or crossing number bounds) and
lower bounds (the coarsely Lipschitz projection to the Farey graph of
homology classes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import (
    PLCurve,
    crossing_number,
    intersection_count,
    intersections,
    is_essential_class,
    is_simple,
    same_straight_curve,
)
from .errors import (
    InapplicableError,
    InputError,
    NonGenericError,
)
from .maps import _egcd

MAX_DELTA_HALVINGS = 12
FAREY_DEPTH_CAP = 128


# ---------------------------------------------------------------------------
# adjacency


def adjacent(a: PLCurve, b: PLCurve) -> bool:
    """Edge relation of the fine curve graph: disjoint curves or a
    single transverse crossing.  A single tangential contact is not
    decidable as an edge and raises NonGenericError."""
    for c in (a, b):
        if not is_essential_class(c.w):
            raise InapplicableError("fine graph vertices must be essential")
    pts = intersections(a, b)
    if len(pts) == 0:
        return True
    if len(pts) == 1:
        if not pts[0].transverse:
            raise NonGenericError(
                "single tangential contact; perturb before testing adjacency"
            )
        return True
    return False


# ---------------------------------------------------------------------------
# locating points along a curve


def _param_of(c: PLCurve, pt):
    """Cyclic parameter (in [0, k)) of the torus point on the curve:
    integer part the segment index, fractional part the position."""
    segs = c.segments
    for idx, (P, Q) in enumerate(segs):
        zx_lo = math.ceil(min(P[0], Q[0]) - pt[0])
        zx_hi = math.floor(max(P[0], Q[0]) - pt[0])
        zy_lo = math.ceil(min(P[1], Q[1]) - pt[1])
        zy_hi = math.floor(max(P[1], Q[1]) - pt[1])
        for zx in range(zx_lo, zx_hi + 1):
            for zy in range(zy_lo, zy_hi + 1):
                T = (pt[0] + zx, pt[1] + zy)
                if T == Q:
                    continue  # parameter 0 of the next segment
                d = (Q[0] - P[0]) * (T[1] - P[1]) - (Q[1] - P[1]) * (
                    T[0] - P[0]
                )
                if d != 0:
                    continue
                axis = 0 if abs(Q[0] - P[0]) >= abs(Q[1] - P[1]) else 1
                lo, hi = sorted((P[axis], Q[axis]))
                if not lo <= T[axis] <= hi:
                    continue
                t = (T[axis] - P[axis]) / (Q[axis] - P[axis])
                return Fraction(idx) + t
    raise NonGenericError(f"point {pt} not found on curve")


def _point_at(c: PLCurve, param: Fraction):
    """Lifted point at a cyclic parameter, following the canonical lift
    across period wraps (param may exceed k)."""
    k = len(c.verts)
    wrap, local = divmod(param, k)
    idx = int(math.floor(local))
    t = local - idx
    segs = c.segments
    P, Q = segs[idx]
    pt = (P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1]))
    return (pt[0] + wrap * c.w[0], pt[1] + wrap * c.w[1])


def _arc_chain(c: PLCurve, s: Fraction, e: Fraction):
    """Vertex chain of the lifted arc from parameter s to e > s."""
    if not e > s:
        raise InputError("arc needs increasing parameters")
    pts = [_point_at(c, s)]
    j = math.floor(s) + 1
    while j < e:
        pts.append(_point_at(c, Fraction(j)))
        j += 1
    pts.append(_point_at(c, e))
    # drop repeats when s or e sits exactly on a vertex
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# rational push-off of a PL closed curve


def _offset_curve(c: PLCurve, delta: Fraction, side: int) -> PLCurve:
    """Push the curve off itself by roughly delta to one side.

    Each edge line is translated along its left normal scaled by the
    max-norm of the direction, which keeps all coordinates rational;
    new vertices are the intersections of consecutive offset lines.
    """
    segs = c.segments
    k = len(segs)
    dirs = []
    offs = []
    for P, Q in segs:
        d = (Q[0] - P[0], Q[1] - P[1])
        m = max(abs(d[0]), abs(d[1]))
        o = (-d[1] * side * delta / m, d[0] * side * delta / m)
        dirs.append(d)
        offs.append(o)

    def line_point(i, extra):
        P = segs[i][0]
        return (P[0] + offs[i][0] + extra[0], P[1] + offs[i][1] + extra[1])

    verts = []
    for i in range(k):
        # vertex i is the meet of offset lines of edges i-1 and i; the
        # predecessor of edge 0 is edge k-1 shifted back one period
        j = (i - 1) % k
        extra_j = (-c.w[0], -c.w[1]) if i == 0 else (0, 0)
        Pj = line_point(j, extra_j)
        dj = dirs[j]
        Pi = line_point(i, (0, 0))
        di = dirs[i]
        den = dj[0] * di[1] - dj[1] * di[0]
        if den == 0:
            # collinear neighbours: both lines agree, shift the vertex
            verts.append(
                (segs[i][0][0] + offs[i][0], segs[i][0][1] + offs[i][1])
            )
            continue
        t = ((Pi[0] - Pj[0]) * di[1] - (Pi[1] - Pj[1]) * di[0]) / den
        verts.append((Pj[0] + t * dj[0], Pj[1] + t * dj[1]))
    out = [verts[0]]
    for p in verts[1:]:
        if p != out[-1]:
            out.append(p)
    return PLCurve(tuple(out), c.w)


# ---------------------------------------------------------------------------
# curve surgery


@dataclass(frozen=True)
class SurgeryStep:
    """One surgery: the replaced curve, the middle curve adjacent to
    both old and new, and the new curve with fewer crossings of the
    target."""

    middle: PLCurve
    result: PLCurve
    old_count: int
    new_count: int


def _surgery_candidates(a: PLCurve, b: PLCurve, points):
    """Candidate surgered closed chains: an innermost subarc of a
    joined with one of the two complementary arcs of b."""
    params_a = sorted((_param_of(a, p), p) for p in points)
    ka, kb = len(a.verts), len(b.verts)
    for i in range(len(params_a)):
        s_par, p_pt = params_a[i]
        e_par, q_pt = params_a[(i + 1) % len(params_a)]
        if (i + 1) % len(params_a) == 0 or e_par <= s_par:
            e_par = e_par + ka
        a_chain = _arc_chain(a, s_par, e_par)
        p_b = _param_of(b, p_pt)
        q_b = _param_of(b, q_pt)
        fwd_pq = q_b if q_b > p_b else q_b + kb
        fwd_qp = p_b if p_b > q_b else p_b + kb
        arcs = [
            list(reversed(_arc_chain(b, p_b, fwd_pq))),  # q -> p backwards
            _arc_chain(b, q_b, fwd_qp),  # q -> p forwards
        ]
        for b_chain in arcs:
            # translate the b arc so it starts at the lifted q of the
            # a subarc
            q_lift = a_chain[-1]
            dz = (q_lift[0] - b_chain[0][0], q_lift[1] - b_chain[0][1])
            if int(dz[0]) != dz[0] or int(dz[1]) != dz[1]:
                raise NonGenericError("arc endpoints disagree off-lattice")
            moved = [(x + dz[0], y + dz[1]) for x, y in b_chain]
            chain = a_chain + moved[1:]
            w = (chain[-1][0] - chain[0][0], chain[-1][1] - chain[0][1])
            if int(w[0]) != w[0] or int(w[1]) != w[1]:
                continue
            w = (int(w[0]), int(w[1]))
            if not is_essential_class(w):
                continue
            verts = [chain[0]]
            for pt in chain[1:-1]:
                if pt != verts[-1]:
                    verts.append(pt)
            try:
                gamma = PLCurve(tuple(verts), w)
            except Exception:
                continue
            if not is_simple(gamma):
                continue
            yield gamma


def surgery_step(a: PLCurve, b: PLCurve) -> SurgeryStep:
    """Replace b by a pushed-off surgered curve crossing a strictly
    fewer times, together with a middle curve adjacent to both."""
    pts = intersections(a, b)
    if any(not p.transverse for p in pts):
        raise NonGenericError("surgery needs transverse intersections")
    n0 = len(pts)
    if n0 < 2:
        raise InapplicableError("surgery needs at least two crossings")
    max_den = max(
        [v.denominator for c in (a, b) for pt in c.verts for v in pt]
    )
    delta0 = Fraction(1, 4 * max_den)
    points = [p.point for p in pts]
    for gamma in _surgery_candidates(a, b, points):
        delta = delta0
        for _ in range(MAX_DELTA_HALVINGS):
            for side in (1, -1):
                try:
                    new = _offset_curve(gamma, delta, side)
                    mid = _offset_curve(gamma, delta / 2, side)
                    if not (is_simple(new) and is_simple(mid)):
                        continue
                    n1 = len(intersections(a, new))
                    if n1 >= n0:
                        continue
                    if not adjacent(b, mid):
                        continue
                    if not adjacent(mid, new):
                        continue
                    return SurgeryStep(mid, new, n0, n1)
                except NonGenericError:
                    continue
            delta = delta / 2
    raise NonGenericError("no valid surgery push-off found")


@dataclass(frozen=True)
class CertifiedPath:
    """Explicit edge path in the fine curve graph from start to end.

    The path length certifies the distance upper bound; verify()
    re-checks every adjacency in exact arithmetic."""

    curves: tuple
    intersection_count: int

    @property
    def length(self) -> int:
        return len(self.curves) - 1

    def verify(self) -> bool:
        return self.verify_detail()[0]

    def verify_detail(self):
        """(ok, failed_step): failed_step is the index of the first
        bad vertex or edge (edge i joins curves i and i+1), or None."""
        if len(self.curves) < 1:
            return False, 0
        for i, c in enumerate(self.curves):
            if not (is_essential_class(c.w) and is_simple(c)):
                return False, i
        for i, (u, v) in enumerate(zip(self.curves, self.curves[1:])):
            try:
                if not adjacent(u, v):
                    return False, i
            except NonGenericError:
                return False, i
        return True, None

    def to_json_dict(self):
        return {
            "type": "fine_path",
            "length": self.length,
            "intersection_count": self.intersection_count,
            "curves": [curve_to_json(c) for c in self.curves],
        }


def curve_to_json(c: PLCurve) -> dict:
    return {
        "class": list(c.w),
        "verts": [[str(x), str(y)] for x, y in c.verts],
    }


def curve_from_json(d: dict) -> PLCurve:
    return PLCurve(
        tuple((Fraction(x), Fraction(y)) for x, y in d["verts"]),
        tuple(d["class"]),
    )


def upper_bound_by_intersection(a: PLCurve, b: PLCurve) -> CertifiedPath:
    """Constructive distance bound d(a, b) <= 2 i(a, b) + 2 via
    repeated surgery; the returned path starts at b and ends at a."""
    for c in (a, b):
        if not is_essential_class(c.w):
            raise InapplicableError("curves must be essential")
    pts = intersections(a, b)
    if any(not p.transverse for p in pts):
        raise NonGenericError("distance bound needs transverse crossings")
    i0 = len(pts)
    path = [b]
    cur = b
    budget = 2 * i0 + 2
    while len(intersections(a, cur)) > 1:
        step = surgery_step(a, cur)
        path.extend([step.middle, step.result])
        cur = step.result
        if len(path) - 1 > budget:
            raise NonGenericError("surgery exceeded the certified budget")
    if cur.verts != a.verts or cur.w != a.w:
        path.append(a)
    cp = CertifiedPath(tuple(path), i0)
    if cp.length > budget:
        raise NonGenericError("surgery exceeded the certified budget")
    return cp


def crossing_upper_bound(a: PLCurve, b: PLCurve) -> int:
    """Distance bound d(a, b) <= crossing number + 1."""
    return crossing_number(a, b) + 1


# ---------------------------------------------------------------------------
# Farey graph of homology classes


def farey_class(w) -> tuple:
    """Canonical representative of +-(p, q) primitive."""
    p, q = int(w[0]), int(w[1])
    if not is_essential_class((p, q)):
        raise InputError("Farey vertices are primitive nonzero classes")
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return (p, q)


def farey_adjacent(u, v) -> bool:
    u, v = farey_class(u), farey_class(v)
    return abs(u[0] * v[1] - u[1] * v[0]) == 1


def _farey_neighbors_toward(v, target):
    """Neighbour candidates of v whose direction brackets the target.

    All neighbours of v form one family r0 + k v up to sign; a
    geodesic step must stay in the slope corridor of the target, so a
    small window of k around the bracketing value suffices.
    """
    p, q = v
    g, x, y = _egcd(p, q)
    r0, s0 = -y, x  # det((p, q), (r0, s0)) = 1
    tp, tq = target
    den = p * tq - q * tp
    if den == 0:
        k_star = 0
    else:
        k_star = (s0 * tp - r0 * tq) // den
    out = set()
    for k in range(k_star - 3, k_star + 4):
        out.add(farey_class((r0 + k * p, s0 + k * q)))
    return out


def farey_distance(u, v) -> int:
    """Graph distance in the Farey graph, by bidirectional search with
    corridor-pruned neighbour generation."""
    u, v = farey_class(u), farey_class(v)
    if u == v:
        return 0
    side_u = {u: 0}
    side_v = {v: 0}
    frontier_u = [u]
    frontier_v = [v]
    for depth in range(FAREY_DEPTH_CAP):
        if len(frontier_u) <= len(frontier_v):
            frontier, dist, other, target = frontier_u, side_u, side_v, v
        else:
            frontier, dist, other, target = frontier_v, side_v, side_u, u
        new_frontier = []
        best = None
        for node in frontier:
            for nb in _farey_neighbors_toward(node, target):
                if nb in other:
                    cand = dist[node] + 1 + other[nb]
                    best = cand if best is None else min(best, cand)
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    new_frontier.append(nb)
        if best is not None:
            return best
        if frontier is frontier_u:
            frontier_u = new_frontier
        else:
            frontier_v = new_frontier
        if not new_frontier:
            break
    raise NonGenericError("Farey search exceeded its depth cap")


def farey_lower_bound(a: PLCurve, b: PLCurve) -> int:
    """Fine graph distance is bounded below by the Farey distance of
    the homology classes (the class projection is 1-Lipschitz on
    curves in distinct classes)."""
    return farey_distance(a.w, b.w)


# ---------------------------------------------------------------------------
# translation length bounds


@dataclass(frozen=True)
class LengthBoundEntry:
    n: int
    upper_numerator: int
    lower_numerator: int

    def to_json_dict(self):
        return {
            "n": self.n,
            "upper_numerator": self.upper_numerator,
            "lower_numerator": self.lower_numerator,
        }


@dataclass(frozen=True)
class TranslationLengthBounds:
    """Measured bounds on the asymptotic translation length of the map
    on the fine curve graph along the orbit of one curve.

    upper is min over n of the distance bound divided by n, valid by
    subadditivity of orbit distances; lower reports the best observed
    Farey growth rate, valid when the Farey translation length itself
    is the target of comparison."""

    lower: float
    upper: float
    entries: tuple
    route: str

    def to_json_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "route": self.route,
            "entries": [e.to_json_dict() for e in self.entries],
        }


def translation_length_bounds(
    F, a: PLCurve, n_max: int, res: int = 32
) -> TranslationLengthBounds:
    from .curves import affine_image_curve, image_curve
    from .maps import isotopy_class, power

    if n_max < 1:
        raise InputError("n_max must be positive")
    cls = isotopy_class(F)
    route = cls.kind
    affine = all(
        p.type_name in ("linear", "translation") for p in F.primitives
    )
    entries = []
    lower = 0.0
    upper = math.inf
    for n in range(1, n_max + 1):
        if affine:
            bn = affine_image_curve(power(F, n), a)
        else:
            bn = image_curve(F, a, res=res, reference=a, n=n)
        if same_straight_curve(a, bn):
            up = 0
        elif cls.kind == "identity" and bn.w == a.w:
            up = crossing_number(a, bn) + 1
        else:
            up = 2 * intersection_count(a, bn) + 2
        low = farey_distance(a.w, bn.w) if bn.w != a.w else 0
        entries.append(LengthBoundEntry(n, up, low))
        upper = min(upper, up / n)
        lower = max(lower, low / n)
    return TranslationLengthBounds(lower, upper, tuple(entries), route)


# ---------------------------------------------------------------------------
# annulus trap certificates


@dataclass(frozen=True)
class AnnulusCertificate:
    """Numerical invariant-annulus certificate: the power N image of
    the horizontal annulus lo <= y <= hi lands strictly inside with the
    stated margin, sampled on the stated grid."""

    lo: Fraction
    hi: Fraction
    power: int
    samples: int
    margin: float
    map_json: dict

    def to_json_dict(self):
        return {
            "type": "annulus_trap",
            "lo": str(self.lo),
            "hi": str(self.hi),
            "power": self.power,
            "samples": self.samples,
            "margin": self.margin,
            "map": self.map_json,
        }


def annulus_trap_certificate(
    F, lo, hi, max_power: int = 3, samples: int = 512
):
    """Search for N <= max_power with F^N(annulus) strictly inside the
    horizontal annulus.  Returns the first certificate found or None.

    The check samples the two boundary circles; it is a numerical
    certificate whose margin quantifies the observed clearance.
    """
    import numpy as np

    from .maps import isotopy_class, iterate_points

    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi < lo + 1:
        raise InputError("annulus needs lo < hi < lo + 1")
    if isotopy_class(F).kind not in ("identity", "twist_power"):
        return None
    xs = (np.arange(samples, dtype=float) + 0.5) / samples
    flo, fhi = float(lo), float(hi)
    boundary = np.concatenate(
        [
            np.column_stack([xs, np.full(samples, flo)]),
            np.column_stack([xs, np.full(samples, fhi)]),
        ]
    )
    for N in range(1, max_power + 1):
        img = iterate_points(F, boundary, N)
        ys = img[:, 1]
        margin = float(min(ys.min() - flo, fhi - ys.max()))
        if margin > 0.0:
            return AnnulusCertificate(
                lo, hi, N, int(samples), margin, F.to_json()
            )
    return None


def verify_certificate(cert: dict) -> dict:
    """Re-check a serialized certificate.  Returns a report dict with
    'valid' plus recomputed figures."""
    if not isinstance(cert, dict) or "type" not in cert:
        raise InputError("certificate must be a dict with a 'type' field")
    if cert["type"] == "fine_path":
        curves = [curve_from_json(d) for d in cert["curves"]]
        path = CertifiedPath(tuple(curves), int(cert["intersection_count"]))
        ok, failed = path.verify_detail()
        budget = 2 * path.intersection_count + 2
        out = {
            "type": "fine_path",
            "valid": bool(ok and path.length <= budget),
            "length": path.length,
            "budget": budget,
        }
        if failed is not None:
            out["failed_step"] = failed
        return out
    if cert["type"] == "annulus_trap":
        from .maps import map_from_json

        F = map_from_json(cert["map"])
        again = annulus_trap_certificate(
            F,
            Fraction(cert["lo"]),
            Fraction(cert["hi"]),
            max_power=int(cert["power"]),
            samples=int(cert["samples"]),
        )
        valid = (
            again is not None
            and again.power <= int(cert["power"])
            and again.margin > 0.0
        )
        return {
            "type": "annulus_trap",
            "valid": bool(valid),
            "margin": None if again is None else again.margin,
        }
    raise InputError(f"unknown certificate type: {cert['type']!r}")
