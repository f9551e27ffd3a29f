"""Isometry-type classification of torus homeomorphism lifts acting
on the fine curve graph.

The classifier routes on the isotopy class of the map.  Maps isotopic
to an Anosov linear model are hyperbolic outright.  Twist power maps
are judged through the rotation interval on the associated cyclic
cover.  Maps isotopic to the identity are judged through the shape of
the rotation set estimate: interior forces hyperbolic, a segment of
irrational slope is consistent with parabolic, a segment through low
denominator rational points is consistent with elliptic, and a point
shape stays undetermined unless a trapped annulus certificate upgrades
it to a certified elliptic verdict.

Verdicts carry the word "consistent" whenever they rest on sampled
numerics rather than an exact certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DivergenceError,
    InapplicableError,
    InputError,
    NonGenericError,
    ResolutionError,
)
from .fine_graph import (
    AnnulusCertificate,
    annulus_trap_certificate,
    farey_distance,
)
from .maps import LiftedMap, isotopy_class, power
from .rotation import (
    DEFAULT_THRESHOLDS,
    ShapeThresholds,
    mz_estimate,
    twist_rotation_interval,
)

HYPERBOLIC = "Hyperbolic"
PARABOLIC_CONSISTENT = "ParabolicConsistent"
ELLIPTIC_CONSISTENT = "EllipticConsistent"
ELLIPTIC_CERTIFIED = "EllipticCertified"
UNDETERMINED = "Undetermined"

DEFAULT_ANNULI = ((Fraction(1, 4), Fraction(3, 4)),
                  (Fraction(1, 8), Fraction(7, 8)),
                  (Fraction(3, 8), Fraction(5, 8)),
                  (Fraction(0), Fraction(1, 2)),
                  (Fraction(1, 2), Fraction(1)))


@dataclass(frozen=True)
class ClassifyParams:
    """Tunable knobs for the classifier.

    n            iterate count for rotation set estimates
    grid         grid resolution per axis for rotation set estimates
    samples      lattice resolution for twist rotation intervals
    eps_len      twist interval length above which the action is
                 declared hyperbolic
    max_q        largest denominator accepted when matching rational
                 slopes, points and interval values
    thresholds   shape classification tolerances
    annuli       horizontal annuli probed for trap certificates
    annulus_power   largest iterate tried per annulus
    annulus_samples boundary sample count per annulus check
    """

    n: int = 1000
    grid: int = 64
    samples: int = 24
    eps_len: float = 0.05
    max_q: int = 100
    thresholds: ShapeThresholds = DEFAULT_THRESHOLDS
    annuli: tuple = DEFAULT_ANNULI
    annulus_power: int = 3
    annulus_samples: int = 512

    def to_json_dict(self):
        return {
            "n": self.n,
            "grid": self.grid,
            "samples": self.samples,
            "eps_len": self.eps_len,
            "max_q": self.max_q,
            "eps_point": self.thresholds.eps_point,
            "eps_width": self.thresholds.eps_width,
            "eps_area": self.thresholds.eps_area,
            "annuli": [[str(lo), str(hi)] for lo, hi in self.annuli],
            "annulus_power": self.annulus_power,
            "annulus_samples": self.annulus_samples,
        }


@dataclass
class Classification:
    """Outcome of the classifier.

    verdict      one of Hyperbolic, ParabolicConsistent,
                 EllipticConsistent, EllipticCertified, Undetermined
    route        which decision path produced the verdict
    evidence     route specific numeric evidence
    certificate  trapped annulus certificate when one was found
    notes        human readable remarks accumulated along the way
    params       echo of the parameters used
    """

    verdict: str
    route: str
    evidence: dict
    certificate: AnnulusCertificate = None
    notes: list = field(default_factory=list)
    params: ClassifyParams = None

    def to_json_dict(self):
        out = {
            "verdict": self.verdict,
            "route": self.route,
            "evidence": self.evidence,
            "notes": list(self.notes),
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json_dict()
        if self.params is not None:
            out["params"] = self.params.to_json_dict()
        return out


def area_budget(area: float) -> float:
    """Upper bound sqrt(8 area / sqrt 3) on the asymptotic translation
    length compatible with a rotation set of the given area."""
    if area < 0:
        raise InputError("area must be nonnegative")
    return math.sqrt(8.0 * area / math.sqrt(3.0))


def _nearest_rational_value(x: float, max_q: int):
    """Best rational p/q with q <= max_q close to x, or None."""
    frac = Fraction(x).limit_denominator(max_q)
    return frac


def _segment_rational_point(shape, tol: float, max_q: int):
    """Search the classified segment for a rational point with both
    denominators bounded by max_q within tol of the segment."""
    (x0, y0), (x1, y1) = shape.endpoints
    dx, dy = x1 - x0, y1 - y0
    length = math.hypot(dx, dy)
    if length == 0:
        cands = [(Fraction(x0).limit_denominator(max_q),
                  Fraction(y0).limit_denominator(max_q))]
    else:
        cands = []
        seen = set()
        for q in range(1, max_q + 1):
            steps = max(2, int(length * q) + 2)
            for s in range(steps + 1):
                t = s / steps
                px = x0 + t * dx
                py = y0 + t * dy
                fx = Fraction(round(px * q), q)
                fy = Fraction(round(py * q), q)
                if (fx, fy) in seen:
                    continue
                seen.add((fx, fy))
                cands.append((fx, fy))
    best = None
    for fx, fy in cands:
        d = _point_segment_distance(
            (float(fx), float(fy)), (x0, y0), (x1, y1))
        if d <= tol and (best is None or d < best[2]):
            best = (fx, fy, d)
    return best


def _point_segment_distance(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den == 0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / den
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _try_annulus_certificates(F: LiftedMap, params: ClassifyParams):
    """Probe the configured horizontal annuli for a trap certificate."""
    for lo, hi in params.annuli:
        try:
            cert = annulus_trap_certificate(
                F, lo, hi,
                max_power=params.annulus_power,
                samples=params.annulus_samples,
            )
        except (InapplicableError, ResolutionError, DivergenceError):
            continue
        if cert is not None:
            return cert
    return None


def _classify_identity(F: LiftedMap, params: ClassifyParams,
                       route: str, notes: list) -> Classification:
    est = mz_estimate(F, params.n, params.grid,
                      thresholds=params.thresholds)
    shape = est.shape
    evidence = {
        "shape": shape.to_json_dict(),
        "n": params.n,
        "grid": params.grid,
    }
    if shape.kind == "interior":
        evidence["area"] = shape.area
        evidence["area_budget"] = area_budget(shape.area)
        notes.append(
            "rotation set estimate has nonempty interior; the action "
            "is hyperbolic with positive translation length")
        return Classification(HYPERBOLIC, route, evidence,
                              notes=notes, params=params)
    if shape.kind == "segment":
        if shape.slope_label["label"] == "rational":
            hit = _segment_rational_point(
                shape, 2.0 * params.thresholds.eps_width, params.max_q)
            if hit is not None:
                fx, fy, d = hit
                evidence["rational_point"] = [str(fx), str(fy)]
                evidence["rational_point_distance"] = d
                notes.append(
                    "segment of rational slope passing near a low "
                    "denominator rational point; consistent with an "
                    "elliptic action")
                cert = _try_annulus_certificates(F, params)
                if cert is not None:
                    notes.append(
                        "trapped horizontal annulus found; upgrading "
                        "to a certified elliptic verdict")
                    return Classification(ELLIPTIC_CERTIFIED, route,
                                          evidence, certificate=cert,
                                          notes=notes, params=params)
                return Classification(ELLIPTIC_CONSISTENT, route,
                                      evidence, notes=notes,
                                      params=params)
            notes.append(
                "segment of rational slope with no nearby low "
                "denominator rational point; no verdict")
            return Classification(UNDETERMINED, route, evidence,
                                  notes=notes, params=params)
        notes.append(
            "segment of irrational slope; consistent with a parabolic "
            "action")
        return Classification(PARABOLIC_CONSISTENT, route, evidence,
                              notes=notes, params=params)
    # point or undetermined shape: a single point rotation set is
    # compatible with every isometry type, so only an exact trapped
    # annulus can settle anything here.
    cert = _try_annulus_certificates(F, params)
    if cert is not None:
        notes.append(
            "trapped horizontal annulus found; the orbit of its core "
            "curve stays at bounded distance")
        return Classification(ELLIPTIC_CERTIFIED, route, evidence,
                              certificate=cert, notes=notes,
                              params=params)
    notes.append(
        "rotation set estimate is a point or unresolved and no "
        "trapped annulus was found; run cross checks for crossing "
        "number trends")
    return Classification(UNDETERMINED, route, evidence, notes=notes,
                          params=params)


def classify(F: LiftedMap, params: ClassifyParams = None) -> Classification:
    """Classify the action of the lifted map on the fine curve graph.

    Returns a Classification whose verdict is Hyperbolic,
    ParabolicConsistent, EllipticConsistent, EllipticCertified or
    Undetermined.  Hyperbolic verdicts from the Anosov and interior
    routes are backed by theory given the measured input; verdicts
    suffixed Consistent rest on sampled estimates.
    """
    if params is None:
        params = ClassifyParams()
    notes = []
    cls = isotopy_class(F)

    if cls.kind == "anosov":
        tr = cls.matrix[0][0] + cls.matrix[1][1]
        evidence = {"matrix": [list(r) for r in cls.matrix], "trace": tr}
        notes.append(
            "isotopic to a linear map with |trace| > 2; the action is "
            "hyperbolic")
        return Classification(HYPERBOLIC, "AnosovTrace", evidence,
                              notes=notes, params=params)

    if cls.kind == "twist_power":
        interval = twist_rotation_interval(F, params.n, params.samples)
        evidence = {
            "curve_class": list(cls.curve_class),
            "power": cls.power,
            "interval": [interval.low, interval.high],
            "n": params.n,
            "samples": params.samples,
        }
        length = interval.length
        evidence["interval_length"] = length
        if length > params.eps_len:
            notes.append(
                "twist rotation interval has positive length; the "
                "action is hyperbolic")
            return Classification(HYPERBOLIC, "TwistInterval",
                                  evidence, notes=notes, params=params)
        mid = 0.5 * (interval.low + interval.high)
        frac = _nearest_rational_value(mid, params.max_q)
        if abs(float(frac) - mid) <= params.eps_len:
            evidence["rational_value"] = str(frac)
            notes.append(
                "twist rotation interval is short and sits near a low "
                "denominator rational; consistent with an elliptic "
                "action")
            return Classification(ELLIPTIC_CONSISTENT, "TwistInterval",
                                  evidence, notes=notes, params=params)
        notes.append(
            "twist rotation interval is short but not resolved against "
            "rational values; no verdict")
        return Classification(UNDETERMINED, "TwistInterval", evidence,
                              notes=notes, params=params)

    if cls.kind == "finite_order":
        notes.append(
            f"linear part has finite order {cls.order}; classifying "
            "the corresponding power, which is isotopic to the "
            "identity")
        return _classify_identity(power(F, cls.order), params,
                                  "IdentityIsotopicRotSet", notes)

    return _classify_identity(F, params, "IdentityIsotopicRotSet", notes)


@dataclass
class CrossCheckEntry:
    """Measured data for a single iterate in a cross check."""

    n: int
    intersections: int = None
    crossing: int = None
    farey: int = None
    error: str = None

    def to_json_dict(self):
        out = {"n": self.n}
        for key in ("intersections", "crossing", "farey", "error"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


@dataclass
class CrossCheckReport:
    """Crossing number and Farey distance trends for iterated images
    of a probe curve, together with consistency flags against a
    verdict.  Violations are recorded, never raised."""

    curve_class: tuple
    entries: list
    verdict: str = None
    violations: list = field(default_factory=list)
    fit_exponent: float = None

    def to_json_dict(self):
        out = {
            "curve_class": list(self.curve_class),
            "entries": [e.to_json_dict() for e in self.entries],
            "verdict": self.verdict,
            "violations": list(self.violations),
        }
        if self.fit_exponent is not None:
            out["fit_exponent"] = self.fit_exponent
        return out


def cross_check(F: LiftedMap, a, ns, res: int = 64,
                verdict: str = None,
                crossing_cap: int = None) -> CrossCheckReport:
    """Measure crossing numbers, intersection counts and Farey
    distances of the iterated images of the probe curve a against a.

    ns is an iterable of iterate counts.  Per iterate failures (non
    simple samplings, divergence) are recorded in the entry rather
    than raised.  When a verdict is supplied the report lists the
    measurements that sit poorly with it; an elliptic verdict with
    crossing numbers above crossing_cap (default 2 max(ns) + 2) is
    flagged, a hyperbolic verdict with zero Farey growth is flagged.
    """
    from .curves import (
        crossing_number,
        image_curve,
        intersection_count,
        same_straight_curve,
    )

    ns = sorted(set(int(n) for n in ns))
    if not ns or ns[0] < 1:
        raise InputError("iterate counts must be positive")
    if crossing_cap is None:
        crossing_cap = 2 * ns[-1] + 2
    entries = []
    for n in ns:
        entry = CrossCheckEntry(n)
        try:
            b = image_curve(F, a, res=res, reference=a, n=n)
            entry.farey = (farey_distance(a.w, b.w)
                           if b.w != a.w else 0)
            if same_straight_curve(a, b):
                entry.crossing = 1
                entry.intersections = 0
            else:
                entry.intersections = intersection_count(a, b)
                if b.w == a.w:
                    try:
                        entry.crossing = crossing_number(a, b)
                    except NonGenericError as exc:
                        entry.error = str(exc)
        except (ResolutionError, DivergenceError, NonGenericError,
                InapplicableError) as exc:
            entry.error = str(exc)
        entries.append(entry)

    report = CrossCheckReport(tuple(a.w), entries, verdict=verdict)
    # Log-log least squares slope of the crossing counts: an exponent
    # below one records a sublinear (parabolic style) growth trend.
    pts = [(math.log(e.n), math.log(e.crossing)) for e in entries
           if e.crossing is not None and e.crossing > 0 and e.n > 1]
    if len(pts) >= 2:
        mx = sum(p[0] for p in pts) / len(pts)
        my = sum(p[1] for p in pts) / len(pts)
        den = sum((p[0] - mx) ** 2 for p in pts)
        if den > 0:
            report.fit_exponent = (
                sum((p[0] - mx) * (p[1] - my) for p in pts) / den)
    if verdict in (ELLIPTIC_CONSISTENT, ELLIPTIC_CERTIFIED):
        for e in entries:
            if e.crossing is not None and e.crossing > crossing_cap:
                report.violations.append(
                    f"crossing number {e.crossing} at n={e.n} exceeds "
                    f"the elliptic cap {crossing_cap}")
    if verdict == HYPERBOLIC:
        grew = any(e.farey and e.farey > 0 for e in entries)
        if not grew and len(entries) > 1:
            report.violations.append(
                "no Farey distance growth observed for a hyperbolic "
                "verdict")
    return report
