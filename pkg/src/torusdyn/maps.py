"""Lifted torus maps.

A map is a chain of primitives applied in list order, followed by an
integer deck translation.  Every primitive commutes with the deck group
Z^2, and periodic primitives reduce coordinates mod 1 before evaluating
their profile, so deck equivariance of the assembled lift is exact in
floating point, not just approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    DivergenceError,
    InputError,
    UnsupportedMapError,
)
from .profiles import Profile, profile_from_json

DIVERGENCE_GUARD = 1e15

IDENTITY_2X2 = ((1, 0), (0, 1))


def _as_points(x) -> np.ndarray:
    P = np.array(x, dtype=float, copy=True)
    if P.ndim == 1:
        P = P.reshape(1, 2)
    if P.ndim != 2 or P.shape[1] != 2:
        raise InputError("points must have shape (n, 2)")
    if not np.all(np.isfinite(P)):
        raise InputError("points must be finite")
    return P


class Primitive:
    """Base primitive: acts on an (n, 2) array of lifted points."""

    type_name = "abstract"

    def apply(self, P: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def linear(self) -> tuple:
        return IDENTITY_2X2

    def encode(self):
        """Row for the compiled kernel, or None if not encodable."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Translation(Primitive):
    v: tuple

    type_name = "translation"

    def __post_init__(self):
        if len(self.v) != 2:
            raise InputError("translation vector must have two entries")
        object.__setattr__(self, "v", (float(self.v[0]), float(self.v[1])))

    def apply(self, P):
        P[:, 0] += self.v[0]
        P[:, 1] += self.v[1]
        return P

    def encode(self):
        return [0.0, self.v[0], self.v[1], 0, 0, 0, 0, 0, 0, 0]

    def to_json(self):
        return {"type": "translation", "v": list(self.v)}


@dataclass(frozen=True)
class Linear(Primitive):
    matrix: tuple

    type_name = "linear"

    def __post_init__(self):
        m = self.matrix
        try:
            a, b = m[0]
            c, d = m[1]
        except (TypeError, ValueError, IndexError):
            raise InputError("linear matrix must be 2x2")
        vals = (a, b, c, d)
        if any(int(x) != x for x in vals):
            raise InputError("linear matrix entries must be integers")
        a, b, c, d = (int(x) for x in vals)
        if a * d - b * c not in (1, -1):
            raise InputError("linear matrix must have determinant +-1")
        object.__setattr__(self, "matrix", ((a, b), (c, d)))

    def apply(self, P):
        (a, b), (c, d) = self.matrix
        x = a * P[:, 0] + b * P[:, 1]
        y = c * P[:, 0] + d * P[:, 1]
        P[:, 0] = x
        P[:, 1] = y
        return P

    def linear(self):
        return self.matrix

    def encode(self):
        (a, b), (c, d) = self.matrix
        return [1.0, a, b, c, d, 0, 0, 0, 0, 0]

    def to_json(self):
        return {"type": "linear", "matrix": [list(r) for r in self.matrix]}


PROFILE_CODES = {
    "sin2": 0,
    "triangle": 1,
    "bump": 2,
    "plateau": 3,
    "coordinate": 4,
    "ramp": 5,
}


def _profile_row(profile: Profile):
    code = PROFILE_CODES.get(profile.kind)
    if code is None:
        return None
    p = profile.params()
    if profile.kind == "bump":
        q = [p["a"], p["b"], 0, 0]
    elif profile.kind == "plateau":
        q = [p["l0"], p["l1"], p["r1"], p["r0"]]
    elif profile.kind == "ramp":
        q = [p["lo"], p["hi"], 0, 0]
    else:
        q = [0, 0, 0, 0]
    return [float(code)] + [float(v) for v in q]


@dataclass(frozen=True)
class ShearX(Primitive):
    """x += strength * p(y).  Degree one profiles need integer strength
    so the linear part [[1, s], [0, 1]] has integer entries."""

    profile: Profile
    strength: float = 1.0

    type_name = "shear_x"

    def __post_init__(self):
        if self.profile.degree == 1 and int(self.strength) != self.strength:
            raise InputError("degree one shear profile needs integer strength")
        object.__setattr__(self, "strength", float(self.strength))

    def apply(self, P):
        fl = np.floor(P[:, 1])
        disp = self.profile.values(P[:, 1] - fl)
        if self.profile.degree == 1:
            disp = disp + fl
        P[:, 0] += self.strength * disp
        return P

    def linear(self):
        if self.profile.degree == 1:
            return ((1, int(self.strength)), (0, 1))
        return IDENTITY_2X2

    def encode(self):
        row = _profile_row(self.profile)
        if row is None:
            return None
        return [2.0, self.strength] + row + [float(self.profile.degree), 0, 0]

    def to_json(self):
        return {
            "type": "shear_x",
            "profile": self.profile.to_json(),
            "strength": self.strength,
        }


@dataclass(frozen=True)
class ShearY(Primitive):
    """y += strength * p(x)."""

    profile: Profile
    strength: float = 1.0

    type_name = "shear_y"

    def __post_init__(self):
        if self.profile.degree == 1 and int(self.strength) != self.strength:
            raise InputError("degree one shear profile needs integer strength")
        object.__setattr__(self, "strength", float(self.strength))

    def apply(self, P):
        fl = np.floor(P[:, 0])
        disp = self.profile.values(P[:, 0] - fl)
        if self.profile.degree == 1:
            disp = disp + fl
        P[:, 1] += self.strength * disp
        return P

    def linear(self):
        if self.profile.degree == 1:
            return ((1, 0), (int(self.strength), 1))
        return IDENTITY_2X2

    def encode(self):
        row = _profile_row(self.profile)
        if row is None:
            return None
        return [3.0, self.strength] + row + [float(self.profile.degree), 0, 0]

    def to_json(self):
        return {
            "type": "shear_y",
            "profile": self.profile.to_json(),
            "strength": self.strength,
        }


@dataclass(frozen=True)
class VerticalFlow(Primitive):
    """y += time * field(x) for a periodic speed field."""

    field: Profile
    time: float = 1.0

    type_name = "vertical_flow"

    def __post_init__(self):
        if self.field.degree != 0:
            raise InputError("vertical flow field must be a degree 0 profile")
        object.__setattr__(self, "time", float(self.time))

    def apply(self, P):
        fl = np.floor(P[:, 0])
        P[:, 1] += self.time * self.field.values(P[:, 0] - fl)
        return P

    def encode(self):
        row = _profile_row(self.field)
        if row is None:
            return None
        return [4.0, self.time] + row + [0, 0, 0]

    def to_json(self):
        return {
            "type": "vertical_flow",
            "field": self.field.to_json(),
            "time": self.time,
        }


class CustomPrimitive(Primitive):
    """User or gallery supplied primitive.  Must commute with integer
    translations and be isotopic to the identity (linear part I).

    Subclasses may provide ``iterate_points(P, n)`` with a faster
    n-step evaluation; the chain engine uses it when the primitive is
    the entire chain.
    """

    type_name = "custom"
    name = "abstract"

    iterate_points = None

    def eval_points(self, P: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, P: np.ndarray) -> np.ndarray:
        return self.eval_points(P)

    def params(self) -> dict:
        return {}

    def to_json(self):
        return {"type": "custom", "name": self.name, "params": self.params()}


_CUSTOM_REGISTRY: dict = {}


def register_custom(name: str, factory) -> None:
    _CUSTOM_REGISTRY[name] = factory


def custom_from_json(name: str, params: dict) -> CustomPrimitive:
    factory = _CUSTOM_REGISTRY.get(name)
    if factory is None:
        raise InputError(f"unknown custom primitive: {name!r}")
    return factory(**params)


@dataclass(frozen=True)
class LiftedMap:
    """A lift to R^2 of a torus homeomorphism: primitive chain applied
    in order, then translation by the integer deck offset."""

    primitives: tuple
    deck_offset: tuple = (0, 0)

    def __post_init__(self):
        prims = tuple(self.primitives)
        if not all(isinstance(p, Primitive) for p in prims):
            raise InputError("primitives must be Primitive instances")
        off = self.deck_offset
        if len(off) != 2 or any(int(v) != v for v in off):
            raise InputError("deck offset must be an integer vector")
        object.__setattr__(self, "primitives", prims)
        object.__setattr__(self, "deck_offset", (int(off[0]), int(off[1])))

    def to_json(self) -> dict:
        return {
            "primitives": [p.to_json() for p in self.primitives],
            "deck_offset": list(self.deck_offset),
        }


def map_from_json(spec: dict) -> LiftedMap:
    prims = []
    for pspec in spec.get("primitives", []):
        t = pspec.get("type")
        if t == "translation":
            prims.append(Translation(tuple(pspec["v"])))
        elif t == "linear":
            prims.append(Linear(tuple(tuple(r) for r in pspec["matrix"])))
        elif t == "shear_x":
            prims.append(
                ShearX(profile_from_json(pspec["profile"]), pspec.get("strength", 1.0))
            )
        elif t == "shear_y":
            prims.append(
                ShearY(profile_from_json(pspec["profile"]), pspec.get("strength", 1.0))
            )
        elif t == "vertical_flow":
            prims.append(
                VerticalFlow(profile_from_json(pspec["field"]), pspec.get("time", 1.0))
            )
        elif t == "custom":
            prims.append(custom_from_json(pspec["name"], pspec.get("params", {})))
        else:
            raise InputError(f"unknown primitive type: {t!r}")
    return LiftedMap(tuple(prims), tuple(spec.get("deck_offset", (0, 0))))


def _apply_chain(F: LiftedMap, P: np.ndarray) -> np.ndarray:
    for prim in F.primitives:
        P = prim.apply(P)
    P[:, 0] += F.deck_offset[0]
    P[:, 1] += F.deck_offset[1]
    return P


def evaluate_points(F: LiftedMap, points) -> np.ndarray:
    """Apply the lift to an (n, 2) array of lifted points."""
    return _apply_chain(F, _as_points(points))


def evaluate(F: LiftedMap, x) -> tuple:
    Q = evaluate_points(F, [x])
    return (float(Q[0, 0]), float(Q[0, 1]))


def _check_divergence(P: np.ndarray) -> None:
    m = float(np.max(np.abs(P))) if P.size else 0.0
    if not math.isfinite(m) or m > DIVERGENCE_GUARD:
        raise DivergenceError(
            f"orbit exceeded the overflow guard {DIVERGENCE_GUARD:g}"
        )


def iterate_points(F: LiftedMap, points, n: int) -> np.ndarray:
    """n-fold iteration of the lift on an (n_pts, 2) array."""
    if n < 0 or int(n) != n:
        raise InputError("iteration count must be a non-negative integer")
    P = _as_points(points)
    if n == 0:
        return P

    # single custom primitive with its own fast n-step path
    if (
        len(F.primitives) == 1
        and isinstance(F.primitives[0], CustomPrimitive)
        and F.primitives[0].iterate_points is not None
        and F.deck_offset == (0, 0)
    ):
        Q = F.primitives[0].iterate_points(P, int(n))
        _check_divergence(Q)
        return Q

    table = kernels.encode_chain(F)
    if table is not None and kernels.backend_name() == "compiled":
        status = kernels.run_compiled(P, int(n), table)
        if status != 0:
            raise DivergenceError(
                f"orbit exceeded the overflow guard {DIVERGENCE_GUARD:g}"
            )
        return P

    for _ in range(int(n)):
        P = _apply_chain(F, P)
        _check_divergence(P)
    return P


def iterate(F: LiftedMap, n: int, x) -> tuple:
    Q = iterate_points(F, [x], n)
    return (float(Q[0, 0]), float(Q[0, 1]))


def compose(F: LiftedMap, G: LiftedMap) -> LiftedMap:
    """The lift F after G (apply G first)."""
    prims = list(G.primitives)
    if G.deck_offset != (0, 0):
        prims.append(Translation((float(G.deck_offset[0]), float(G.deck_offset[1]))))
    prims.extend(F.primitives)
    return LiftedMap(tuple(prims), F.deck_offset)


def power(F: LiftedMap, k: int) -> LiftedMap:
    if k < 1 or int(k) != k:
        raise InputError("power requires a positive integer")
    G = F
    for _ in range(int(k) - 1):
        G = compose(F, G)
    return G


def deck_adjust(F: LiftedMap, p) -> LiftedMap:
    """Replace the lift by the deck translate lift + p."""
    if len(p) != 2 or any(int(v) != v for v in p):
        raise InputError("deck adjustment must be an integer vector")
    off = (F.deck_offset[0] + int(p[0]), F.deck_offset[1] + int(p[1]))
    return LiftedMap(F.primitives, off)


def _mat_mul(A, B):
    return (
        (
            A[0][0] * B[0][0] + A[0][1] * B[1][0],
            A[0][0] * B[0][1] + A[0][1] * B[1][1],
        ),
        (
            A[1][0] * B[0][0] + A[1][1] * B[1][0],
            A[1][0] * B[0][1] + A[1][1] * B[1][1],
        ),
    )


def _mat_inv(A):
    (a, b), (c, d) = A
    det = a * d - b * c
    if det not in (1, -1):
        raise InputError("conjugating matrix must have determinant +-1")
    return ((d * det, -b * det), (-c * det, a * det))


def _mat_apply(A, v):
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def conjugate(F: LiftedMap, A) -> LiftedMap:
    """The lift A F A^{-1} for A in GL(2, Z)."""
    A = tuple(tuple(int(v) for v in row) for row in A)
    Ainv = _mat_inv(A)
    prims = (Linear(Ainv),) + F.primitives + (Linear(A),)
    off = _mat_apply(A, F.deck_offset)
    return LiftedMap(prims, off)


def linear_part(F: LiftedMap):
    """Product of the primitive linear parts: the induced matrix on
    first homology."""
    A = IDENTITY_2X2
    for prim in F.primitives:
        A = _mat_mul(prim.linear(), A)
    return A


@dataclass(frozen=True)
class IsotopyClass:
    """Isotopy data of the underlying torus homeomorphism.

    kind is one of 'identity', 'anosov', 'twist_power', 'finite_order'.
    For twist powers, curve_class is the primitive invariant homology
    class and power the number of twists.
    """

    kind: str
    matrix: tuple
    curve_class: tuple = None
    power: int = None
    order: int = None


def _primitive_kernel_vector(A):
    """Primitive integer vector spanning ker(A - I) for tr A = 2."""
    (a, b), (c, d) = A
    cands = [(b, 1 - a), (d - 1, -c)]
    for v in cands:
        if v != (0, 0):
            g = math.gcd(abs(v[0]), abs(v[1]))
            v = (v[0] // g, v[1] // g)
            if v[0] < 0 or (v[0] == 0 and v[1] < 0):
                v = (-v[0], -v[1])
            return v
    raise InputError("matrix is the identity")


def isotopy_class(F: LiftedMap) -> IsotopyClass:
    A = linear_part(F)
    (a, b), (c, d) = A
    det = a * d - b * c
    if det == -1:
        raise UnsupportedMapError(
            "orientation-reversing map; classify its square instead"
        )
    tr = a + d
    if A == IDENTITY_2X2:
        return IsotopyClass("identity", A)
    if abs(tr) > 2:
        return IsotopyClass("anosov", A)
    if tr == 2:
        v = _primitive_kernel_vector(A)
        # complete v to a basis (v, u) with det(v, u) = 1, then
        # (A - I) u = r v defines the twist power r
        g, x, y = _egcd(v[0], v[1])
        u = (-y, x)
        w = ((a - 1) * u[0] + b * u[1], c * u[0] + (d - 1) * u[1])
        if v[0] != 0:
            r = w[0] // v[0]
        else:
            r = w[1] // v[1]
        return IsotopyClass("twist_power", A, curve_class=v, power=r)
    if tr == -2 and A != ((-1, 0), (0, -1)):
        raise UnsupportedMapError(
            "reversed twist class; classify the square of the map instead"
        )
    # tr in {-2, -1, 0, 1} with A of finite order
    order = 1
    B = A
    while B != IDENTITY_2X2:
        B = _mat_mul(A, B)
        order += 1
        if order > 12:
            raise UnsupportedMapError("matrix is not of finite order")
    return IsotopyClass("finite_order", A, order=order)


def _egcd(a: int, b: int):
    """Return (g, x, y) with a x + b y = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class CyclicLift:
    """Lift of a twist-power map to the cyclic cover R/Z x R in which
    the invariant class becomes horizontal.

    base is the conjugated planar lift; its underlying map commutes
    with horizontal integer translation, so reducing the first
    coordinate mod 1 gives the action on the cover, and the second
    coordinate tracks the vertical displacement exactly.
    """

    base: LiftedMap
    conjugator: tuple
    curve_class: tuple
    power: int

    def eval_points(self, P: np.ndarray) -> np.ndarray:
        Q = evaluate_points(self.base, P)
        Q[:, 0] -= np.floor(Q[:, 0])
        return Q

    def iterate_points(self, points, n: int) -> np.ndarray:
        P = _as_points(points)
        P[:, 0] -= np.floor(P[:, 0])
        for _ in range(int(n)):
            P = self.eval_points(P)
            if float(np.max(np.abs(P[:, 1]))) > DIVERGENCE_GUARD:
                raise DivergenceError("cyclic cover orbit exceeded the guard")
        return P


def cyclic_lift(F: LiftedMap, curve_class=None) -> CyclicLift:
    """Cyclic cover lift.

    For twist-power maps the cover is the one associated to the twist
    curve class.  Identity-isotopic maps lift to the cover of any
    primitive class (default (1, 0)).  Anosov maps have no invariant
    class and are rejected.
    """
    cls = isotopy_class(F)
    if cls.kind == "twist_power":
        curve_class = cls.curve_class
        twist_power = cls.power
    elif cls.kind == "identity":
        curve_class = (1, 0) if curve_class is None else (
            int(curve_class[0]), int(curve_class[1]))
        if math.gcd(abs(curve_class[0]), abs(curve_class[1])) != 1:
            raise InputError("cover class must be primitive")
        twist_power = 0
    else:
        raise UnsupportedMapError(
            "cyclic lift needs a twist-power or identity-isotopic map")
    p, q = curve_class
    g, x, y = _egcd(p, q)
    # M (p, q) = (1, 0), det M = 1
    M = ((x, y), (-q, p))
    G = conjugate(F, M)
    return CyclicLift(G, M, curve_class, twist_power)
