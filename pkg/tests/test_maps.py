import math

import numpy as np
import pytest

from torusdyn.errors import DivergenceError, InputError, UnsupportedMapError
from torusdyn.maps import (
    Linear,
    LiftedMap,
    ShearX,
    Translation,
    VerticalFlow,
    compose,
    conjugate,
    cyclic_lift,
    deck_adjust,
    evaluate,
    evaluate_points,
    isotopy_class,
    iterate,
    iterate_points,
    linear_part,
    map_from_json,
    power,
)
from torusdyn.profiles import Sin2


def shear_map(strength=1.0):
    return LiftedMap((ShearX(Sin2(), strength),))


def test_translation_evaluate():
    F = LiftedMap((Translation((0.3, 0.7)),))
    assert evaluate(F, (0.0, 0.0)) == pytest.approx((0.3, 0.7))
    assert iterate(F, 10, (0.0, 0.0)) == pytest.approx((3.0, 7.0))


def test_deck_equivariance_exact():
    """F(x + m) = F(x) + m holds exactly for integer m."""
    F = shear_map(0.8)
    pts = np.array([[0.13, 0.41], [0.99, 0.27], [-0.5, 1.75]])
    shifted = pts + np.array([3.0, -2.0])
    out = evaluate_points(F, pts.copy())
    out_shift = evaluate_points(F, shifted.copy())
    assert np.array_equal(out + np.array([3.0, -2.0]), out_shift)


def test_compose_matches_sequential():
    F = shear_map(0.5)
    G = LiftedMap((Translation((0.2, 0.4)),), deck_offset=(1, 0))
    H = compose(F, G)
    p = (0.3, 0.6)
    via_h = evaluate(H, p)
    via_seq = evaluate(F, evaluate(G, p))
    assert via_h == pytest.approx(via_seq, abs=1e-15)


def test_power_matches_iteration():
    F = shear_map(0.5)
    p = (0.11, 0.77)
    assert evaluate(power(F, 3), p) == pytest.approx(iterate(F, 3, p), abs=1e-12)


def test_deck_adjust_offsets():
    F = shear_map(1.0)
    G = deck_adjust(F, (2, -1))
    p = (0.3, 0.2)
    fx, fy = evaluate(F, p)
    gx, gy = evaluate(G, p)
    assert (gx - fx, gy - fy) == (2.0, -1.0)


def test_conjugate_matches_composition():
    F = shear_map(0.6)
    A = ((1, 1), (0, 1))
    C = conjugate(F, A)
    p = (0.25, 0.4)
    # A o F o A^{-1}
    ax, ay = p[0] - p[1], p[1]
    fx, fy = evaluate(F, (ax, ay))
    expect = (fx + fy, fy)
    assert evaluate(C, p) == pytest.approx(expect, abs=1e-12)


def test_linear_part_of_chain():
    F = LiftedMap((Linear(((1, 1), (0, 1))), ShearX(Sin2(), 1.0)))
    assert linear_part(F) == ((1, 1), (0, 1))


@pytest.mark.parametrize(
    "matrix,kind",
    [
        (((1, 0), (0, 1)), "identity"),
        (((2, 1), (1, 1)), "anosov"),
        (((1, 3), (0, 1)), "twist_power"),
        (((0, -1), (1, 0)), "finite_order"),
        (((-1, 0), (0, -1)), "finite_order"),
    ],
)
def test_isotopy_kinds(matrix, kind):
    F = LiftedMap((Linear(matrix),))
    assert isotopy_class(F).kind == kind


def test_twist_power_data():
    cls = isotopy_class(LiftedMap((Linear(((1, 3), (0, 1))),)))
    assert cls.curve_class == (1, 0)
    assert cls.power == 3


def test_orientation_reversing_rejected():
    with pytest.raises(UnsupportedMapError):
        isotopy_class(LiftedMap((Linear(((1, 0), (0, -1))),)))


def test_trace_minus_two_rejected():
    with pytest.raises(UnsupportedMapError):
        isotopy_class(LiftedMap((Linear(((-1, 1), (0, -1))),)))


def test_divergence_guard():
    F = LiftedMap((Linear(((2, 1), (1, 1))),))
    with pytest.raises(DivergenceError):
        iterate_points(F, np.array([[0.3, 0.4]]), 500)


def test_map_json_round_trip():
    F = LiftedMap(
        (Linear(((1, 1), (0, 1))), ShearX(Sin2(), 0.7), Translation((0.1, 0.2))),
        deck_offset=(1, -2),
    )
    clone = map_from_json(F.to_json())
    p = (0.37, 0.58)
    assert evaluate(clone, p) == pytest.approx(evaluate(F, p), abs=0.0)
    assert clone.deck_offset == F.deck_offset


# ---------------------------------------------------------------------------
# cyclic covers


def test_cyclic_lift_translation_drift():
    lift = cyclic_lift(LiftedMap((Translation((0.3, 0.7)),)))
    P = np.array([[0.0, 0.0], [0.25, 0.5]])
    n = 40
    out = lift.iterate_points(P.copy(), n)
    assert np.allclose(out[:, 1] - P[:, 1], 0.7 * n, atol=1e-9)


def test_cyclic_lift_model_twist_preserves_fibers():
    lift = cyclic_lift(LiftedMap((Linear(((1, 1), (0, 1))),)))
    P = np.array([[0.1, 0.3], [0.7, 0.9]])
    out = lift.iterate_points(P.copy(), 25)
    assert np.allclose(out[:, 1], P[:, 1], atol=1e-12)


def test_cyclic_lift_rejects_anosov():
    with pytest.raises(UnsupportedMapError):
        cyclic_lift(LiftedMap((Linear(((2, 1), (1, 1))),)))


def test_cyclic_lift_vertical_twist_class():
    """Twist about the (0, 1) curve: the conjugated cover measures the
    horizontal drift."""
    F = LiftedMap((Linear(((1, 0), (2, 1))), VerticalFlow(Sin2(), 0.0)))
    cls = isotopy_class(F)
    assert cls.curve_class in ((0, 1), (0, -1))
    lift = cyclic_lift(F)
    P = np.array([[0.2, 0.6]])
    out = lift.iterate_points(P.copy(), 10)
    assert np.all(np.isfinite(out))


def test_backends_agree_for_encodable_chain():
    from torusdyn import kernels

    F = LiftedMap((ShearX(Sin2(), 0.9), Translation((0.05, 0.1))))
    P = np.random.RandomState(0).rand(50, 2)
    table = kernels.encode_chain(F)
    if table is None or kernels.backend_name() != "compiled":
        pytest.skip("compiled backend unavailable")
    fast = iterate_points(F, P.copy(), 50)
    import os

    # force the pure python path through the environment knob
    os.environ["TORUSDYN_BACKEND"] = "python"
    try:
        slow = iterate_points(F, P.copy(), 50)
    finally:
        del os.environ["TORUSDYN_BACKEND"]
    assert np.allclose(fast, slow, atol=1e-9)
