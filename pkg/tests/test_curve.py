import json

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ovalspec import (
    CurveSpec,
    Harmonic,
    NoConvergence,
    RejectBadIndex,
    RejectDuplicateIndex,
    RejectNonConvex,
    build_curve,
    curvature,
    curve_from_json,
    curve_to_json,
    embed,
    eval_phi,
    eval_phi_inverse,
    split_fg,
    wrap_angle,
)
from ovalspec.search import random_curve

TWO_PI = 2.0 * np.pi


# -- build_curve -------------------------------------------------------------


def test_empty_list_is_circle():
    spec = build_curve([])
    assert spec.harmonics == ()
    assert spec.max_n == 0
    assert spec.min_slope == 1.0
    t = np.linspace(0, TWO_PI, 64)
    assert np.allclose(spec.slope(t), 1.0)


def test_single_harmonic_min_slope_analytic():
    # (phi^-1)' = 1 + 0.3 cos 3t, minimized where cos 3t = -1
    spec = build_curve([(3, 0.1, 0.0)])
    assert spec.min_slope == pytest.approx(0.7, abs=1e-12)


def test_reject_nonconvex_analytic():
    # 1 - 1.2 cos-extreme < 0
    with pytest.raises(RejectNonConvex) as exc:
        build_curve([(2, 0.6, 0.0)])
    assert exc.value.min_slope == pytest.approx(-0.2, abs=1e-9)


def test_reject_bad_and_duplicate_indices():
    with pytest.raises(RejectBadIndex):
        build_curve([(1, 0.01, 0.0)])
    with pytest.raises(RejectBadIndex):
        build_curve([(0, 0.01, 0.0)])
    with pytest.raises(RejectDuplicateIndex):
        build_curve([(3, 0.01, 0.0), (3, 0.0, 0.01)])


def test_indices_sorted_ascending():
    spec = build_curve([(5, 0.01, 0.0), (2, 0.0, 0.02)])
    assert [h.n for h in spec.harmonics] == [2, 5]


def test_dict_input_accepted():
    spec = build_curve([{"n": 3, "a": 0.1}])
    assert spec.harmonics == (Harmonic(3, 0.1, 0.0),)


# -- split -------------------------------------------------------------------


def test_split_circle():
    split = split_fg(build_curve([]))
    assert split.f_is_zero
    assert split.g_harmonics == () and split.f_harmonics == ()


def test_split_parity_of_indices():
    spec = build_curve([(2, 0.0, 0.2), (5, 0.05, 0.0)])
    split = split_fg(spec)
    assert [h.n for h in split.g_harmonics] == [2]
    assert [h.n for h in split.f_harmonics] == [5]
    t = np.linspace(0, TWO_PI, 50)
    assert np.allclose(split.g(t), 0.2 * np.cos(2 * t))
    assert np.allclose(split.f(t), 0.05 * np.sin(5 * t))


def test_split_pure_odd():
    split = split_fg(build_curve([(3, 0.1, 0.0)]))
    t = np.linspace(0, TWO_PI, 64)
    assert np.allclose(split.f(t), 0.1 * np.sin(3 * t))
    assert np.allclose(split.g(t), 0.0)


def test_split_reassemble_lossless():
    spec = build_curve([(2, 0.03, -0.04), (3, 0.05, 0.02), (6, -0.01, 0.0), (7, 0.004, 0.006)])
    assert split_fg(spec).reassemble().harmonics == spec.harmonics


# -- phi^-1 and phi ----------------------------------------------------------


def test_phi_inverse_values():
    circle = build_curve([])
    assert eval_phi_inverse(circle, 1.3) == pytest.approx(1.3, abs=1e-15)
    spec = build_curve([(3, 0.1, 0.0)])
    assert eval_phi_inverse(spec, np.pi / 2) == pytest.approx(np.pi / 2 - 0.1, abs=1e-14)


def test_phi_inverse_commutes_with_winding():
    spec = build_curve([(3, 0.07, 0.02), (4, 0.0, 0.03)])
    t = np.linspace(-5, 15, 41)
    assert np.allclose(
        eval_phi_inverse(spec, t + TWO_PI), eval_phi_inverse(spec, t) + TWO_PI, atol=1e-12
    )


def test_phi_examples():
    circle = build_curve([])
    assert eval_phi(circle, 2.0) == pytest.approx(2.0, abs=1e-12)
    spec = build_curve([(3, 0.1, 0.0)])
    assert eval_phi(spec, eval_phi_inverse(spec, 0.7)) == pytest.approx(0.7, abs=1e-11)
    # inverse of the direct evaluation above
    assert eval_phi(spec, np.pi / 2 - 0.1) == pytest.approx(np.pi / 2, abs=1e-11)


def test_round_trip_random():
    rng = np.random.default_rng(11)
    for k in range(10):
        spec = random_curve(600 + k, max_n=8, convexity_floor=0.1)
        t = rng.uniform(0.0, TWO_PI, 100)
        s = eval_phi_inverse(spec, t)
        assert np.max(np.abs(eval_phi(spec, s) - t)) < 1e-10


def test_monotone_on_lift():
    spec = random_curve(77, max_n=9, convexity_floor=0.05)
    t = np.linspace(-TWO_PI, 2 * TWO_PI, 4001)
    s = eval_phi_inverse(spec, t)
    assert np.all(np.diff(s) > 0)


# -- curvature ---------------------------------------------------------------


def test_curvature_circle():
    circle = build_curve([])
    for s in (0.0, 1.0, 4.5):
        assert curvature(circle, s) == pytest.approx(1.0, abs=1e-12)


def test_curvature_value_at_zero():
    spec = build_curve([(3, 0.1, 0.0)])
    # phi^-1(0) = 0, so s = 0 maps to t = 0 and kappa = 1/(1 + 0.3)
    assert curvature(spec, 0.0) == pytest.approx(1.0 / 1.3, abs=1e-12)


def test_curvature_square_integral_closed_form():
    # int kappa^2 ds = int dt/(1 + eps cos 3t) = 2*pi/sqrt(1 - eps^2)
    spec = build_curve([(3, 0.1, 0.0)])
    n = 2048
    s = np.arange(n) * (TWO_PI / n)
    kap = curvature(spec, s)
    quad = float(np.sum(kap**2) * TWO_PI / n)
    assert quad == pytest.approx(TWO_PI / np.sqrt(1.0 - 0.09), rel=1e-10)


def test_total_turning():
    # trapezoid of kappa over s equals 2*pi to 1e-8 at N=1024 for max_n <= 12
    for seed in range(8):
        spec = random_curve(8100 + seed, max_n=12, convexity_floor=0.3)
        geom = embed(spec, 1024)
        total = float(np.sum(geom.kappa) * TWO_PI / 1024)
        assert total == pytest.approx(TWO_PI, abs=1e-8)


# -- embedding ---------------------------------------------------------------


def test_embed_circle():
    geom = embed(build_curve([]), 256)
    assert geom.closure_residual < 1e-10
    # x(s) = sin s, y(s) = 1 - cos s: a unit circle through the origin
    # (cumulative trapezoid is second order in the point positions)
    r = np.hypot(geom.xy[:, 0], geom.xy[:, 1] - 1.0)
    assert np.max(np.abs(r - 1.0)) < 2e-4
    assert np.max(np.abs(r - 1.0)) > 0.0  # sanity: not exact


def test_embed_closure_shrinks_with_n():
    spec = build_curve([(3, 0.1, 0.0)])
    res = [embed(spec, n).closure_residual for n in (64, 128, 256)]
    assert res[0] < 1e-6
    # spectral closure: each doubling gains at least the quadrature order
    # until the floating-point floor
    for a, b in zip(res, res[1:]):
        assert b <= max(a / 4.0, 1e-13)


def test_embed_point_symmetry_of_g_only():
    geom = embed(build_curve([(2, 0.0, 0.2)]), 1024)
    center = geom.xy.mean(axis=0)
    shifted = np.roll(geom.xy, -512, axis=0)
    sym_err = np.max(np.abs((shifted - center) + (geom.xy - center)))
    assert sym_err < 1e-9


def test_embed_requires_min_points():
    with pytest.raises(ValueError):
        embed(build_curve([]), 4)


# -- parity / shift identities (property-based) ------------------------------

harmonic_lists = st.lists(
    st.tuples(
        st.integers(min_value=2, max_value=10),
        st.floats(min_value=-0.05, max_value=0.05, allow_nan=False),
        st.floats(min_value=-0.05, max_value=0.05, allow_nan=False),
    ),
    min_size=0,
    max_size=5,
    unique_by=lambda h: h[0],
).filter(lambda hs: sum(n * (abs(a) + abs(b)) for n, a, b in hs) < 0.9)


@settings(max_examples=60, deadline=None)
@given(harmonic_lists, st.floats(min_value=0.0, max_value=2 * np.pi))
def test_parity_identities(harmonics, t):
    split = split_fg(build_curve(harmonics))
    assert abs(split.f(t + np.pi) + split.f(t)) < 1e-12
    assert abs(split.g(t + np.pi) - split.g(t)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(harmonic_lists, st.floats(min_value=0.0, max_value=2 * np.pi))
def test_half_turn_shift_identity(harmonics, t):
    spec = build_curve(harmonics)
    split = split_fg(spec)
    lhs = eval_phi_inverse(spec, t + np.pi) - eval_phi_inverse(spec, t)
    assert abs(lhs - np.pi + 2.0 * split.f(t)) < 1e-12


def test_convexity_certificate_audit():
    # accepted specs keep (phi^-1)' > 0 at a million random audit points
    rng = np.random.default_rng(2024)
    for seed in (1, 2, 3):
        spec = random_curve(seed, max_n=9, convexity_floor=0.05)
        t = rng.uniform(0.0, TWO_PI, 1_000_000)
        assert np.min(spec.slope(t)) > 0.0


# -- JSON format -------------------------------------------------------------


def test_curve_json_example_literal():
    spec = curve_from_json('{"harmonics":[{"n":3,"a":0.1,"b":0.0}]}')
    assert spec.harmonics == (Harmonic(3, 0.1, 0.0),)


def test_curve_json_writer_layout():
    spec = build_curve([(5, 0.01, 0.0), (2, 0.0, 0.02)])
    doc = json.loads(curve_to_json(spec))
    assert [e["n"] for e in doc["harmonics"]] == [2, 5]


@settings(max_examples=60, deadline=None)
@given(harmonic_lists)
def test_curve_json_round_trip_bit_exact(harmonics):
    spec = build_curve(harmonics)
    again = curve_from_json(curve_to_json(spec))
    assert again.harmonics == spec.harmonics  # exact float equality


def test_curve_json_rejects_garbage():
    with pytest.raises(ValueError):
        curve_from_json("not json")
    with pytest.raises(ValueError):
        curve_from_json('{"something": 3}')
    with pytest.raises(ValueError):
        curve_from_json('{"harmonics": 3}')


# -- misc --------------------------------------------------------------------


def test_wrap_angle():
    assert wrap_angle(TWO_PI + 0.5) == pytest.approx(0.5)
    assert wrap_angle(-0.5) == pytest.approx(TWO_PI - 0.5)


def test_immutability():
    spec = build_curve([(3, 0.1, 0.0)])
    with pytest.raises(Exception):
        spec.max_n = 5
    geom = embed(spec, 64)
    with pytest.raises(ValueError):
        geom.kappa[0] = 2.0
