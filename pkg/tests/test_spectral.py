import numpy as np
import pytest

from ovalspec import (
    Scheme,
    ZeroVector,
    assemble,
    build_curve,
    converge_lambda,
    ground_state,
    rayleigh_quotient,
    solve_ground_state,
    theorem1_constant,
    write_eigenfunction_csv,
)
from ovalspec.search import random_curve

TWO_PI = 2.0 * np.pi
CD2 = Scheme.CENTRAL_DIFFERENCE_2
COLLOC = Scheme.FOURIER_COLLOCATION


# -- assembly ----------------------------------------------------------------


def test_cd2_circle_matrix_entries():
    op = assemble(build_curve([]), 16, CD2)
    h = TWO_PI / 16
    mat = op.dense()
    assert np.allclose(np.diag(mat), 2.0 / h**2 + 1.0)
    assert mat[3, 4] == pytest.approx(-1.0 / h**2)
    assert mat[0, 15] == pytest.approx(-1.0 / h**2)
    assert mat[15, 0] == pytest.approx(-1.0 / h**2)
    assert np.allclose(mat, mat.T)


def test_collocation_circle_spectrum_exact():
    # plane waves diagonalize the circulant: eigenvalues k^2 + 1
    op = assemble(build_curve([]), 64, COLLOC)
    ev = np.sort(np.linalg.eigvalsh(op.dense()))
    for k in range(6):
        expect = k * k + 1.0
        hits = np.abs(ev - expect) < 1e-10
        assert hits.sum() == (1 if k == 0 else 2)


def test_collocation_second_derivative_closed_form():
    # circulant column agrees with the trigonometric closed form
    n = 32
    h = TWO_PI / n
    op = assemble(build_curve([]), n, COLLOC)
    lap = op.dense() - np.eye(n)  # subtract the unit potential
    assert lap[0, 0] == pytest.approx(np.pi**2 / (3 * h * h) + 1.0 / 6.0, rel=1e-12)
    j = np.arange(1, n)
    expect = -((-1.0) ** j) / (2.0 * np.sin(j * h / 2.0) ** 2) * (-1.0)
    assert np.allclose(lap[0, 1:], expect, atol=1e-9)


def test_potential_sample_range():
    # kappa^2 between 1/1.3^2 and 1/0.7^2 for the 0.1 sin 3t curve
    op = assemble(build_curve([(3, 0.1, 0.0)]), 64, CD2)
    assert op.potential.min() >= 1.0 / 1.3**2 - 1e-12
    assert op.potential.max() <= 1.0 / 0.7**2 + 1e-12
    assert op.potential.min() == pytest.approx(1.0 / 1.3**2, abs=1e-3)
    assert op.potential.max() == pytest.approx(1.0 / 0.7**2, abs=1e-3)


def test_assemble_rejects_small_grid():
    with pytest.raises(ValueError):
        assemble(build_curve([]), 8, CD2)


def test_matvec_matches_dense():
    spec = build_curve([(2, 0.0, 0.15), (3, 0.08, 0.0)])
    rng = np.random.default_rng(3)
    for scheme in (CD2, COLLOC):
        op = assemble(spec, 64, scheme)
        mat = op.dense()
        v = rng.normal(size=64)
        assert np.allclose(op.matvec(v), mat @ v, atol=1e-9)


# -- ground state ------------------------------------------------------------


def test_circle_ground_state():
    res = ground_state(assemble(build_curve([]), 256, CD2))
    assert res.lam == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(res.R, 1.0 / np.sqrt(TWO_PI), atol=1e-10)
    assert res.residual_norm < 1e-8
    assert res.R.min() > 0.0


def test_a3_bounds_by_two_schemes():
    # 1 <= lambda <= mean kappa^2 = 1/sqrt(0.91) (constant trial function)
    spec = build_curve([(3, 0.1, 0.0)])
    upper = 1.0 / np.sqrt(0.91)
    for scheme in (CD2, COLLOC):
        lam = converge_lambda(spec, 1e-8, scheme).best
        assert 1.0 - 1e-6 <= lam <= upper + 1e-9


def test_constant_trial_function_is_mean_potential():
    spec = build_curve([(3, 0.1, 0.0)])
    op = assemble(spec, 512, COLLOC)
    rq = rayleigh_quotient(op, np.ones(512))
    assert rq == pytest.approx(op.potential.mean(), rel=1e-12)
    # and the quadrature of kappa^2 matches the closed form
    assert rq == pytest.approx(1.0 / np.sqrt(0.91), rel=1e-8)


def test_g_only_curve_lambda_at_least_one():
    # f == 0 curve; oracle: dense full-spectrum solve at N=128
    spec = build_curve([(2, 0.0, 0.2)])
    res = solve_ground_state(spec, 128, COLLOC)
    ev = np.linalg.eigvalsh(assemble(spec, 128, COLLOC).dense())
    assert res.lam == pytest.approx(ev[0], abs=1e-9)
    assert res.lam >= 1.0 - 1e-6


def test_positivity_and_normalization():
    for seed in (5, 6):
        spec = random_curve(seed, max_n=7, convexity_floor=0.2)
        res = solve_ground_state(spec, 512, CD2)
        assert res.R.min() > 0.0
        assert np.sum(res.R**2) * res.N**-1 * res.N * (TWO_PI / res.N) == pytest.approx(1.0, rel=1e-12)
        assert res.residual_norm < 1e-8


# -- rayleigh quotient -------------------------------------------------------


def test_rayleigh_circle_values():
    op = assemble(build_curve([]), 64, COLLOC)
    s = np.arange(64) * (TWO_PI / 64)
    assert rayleigh_quotient(op, np.ones(64)) == pytest.approx(1.0, abs=1e-12)
    assert rayleigh_quotient(op, np.cos(s)) == pytest.approx(2.0, abs=1e-10)


def test_rayleigh_of_computed_ground_state():
    spec = build_curve([(3, 0.1, 0.0)])
    op = assemble(spec, 512, CD2)
    res = ground_state(op)
    assert rayleigh_quotient(op, res.R) == pytest.approx(res.lam, abs=1e-10)


def test_rayleigh_zero_vector():
    op = assemble(build_curve([]), 64, CD2)
    with pytest.raises(ZeroVector):
        rayleigh_quotient(op, np.zeros(64))


def test_variational_property():
    # no trial function dips below the computed ground-state eigenvalue
    rng = np.random.default_rng(17)
    for seed in (21, 22, 23):
        spec = random_curve(seed, max_n=7, convexity_floor=0.2)
        for scheme in (CD2, COLLOC):
            op = assemble(spec, 256, scheme)
            lam = ground_state(op).lam
            for _ in range(100):
                psi = rng.normal(size=256)
                assert rayleigh_quotient(op, psi) >= lam - 1e-10


# -- convergence ladder ------------------------------------------------------


def test_converge_circle_terminates_at_first_doubling():
    res = converge_lambda(build_curve([]), 1e-9)
    assert res.N == 128
    assert res.best == pytest.approx(1.0, abs=1e-12)


def test_converge_tol_validation():
    with pytest.raises(ValueError):
        converge_lambda(build_curve([]), 1e-11)


def test_cross_scheme_agreement_on_ladder():
    spec = build_curve([(3, 0.1, 0.0)])
    res = converge_lambda(spec, 1e-8, CD2)
    assert res.scheme_discrepancy is not None
    assert res.scheme_discrepancy < 1e-6
    assert res.extrapolation_error is not None


def test_mixed_curve_above_universal_floor():
    spec = build_curve([(2, 0.0, 0.2), (3, 0.05, 0.0)])
    res = converge_lambda(spec, 1e-8, COLLOC)
    assert res.best > theorem1_constant() - 1e-9


def test_scheme_agreement_random():
    # cd2 Richardson (512, 1024) agrees with converged collocation to 1e-6
    for seed in (31, 32, 33, 34):
        spec = random_curve(seed, max_n=8, convexity_floor=0.35)
        half = solve_ground_state(spec, 512, CD2).lam
        fine = solve_ground_state(spec, 1024, CD2).lam
        extrap = (4.0 * fine - half) / 3.0
        colloc = converge_lambda(spec, 1e-9, COLLOC).best
        assert abs(extrap - colloc) < 1e-6


def test_lower_bound_conformance_random():
    for seed in range(40, 48):
        spec = random_curve(seed, max_n=9, convexity_floor=0.2)
        lam = converge_lambda(spec, 1e-6, COLLOC).best
        assert lam > 0.608478


def test_matrix_free_collocation_matches_dense():
    spec = build_curve([(3, 0.1, 0.0)])
    dense_lam = solve_ground_state(spec, 1024, COLLOC).lam  # dense path
    free_lam = solve_ground_state(spec, 2048, COLLOC).lam  # PCG path
    assert abs(dense_lam - free_lam) < 1e-9


# -- serialization -----------------------------------------------------------


def test_result_json_fields():
    res = converge_lambda(build_curve([]), 1e-9)
    doc = res.to_json_dict()
    for key in ("lambda", "extrapolated_lambda", "N", "scheme", "residual_norm"):
        assert key in doc
    assert doc["scheme"] in ("cd2", "collocation")


def test_eigenfunction_csv(tmp_path):
    res = ground_state(assemble(build_curve([]), 64, CD2))
    path = tmp_path / "ef.csv"
    write_eigenfunction_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "s,R"
    assert len(lines) == 65
    s0, r0 = (float(x) for x in lines[1].split(","))
    assert s0 == 0.0
    assert r0 == pytest.approx(1.0 / np.sqrt(TWO_PI), abs=1e-10)
