"""Tests for coefficient analysis, synthesis, and the error metrics."""

import json
import os

import numpy as np
import pytest

from ballspec.basis import BasisKind, BasisSpec, PolarPoint, UsageError, wfunc_eval
from ballspec.expand import (
    analyze_ball3,
    analyze_disc,
    analyze_polar_weighted,
    coeff_decay_table,
    error_report,
    error_report_polar,
    export_decay_csv,
    export_report_json,
    flatten_index,
    standard_grid,
    quad_pad,
    synthesize,
    synthesize_polar_weighted,
    unflatten_index,
)
from ballspec.split import SplitPair, Template, make_pos, raw_pair


def standard_field(r, th):
    return (1.0 - np.asarray(r)) * np.exp(np.asarray(r)) \
        * np.exp(1j * (np.asarray(th) + 0.5))


def basis_field(spec, n, m):
    def f(r, th):
        from ballspec.basis import wfunc_radial
        return wfunc_radial(spec, n, r) * np.exp(1j * m * np.asarray(th))
    return f


DISC_SPEC = BasisSpec(alpha=2.0, beta=2.0, d=2, N=6, K=5)


def test_analyze_basis_function_gives_unit_indicator():
    f = basis_field(DISC_SPEC, 2, 1)
    coeffs = analyze_disc(raw_pair(f), DISC_SPEC, check=False)
    ref = np.zeros((7, 11))
    ref[2, 1 + 5] = 1.0
    assert np.max(np.abs(coeffs.fhat - ref)) < 1e-12


def test_analyze_theta_independent_field_has_single_mode():
    f = lambda r, th: np.asarray(r) * (1.0 - np.asarray(r)) * np.ones_like(np.asarray(th))
    coeffs = analyze_disc(raw_pair(f), DISC_SPEC, check=False)
    off = coeffs.fhat.copy()
    off[:, 5] = 0.0
    assert np.max(np.abs(off)) < 1e-12


def test_conjugate_symmetry_for_real_fields():
    f = lambda r, th: np.asarray(r) * (1.0 - np.asarray(r)) * np.cos(2.0 * np.asarray(th))
    coeffs = analyze_disc(raw_pair(f), DISC_SPEC, check=False)
    for m in range(1, 6):
        assert np.allclose(coeffs.fhat[:, 5 - m],
                           np.conj(coeffs.fhat[:, 5 + m]), atol=1e-12)


def test_analyze_rejects_unverified_pair():
    with pytest.raises(UsageError):
        analyze_disc(raw_pair(standard_field), DISC_SPEC, check=True)


def test_round_trip_on_basis_function():
    f = basis_field(DISC_SPEC, 3, -2)
    coeffs = analyze_disc(raw_pair(f), DISC_SPEC, check=False)
    mesh = np.meshgrid(*standard_grid(6, 2), indexing="ij")
    err = synthesize(coeffs, *mesh) - f(*mesh)
    assert np.max(np.abs(err)) < 1e-11


def test_headline_accuracy_77_coefficients():
    pair = make_pos(standard_field, Template.LINEAR)
    coeffs = analyze_disc(pair, DISC_SPEC)
    report = error_report(standard_field, coeffs, M=6)
    assert report.e_inf < 1e-8
    assert report.e_2 < 1e-8 * 10


def test_parseval_inequality_and_gap():
    pair = make_pos(standard_field, Template.LINEAR)
    from ballspec.basis import InnerProductKind, inner_product
    f1_norm2 = inner_product(pair.f1, pair.f1, InnerProductKind.CARTESIAN,
                             resolution=64).real
    prev_gap = None
    for n_trunc in (2, 4, 6):
        spec = BasisSpec(alpha=2.0, beta=2.0, d=2, N=n_trunc, K=5)
        coeffs = analyze_disc(pair, spec)
        s = np.sum(np.abs(coeffs.fhat) ** 2)
        gap = f1_norm2 - s
        assert gap > -1e-10
        if prev_gap is not None:
            assert gap < prev_gap * 0.1  # geometric shrinkage
        prev_gap = gap


def test_adjoint_consistency_on_random_tensor():
    rng = np.random.default_rng(4)
    spec = BasisSpec(alpha=2.0, beta=2.0, d=2, N=3, K=2)
    c = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
    from ballspec.expand import CoeffTensor
    tensor = CoeffTensor(fhat=c, fcirc={}, spec=spec, pair=None)
    g = basis_field(spec, 2, -1)
    from ballspec.basis import InnerProductKind, inner_product
    lhs = inner_product(lambda r, th: synthesize(tensor, r, th), g,
                        InnerProductKind.CARTESIAN, resolution=64)
    ghat = analyze_disc(raw_pair(g), spec, check=False).fhat
    rhs = np.sum(c * np.conj(ghat))
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_flatten_index_bijection():
    spec = DISC_SPEC
    assert flatten_index(0, -5, spec) == 0
    assert flatten_index(6, 5, spec) == 76
    seen = set()
    for n in range(7):
        for m in range(-5, 6):
            q = flatten_index(n, m, spec)
            assert unflatten_index(q, spec) == (n, m)
            seen.add(q)
    assert seen == set(range(77))
    with pytest.raises(UsageError):
        flatten_index(7, 0, spec)


def test_single_mode_field_occupies_expected_flat_indices():
    pair = make_pos(standard_field, Template.LINEAR)
    coeffs = analyze_disc(pair, DISC_SPEC)
    report = error_report(standard_field, coeffs, M=6)
    top = max(v for _, v in report.coeff_decay)
    nonzero = [q for q, v in report.coeff_decay if v > 1e-12 * top]
    assert nonzero == [flatten_index(n, 1, DISC_SPEC) for n in range(7)]


def test_standard_grid_shape_and_endpoints():
    r, th = standard_grid(6, 2)
    assert len(r) == 7 and len(th) == 7
    assert r[0] == 0.0 and r[-1] == pytest.approx(1.0)
    assert th[0] == -np.pi and th[-1] == pytest.approx(np.pi)
    r3, t1, t2 = standard_grid(6, 3)
    assert t2[-1] == pytest.approx(np.pi)


def test_truncation_monotonicity_in_flat_order():
    """Adding coefficients in flat-index order never worsens the plateau."""
    pair = make_pos(standard_field, Template.LINEAR)
    coeffs = analyze_disc(pair, DISC_SPEC)
    full = error_report(standard_field, coeffs, M=6).e_inf
    from ballspec.expand import CoeffTensor
    flat = coeffs.fhat.reshape(-1)
    errors = []
    for keep in (11, 33, 55, 77):
        trunc = np.zeros_like(flat)
        trunc[:keep] = flat[:keep]
        tensor = CoeffTensor(fhat=trunc.reshape(coeffs.fhat.shape),
                             fcirc=coeffs.fcirc, spec=DISC_SPEC, pair=pair)
        errors.append(error_report(standard_field, tensor, M=6).e_inf)
    assert all(e2 <= e1 * 1.01 for e1, e2 in zip(errors, errors[1:]))
    assert errors[-1] == pytest.approx(full, rel=1e-10)


def test_ball3_basis_function_round_trip():
    spec = BasisSpec(alpha=2.0, beta=2.0, d=3, N=5, K=3)

    def f(r, t1, t2):
        from ballspec.basis import ball_phase, ball_radial
        return ball_radial(spec, 1, r) * ball_phase(np.array([1, 2]), [t1, t2])

    coeffs = analyze_ball3(raw_pair(f, d=3), spec, check=False)
    ref = np.zeros((6, 7, 7))
    ref[1, 1 + 3, 2 + 3] = 1.0
    assert np.max(np.abs(coeffs.fhat - ref)) < 1e-12


def test_ball3_full_pipeline_accuracy():
    f = lambda r, t1, t2: (1.0 - np.asarray(r)) * np.exp(np.asarray(r)) \
        * np.exp(1j * (0.5 + np.asarray(t1) + 2.0 * np.asarray(t2)))
    spec = BasisSpec(alpha=2.0, beta=2.0, d=3, N=5, K=3)
    pair = make_pos(f, Template.LINEAR, d=3)
    coeffs = analyze_ball3(pair, spec)
    report = error_report(f, coeffs, M=6)
    assert report.e_inf < 1e-6


def test_polar_weighted_family_round_trip():
    coeffs = analyze_polar_weighted(standard_field, 6, 5, 2.0)
    report = error_report_polar(standard_field, coeffs, M=6)
    assert report.e_inf < 1e-5
    # decay is geometric for this analytic field
    top = max(v for _, v in report.coeff_decay)
    nz = [v for _, v in report.coeff_decay if v > 1e-12 * top]
    assert nz[-1] < 1e-6 * nz[0]


def test_quad_pad_env_override(monkeypatch):
    monkeypatch.setenv("BALLSPEC_QUAD_PAD", "21")
    assert quad_pad() == 21
    monkeypatch.delenv("BALLSPEC_QUAD_PAD")
    assert quad_pad() == 8
    # a larger pad must not change converged coefficients
    f = basis_field(DISC_SPEC, 2, 1)
    base = analyze_disc(raw_pair(f), DISC_SPEC, check=False).fhat
    monkeypatch.setenv("BALLSPEC_QUAD_PAD", "20")
    padded = analyze_disc(raw_pair(f), DISC_SPEC, check=False).fhat
    assert np.max(np.abs(base - padded)) < 1e-12


def test_export_round_trips(tmp_path):
    pair = make_pos(standard_field, Template.LINEAR)
    coeffs = analyze_disc(pair, DISC_SPEC)
    report = error_report(standard_field, coeffs, M=6)
    jpath = tmp_path / "report.json"
    export_report_json(report, jpath)
    back = json.loads(jpath.read_text())
    assert back["e_inf"] == report.e_inf
    assert back["coeff_decay"][5][1] == report.coeff_decay[5][1]
    cpath = tmp_path / "decay.csv"
    export_decay_csv(report, cpath)
    lines = cpath.read_text().strip().splitlines()
    assert lines[0] == "q,abs_coeff"
    assert len(lines) == 1 + len(report.coeff_decay)
