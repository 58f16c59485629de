import dataclasses
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from coflow.coflow_dynamics import MODIFIED, NORMALIZED
from coflow.g2_ansatz import build, torsion
from coflow.invariant_forms import GeometryParams
from coflow.stability import (
    LABEL_PRINCIPAL,
    LABEL_RESCALED,
    PSI_MINUS,
    PSI_PLUS,
    analytic_jacobian,
    classify,
    eigen3,
    find_critical_points,
    jacobian,
    newton_refine,
    state_direction,
    variation_to_form,
    verify_psi_identities,
    window_mu,
    window_verdict,
)

SQ5 = math.sqrt(5)


def principal(flavor, kappa, gamma, eps):
    pts = find_critical_points(flavor, kappa, gamma, eps)
    return next(p for p in pts if p.label == LABEL_PRINCIPAL)


def rescaled(kappa, gamma, eps):
    pts = find_critical_points(MODIFIED, kappa, gamma, eps)
    return next(p for p in pts if p.label == LABEL_RESCALED)


def angular_gap(u, v):
    u = np.array([complex(x).real for x in u], dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    return min(np.linalg.norm(u - v), np.linalg.norm(u + v))


def test_critical_point_coordinates():
    for kap in (1.0, 4.0):
        pt = principal(NORMALIZED, kap, None, +1)
        a = 12.0 / (5 * kap)
        assert np.allclose(pt.state, (a, a, SQ5 * a), rtol=0, atol=1e-12)
        assert abs(pt.tau0 - kap) < 1e-12

        pt = principal(NORMALIZED, kap, None, -1)
        assert np.allclose(pt.state, (4 / kap, 4 / kap, 4 / kap), rtol=0, atol=1e-12)
        assert abs(pt.tau0 - kap) < 1e-12


def test_rescaled_points_exist_for_the_modified_flavor():
    for eps, state in ((+1, (0.3, 0.3, 0.3 * SQ5)), (-1, (0.5, 0.5, 0.5))):
        pt = rescaled(4.0, 3.0, eps)
        assert np.allclose(pt.state, state, rtol=0, atol=1e-12)
        assert abs(pt.tau0 - 8.0) < 1e-11
        assert pt.kappa_eff == 8

    pts = find_critical_points(NORMALIZED, 4.0, None, -1)
    assert [p.label for p in pts] == [LABEL_PRINCIPAL]


def test_find_critical_points_validation():
    with pytest.raises(ValueError):
        find_critical_points(MODIFIED, 4.0, 2.0, -1)
    with pytest.raises(ValueError):
        find_critical_points("nonsense", 4.0, 3.0, -1)
    with pytest.raises(ValueError):
        find_critical_points(NORMALIZED, -4.0, None, -1)


def test_analytic_jacobian_printed_matrices_at_gamma_3():
    kap = 4.0
    plus = analytic_jacobian(+1, kap, 3.0)
    assert np.allclose(plus, (5 * kap ** 2 / 72) * np.array(
        [[-14, -23, 28], [-46, 9, 28], [14, 7, -30]]), rtol=0, atol=1e-12)
    minus = analytic_jacobian(-1, kap, 3.0)
    assert np.allclose(minus, (kap ** 2 / 8) * np.array(
        [[-70, 13, 52], [26, 5, -36], [26, -9, -22]]), rtol=0, atol=1e-12)


def test_finite_difference_jacobian_matches_analytic_on_a_grid():
    for gamma in (2.5, 3.0, 4.0):
        for kappa in (1.0, 4.0):
            for eps in (+1, -1):
                pt = principal(MODIFIED, kappa, gamma, eps)
                num, ana = jacobian(MODIFIED, pt, kappa, gamma, eps)
                assert ana is not None
                rel = np.max(np.abs(num - ana)) / np.max(np.abs(ana))
                assert rel < 1e-6


def test_jacobian_rejects_non_critical_points():
    pt = principal(MODIFIED, 4.0, 3.0, -1)
    shifted = dataclasses.replace(pt, state=(1.2, 1.0, 1.0))
    with pytest.raises(ValueError):
        jacobian(MODIFIED, shifted, 4.0, 3.0, -1)


def test_eigen3_identity_and_simple_matrices():
    pairs = eigen3(np.eye(3))
    assert all(abs(p.value - 1) < 1e-12 for p in pairs)
    assert not any(p.generalized for p in pairs)

    pairs = eigen3(np.diag([3.0, 2.0, 1.0]))
    assert [round(p.value.real) for p in pairs] == [3, 2, 1]
    for p, axis in zip(pairs, np.eye(3)):
        assert angular_gap(p.vector, axis) < 1e-10
        assert p.residual < 1e-10


def test_eigen3_flags_defective_matrices():
    # Jordan block: eigenvalue 1 doubled, one-dimensional eigenspace
    pairs = eigen3(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]))
    ones = [p for p in pairs if abs(p.value - 1) < 1e-6]
    assert len(ones) == 2
    assert sum(p.generalized for p in ones) == 1


def test_eigen3_complex_pair():
    # rotation block has a conjugate pair; values must come out conjugate
    pairs = eigen3(np.array([[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]]))
    ims = sorted(p.value.imag for p in pairs)
    assert ims == pytest.approx([-2.0, 0.0, 2.0], abs=1e-10)


def test_principal_point_spectrum_plus():
    kap = 4.0
    report = classify(MODIFIED, principal(MODIFIED, kap, 3.0, +1), kap, 3.0, +1)
    assert report.index == 1
    values = [p.value.real for p in report.eigenpairs]
    assert values == pytest.approx([20 * kap ** 2 / 9, -5 * kap ** 2 / 8,
                                    -145 * kap ** 2 / 36], rel=1e-10)
    assert angular_gap(report.eigenpairs[0].vector, (-1, 2, 0)) < 1e-8
    gaps = sorted(angular_gap(p.vector, t) for p, t in
                  zip(report.eigenpairs[1:], ((1, 1, 1), (-4, -4, 3))))
    assert gaps[-1] < 1e-8


def test_principal_point_spectrum_minus():
    kap = 4.0
    report = classify(MODIFIED, principal(MODIFIED, kap, 3.0, -1), kap, 3.0, -1)
    assert report.index == 1
    values = [p.value.real for p in report.eigenpairs]
    assert values == pytest.approx([7 * kap ** 2 / 4, -5 * kap ** 2 / 8,
                                    -12 * kap ** 2], rel=1e-10)
    assert angular_gap(report.eigenpairs[0].vector, (0, -4, 1)) < 1e-8
    gaps = sorted(angular_gap(p.vector, t) for p, t in
                  zip(report.eigenpairs[1:], ((1, 1, 1), (-5, 2, 2))))
    assert gaps[-1] < 1e-8


def test_symmetric_direction_eigenvalue_formula():
    # (1,1,1) is an eigenvector of the analytic matrix with value (5/8)k^2(2-g)
    for gamma in (2.5, 3.0, 4.0):
        for kappa in (1.0, 4.0):
            for eps in (+1, -1):
                J = analytic_jacobian(eps, kappa, gamma)
                image = J @ np.ones(3)
                lam = 5 * kappa ** 2 * (2 - gamma) / 8
                assert np.allclose(image, lam * np.ones(3), rtol=0, atol=1e-10)
                pairs = eigen3(J)
                best = min(abs(p.value.real - lam) for p in pairs)
                assert best < 1e-10 * max(1.0, abs(lam))


def test_normalized_flow_is_stable_at_both_points():
    for eps, eigs in ((+1, (-100 / 9, -8.0, -64 / 9)), (-1, (-64.0, -8.0, -4.0))):
        pt = principal(NORMALIZED, 4.0, None, eps)
        report = classify(NORMALIZED, pt, 4.0, None, eps)
        assert report.index == 0
        got = sorted(p.value.real for p in report.eigenpairs)
        assert got == pytest.approx(sorted(eigs), rel=1e-6)


def test_rescaled_point_index_depends_on_gamma():
    # eps=-1 exact eigenvalues: -(2g+3)(g-1)k^2, (8-3g)(g-1)k^2/4, (5/8)(g-1)(g-2)k^2
    kap = 4.0
    report = classify(MODIFIED, rescaled(kap, 2.5, -1), kap, 2.5, -1)
    assert report.index == 2
    got = sorted(p.value.real for p in report.eigenpairs)
    assert got == pytest.approx([-192.0, 3.0, 7.5], rel=1e-5)

    report = classify(MODIFIED, rescaled(kap, 3.0, -1), kap, 3.0, -1)
    assert report.index == 1
    got = sorted(p.value.real for p in report.eigenpairs)
    assert got == pytest.approx([-288.0, -8.0, 20.0], rel=1e-5)


def test_rescaled_point_plus_family():
    kap = 4.0
    report = classify(MODIFIED, rescaled(kap, 2.1, +1), kap, 2.1, +1)
    assert report.index == 2

    # at gamma = 5/2 one eigenvalue crosses zero; it must be flagged marginal
    report = classify(MODIFIED, rescaled(kap, 2.5, +1), kap, 2.5, +1)
    assert any(report.marginal)
    smallest = min(abs(p.value.real) for p in report.eigenpairs)
    assert smallest < 1e-6


def test_variation_to_form_gives_the_27_type_forms():
    kap = 4.0
    pt = principal(MODIFIED, kap, 3.0, +1)
    delta = variation_to_form(pt, (-1, 2, 0))
    ratio = delta.coefficient(next(iter(PSI_PLUS.coeffs)))
    scale = ratio / PSI_PLUS.coefficient(next(iter(PSI_PLUS.coeffs)))
    assert scale != 0
    assert delta == scale * PSI_PLUS

    pt = principal(MODIFIED, kap, 3.0, -1)
    assert variation_to_form(pt, (0, -4, 1)) == 2 * PSI_MINUS

    # the symmetric direction moves along psi itself
    ans = build(pt.params)
    delta = variation_to_form(pt, (1, 1, 1))
    top = next(iter(ans.psi.coeffs))
    scale = delta.coefficient(top) / ans.psi.coefficient(top)
    assert scale != 0
    assert delta == scale * ans.psi

    with pytest.raises(ValueError):
        variation_to_form(pt, (0, 0, 0))


def test_window_mu_values():
    kap = 4.0
    assert window_mu(principal(MODIFIED, kap, 3.0, +1)) == Fraction(-5, 3)
    assert window_mu(principal(MODIFIED, kap, 3.0, -1)) == Fraction(-3, 2)
    # rescaled points live at kappa_eff = (gamma-1) kappa, so mu scales
    assert window_mu(rescaled(kap, 3.0, +1)) == Fraction(-10, 3)
    assert window_mu(rescaled(kap, 3.0, -1)) == Fraction(-3)


def test_window_verdicts():
    for gamma in (Fraction(9, 4), Fraction(5, 2), 3, 4):
        for mu in (Fraction(-5, 3), Fraction(-3, 2)):
            v = window_verdict(mu, gamma, MODIFIED)
            assert v.verdict == "destabilizing"
            assert v.form_value < 0
    assert window_verdict(Fraction(-1), 3, MODIFIED).verdict == "kernel"
    # outside the window on both sides
    assert window_verdict(Fraction(-1, 2), 3, MODIFIED).verdict == "stable-direction"
    assert window_verdict(Fraction(-6), 3, MODIFIED).verdict == "stable-direction"

    for mu in (Fraction(-5, 3), Fraction(-3, 2), Fraction(-1, 2), Fraction(-6)):
        v = window_verdict(mu, None, NORMALIZED)
        assert v.form_value >= 0
        assert v.verdict != "destabilizing"
    assert window_verdict(Fraction(-1), None, NORMALIZED).verdict == "kernel"


def test_classify_reports_destabilizing_window_only_for_modified():
    kap = 4.0
    rep = classify(MODIFIED, principal(MODIFIED, kap, 3.0, -1), kap, 3.0, -1)
    assert rep.window.verdict == "destabilizing"
    assert rep.unstable_form is not None

    rep = classify(NORMALIZED, principal(NORMALIZED, kap, None, -1), kap, None, -1)
    assert rep.window.verdict == "stable-direction"
    assert rep.unstable_form is None


def test_psi_identities():
    for eps in (+1, -1):
        for kap in (1, 4, Fraction(5, 2)):
            report = verify_psi_identities(eps, kap)
            assert report.all_pass, report.details


def test_spectral_report_json_schema():
    kap = 4.0
    rep = classify(MODIFIED, principal(MODIFIED, kap, 3.0, +1), kap, 3.0, +1)
    payload = rep.to_json_dict()
    assert set(payload) == {
        "flavor", "epsilon", "kappa", "gamma", "point", "tau0", "jacobian",
        "eigenvalues", "eigenvectors", "index", "unstable_form", "window",
    }
    assert set(payload["point"]) == {"a", "b", "c"}
    assert set(payload["window"]) == {"mu", "verdict"}
    assert all(set(e) == {"re", "im", "residual"} for e in payload["eigenvalues"])
    assert payload["index"] == 1
    assert isinstance(payload["unstable_form"], dict)


def test_state_direction_unit_norm_and_scaling():
    pt = principal(MODIFIED, 4.0, 3.0, +1)
    v = state_direction(pt, (0, 0, 1))
    assert np.allclose(v, (0, 0, 1))
    v = state_direction(pt, (1, 1, 1))
    assert np.linalg.norm(v) == pytest.approx(1.0)
    # the third slot carries the sqrt(5) weight of the plus family
    assert v[2] / v[0] == pytest.approx(SQ5)
    with pytest.raises(ValueError):
        state_direction(pt, (0, 0, 0))


KNOWN_ROOTS = {
    +1: [
        (0.6, 0.6, 0.6 * SQ5),
        (0.3, 0.3, 0.3 * SQ5),
        (0.350196579905, 0.183571550431, 0.648854244094),
        (0.494370498097, 0.494370498097, 0.520363213124),
    ],
    -1: [
        (1.0, 1.0, 1.0),
        (0.5, 0.5, 0.5),
        (0.488217966607, 0.312301990963, 0.538557367847),
    ],
}


def tau3_norm_sq_at(state, eps):
    fa, fb, fc = (Fraction(float(v)) for v in state)
    return float(torsion(build(GeometryParams(fa, fb, fc * fc, eps))).tau3_norm_sq)


def test_normalized_root_survey_finds_only_the_attractor():
    # the extended field has rest points on the degenerate b -> 0 boundary;
    # those are not geometric states, so near-boundary roots are skipped
    rng = random.Random(7)
    for eps in (+1, -1):
        target = np.array(KNOWN_ROOTS[eps][0])
        for _ in range(60):
            y0 = np.array([rng.uniform(0.2, 2.0) for _ in range(3)])
            root = newton_refine(NORMALIZED, y0, 4.0, None, eps)
            if root is None or root.min() < 1e-6:
                continue
            assert np.linalg.norm(root - target) < 1e-8


def test_modified_root_survey_extras_are_not_nearly_parallel():
    rng = random.Random(8)
    for eps in (+1, -1):
        known = [np.array(r) for r in KNOWN_ROOTS[eps]]
        found = set()
        for _ in range(120):
            y0 = np.array([rng.uniform(0.15, 1.8) for _ in range(3)])
            root = newton_refine(MODIFIED, y0, 4.0, 3.0, eps)
            if root is None or root.min() < 1e-6:
                continue
            dists = [np.linalg.norm(root - k) for k in known]
            idx = int(np.argmin(dists))
            assert dists[idx] < 1e-8, f"unexpected equilibrium {root}"
            found.add(idx)
        # the survey reaches the catalogued non-nearly-parallel equilibria
        assert any(i >= 2 for i in found)
        for i in found:
            n2 = tau3_norm_sq_at(known[i], eps)
            if i < 2:
                assert n2 < 1e-18
            else:
                assert n2 > 1.0
