import numpy as np
import pytest

from hyperharm.errors import TooCloseToBoundary
from hyperharm.moebius import MoebiusMap, apply, cayley, derivative
from hyperharm.qdiff import (DISK, HALFPLANE, FieldEvaluator, QuadDiff, beta,
                             beltrami_of, catalog, derivative_bounds,
                             field_to_disk, harmonic_residual,
                             holomorphy_residual, killing_field_halfplane,
                             qd_norm, qd_to_disk)


def _strip(field):
    # drop attached exact derivatives so beta runs its finite differences
    return FieldEvaluator(field.model, field.fn)


def test_beta_of_holomorphic_fields_vanishes_bulk():
    # quadratic holomorphic fields (the globally defined ones) have zero
    # third derivative, so the 2-point stencils see them exactly
    rng = np.random.default_rng(23)
    coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
    holo = FieldEvaluator(
        HALFPLANE,
        lambda z: coeffs[0] + coeffs[1] * z + coeffs[2] * z * z)
    pts = rng.uniform(-3, 3, size=1000) + 1j * rng.uniform(0.4, 4.0,
                                                           size=1000)
    worst = max(abs(beta(holo, complex(z))) for z in pts)
    assert worst < 1e-8, worst


def test_beta_of_entire_fields_small():
    # faster-growing holomorphic fields pick up O(h^2 f''') truncation
    holo = FieldEvaluator(HALFPLANE, lambda z: np.sin(z / 2.0) + z ** 3 / 10)
    rng = np.random.default_rng(29)
    pts = rng.uniform(-2, 2, size=200) + 1j * rng.uniform(0.5, 3.0, size=200)
    worst = max(abs(beta(holo, complex(z))) for z in pts)
    assert worst < 1e-5, worst


def test_killing_fields_have_zero_residual():
    for alpha, bet, gam in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0),
                            (0.0, 0.0, 1.0), (0.3, -1.2, 0.7)]:
        field = _strip(killing_field_halfplane(alpha, bet, gam))
        for z in (0.5 + 0.7j, -1.0 + 2.0j, 2.0 + 1.0j):
            r1, r2 = harmonic_residual(field, z)
            assert abs(r1) < 1e-6 and abs(r2) < 1e-6


def test_residual_and_holomorphy_agree_both_ways():
    # a field is harmonic exactly when its beta output is holomorphic
    harm = FieldEvaluator(HALFPLANE, lambda z: z.imag ** 3 + 0j)
    nonharm = FieldEvaluator(HALFPLANE, lambda z: z.imag ** 2 + 0j)
    z = 0.3 + 1.2j
    r = harmonic_residual(harm, z)
    assert abs(r[0]) < 1e-6 and abs(r[1]) < 1e-6
    q_harm = QuadDiff(HALFPLANE, lambda w: beta(harm, w))
    assert holomorphy_residual(q_harm, z, h=1e-3) < 1e-5
    r = harmonic_residual(nonharm, z)
    assert abs(r[0]) > 0.1 or abs(r[1]) > 0.1
    q_non = QuadDiff(HALFPLANE, lambda w: beta(nonharm, w))
    assert holomorphy_residual(q_non, z, h=1e-3) > 0.1


def test_harmonic_residual_frozen_value():
    # xi = Im z at i: r1 = -2, r2 = 0
    field = FieldEvaluator(HALFPLANE, lambda z: complex(z.imag))
    r1, r2 = harmonic_residual(field, 1j)
    assert abs(r1 + 2.0) < 1e-6
    assert abs(r2) < 1e-8


def test_beta_conjugation_naturality():
    # beta(gamma^* xi)(z) = beta(xi)(gamma z) gamma'(z)^2
    from hyperharm.moebius import pullback_field
    gamma = MoebiusMap(2.0, 1.0, 1.0, 1.0, "SL2R")
    field = FieldEvaluator(HALFPLANE, lambda z: z.imag ** 3 * np.cos(z / 4.0))
    pulled = FieldEvaluator(HALFPLANE, pullback_field(gamma, field.fn))
    for z in (0.2 + 0.9j, -0.5 + 1.4j, 1.0 + 2.0j):
        lhs = beta(pulled, z)
        rhs = beta(field, apply(gamma, z)) * derivative(gamma, z) ** 2
        assert abs(lhs - rhs) < 1e-6


def test_beta_too_close_to_boundary():
    field = FieldEvaluator(HALFPLANE, lambda z: z.imag ** 3 + 0j)
    with pytest.raises(TooCloseToBoundary):
        beta(field, 0.5 + 1e-7j)


def test_beta_disk_transport_consistency():
    # push a half-plane field with known differential to the disk and check
    # that beta there returns the transported differential
    from hyperharm.harmonic_construct import monomial_field
    field = monomial_field(1)
    disk_field = field_to_disk(field)
    q_half = QuadDiff(HALFPLANE, lambda z: z)
    q_disk = qd_to_disk(q_half)
    for w in (0.2 + 0.1j, -0.3 + 0.4j, 0.5j):
        assert abs(beta(disk_field, w) - q_disk(w)) < 1e-6


def test_qd_norm_and_beltrami_frozen_values():
    one = QuadDiff(HALFPLANE, lambda z: 1.0 + 0j)
    assert abs(qd_norm(one, 2j) - 4.0) < 1e-12
    assert abs(beltrami_of(one, 1j) + 4.0) < 1e-12


def test_finite_difference_order_on_catalog():
    # halving h must cut first- and second-derivative errors by ~4 (order 2+)
    fields = catalog()
    for name, field in fields.items():
        bare = _strip(field)
        z = 0.37 + 1.21j
        exact = field.exact
        if "dzbar" in exact:
            b_ref = np.conj(2.0 / z.imag ** 2 * exact["dzbar"](z))
            e1 = abs(beta(bare, z, h=2e-3) - b_ref)
            e2 = abs(beta(bare, z, h=1e-3) - b_ref)
            if e1 > 1e-12:
                order = np.log2(e1 / max(e2, 1e-17))
                assert order > 1.9, (name, order)


def test_derivative_bounds_rational_reference():
    from hyperharm.harmonic_construct import rational_plus_i4
    rep = rational_plus_i4().bounds()
    # sup_y y^k |f^(k)| over the grid for f = (z+i)^-4, extremes on the
    # imaginary axis: D = 27/256 * ... frozen from an independent scan
    assert abs(rep.D - 0.0625) < 1e-3
    assert 0.10 < rep.K1 < 0.16
    assert 0.40 < rep.K2 < 0.48


def test_quad_diff_call_and_exact_slots():
    q = QuadDiff(HALFPLANE, lambda z: z ** 2, holomorphic=True)
    assert q(2j) == -4.0 + 0j
    assert q.holomorphic
