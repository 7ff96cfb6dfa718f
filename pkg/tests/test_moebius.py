import json

import numpy as np
import pytest

from hyperharm.errors import ConstraintViolation, IdentityMap, PoleAtPoint
from hyperharm.moebius import (INFINITY, MoebiusMap, SL2R, SU11, apply,
                               apply_strict, cayley, cayley_deriv, cayley_inv,
                               cayley_inv_deriv, classify, compose,
                               derivative, fixed_points, from_json, identity,
                               inverse, pullback_field, shares_fixed_point,
                               stab1_element, to_disk_map, to_halfplane_map,
                               to_json, trace_sq, zero_to_z)


def _rand_sl2r(rng):
    while True:
        a, b, c = rng.normal(size=3)
        if abs(a) > 1e-3:
            d = (1.0 + b * c) / a
            return MoebiusMap(a, b, c, d, SL2R)


def _rand_su11(rng):
    t = rng.normal(size=4)
    beta = t[0] + 1j * t[1]
    phase = np.exp(1j * t[2])
    alpha = np.sqrt(1.0 + abs(beta) ** 2) * phase
    return MoebiusMap(alpha, beta, np.conj(beta), np.conj(alpha), SU11)


def test_compose_preserves_determinant_bulk():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m1 = _rand_sl2r(rng)
        m2 = _rand_sl2r(rng)
        m = compose(m1, m2)
        det = m.a * m.d - m.b * m.c
        assert abs(det - 1.0) < 1e-9


def test_inverse_composes_to_identity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = _rand_sl2r(rng)
        e = compose(m, inverse(m))
        assert classify(e) == "identity"


def test_classification_frozen_cases():
    assert classify(MoebiusMap(2.0, 0.0, 0.0, 0.5, SL2R)) == "hyperbolic"
    assert classify(MoebiusMap(1.0, 1.0, 0.0, 1.0, SL2R)) == "parabolic"
    w = np.exp(1j * np.pi / 4)
    ell = MoebiusMap(w, 0.0, 0.0, np.conj(w), SU11)
    assert classify(ell) == "elliptic"
    assert abs(trace_sq(ell) - 2.0) < 1e-12


def test_classification_is_conjugation_invariant():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = _rand_sl2r(rng)
        g = _rand_sl2r(rng)
        conj = compose(compose(g, m), inverse(g))
        assert classify(conj) == classify(m)


def test_fixed_points_frozen_cases():
    fp = fixed_points(MoebiusMap(1.0, 1.0, 0.0, 1.0, SL2R))
    assert fp == [INFINITY]
    fp = fixed_points(MoebiusMap(2.0, 0.0, 0.0, 0.5, SL2R))
    assert any(p is INFINITY for p in fp)
    finite = [p for p in fp if p is not INFINITY]
    assert len(finite) == 1 and abs(finite[0]) < 1e-12


def test_fixed_points_identity_raises():
    with pytest.raises(IdentityMap):
        fixed_points(identity(SL2R))


def test_fixed_points_are_fixed():
    rng = np.random.default_rng(5)
    for _ in range(100):
        m = _rand_sl2r(rng)
        if classify(m) == "identity":
            continue
        for p in fixed_points(m):
            if p is INFINITY:
                assert abs(m.c) < 1e-9 or apply(m, INFINITY) is INFINITY
            else:
                assert abs(apply(m, p) - p) < 1e-6


def test_commuting_hyperbolic_share_fixed_points():
    rng = np.random.default_rng(13)
    base = MoebiusMap(2.0, 0.0, 0.0, 0.5, SL2R)
    for _ in range(50):
        t = rng.uniform(0.2, 3.0)
        other = MoebiusMap(t, 0.0, 0.0, 1.0 / t, SL2R)
        assert shares_fixed_point(base, other)
    # non-commuting witness: conjugate so both fixed points move off {0, inf}
    g = MoebiusMap(1.0, 1.0, 1.0, 2.0, SL2R)
    moved = compose(compose(g, base), inverse(g))
    assert not shares_fixed_point(base, moved)


def test_apply_pole_and_infinity():
    m = MoebiusMap(0.0, 1.0, -1.0, 0.0, SL2R)
    assert apply(m, INFINITY) == 0.0
    assert apply(m, 0.0) is INFINITY
    with pytest.raises(PoleAtPoint):
        apply_strict(m, 0.0)


def test_derivative_matches_difference_quotient():
    rng = np.random.default_rng(17)
    for _ in range(20):
        m = _rand_sl2r(rng)
        z = complex(rng.normal(), abs(rng.normal()) + 0.5)
        h = 1e-6
        fd = (apply(m, z + h) - apply(m, z - h)) / (2.0 * h)
        assert abs(derivative(m, z) - fd) < 1e-6


def test_cayley_roundtrip_and_derivatives():
    zs = [0.3 + 0.8j, -1.2 + 2.5j, 0.0 + 1.0j, 4.0 + 0.1j]
    for z in zs:
        w = cayley(z)
        assert abs(w) < 1.0
        assert abs(cayley_inv(w) - z) < 1e-12
        assert abs(cayley_deriv(z) * cayley_inv_deriv(w) - 1.0) < 1e-12
    assert abs(cayley(1j)) < 1e-15
    with pytest.raises(PoleAtPoint):
        cayley_inv(1.0)


def test_cayley_conjugation_sends_sl2r_to_su11():
    rng = np.random.default_rng(19)
    for _ in range(100):
        m = _rand_sl2r(rng)
        d = to_disk_map(m)
        assert d.model == SU11
        assert abs(d.a - np.conj(d.d)) < 1e-9
        assert abs(d.b - np.conj(d.c)) < 1e-9
        # the point maps intertwine through the Cayley transform
        z = complex(rng.normal(), abs(rng.normal()) + 0.3)
        assert abs(apply(d, cayley(z)) - cayley(apply(m, z))) < 1e-9
        back = to_halfplane_map(d)
        assert np.allclose(back.mat, m.mat, atol=1e-9) or np.allclose(
            back.mat, -m.mat, atol=1e-9)


def test_zero_to_z_frozen_case():
    m = zero_to_z(0.5)
    assert abs(apply(m, 0.0) - 0.5) < 1e-12
    assert abs(apply(m, 0.5) - 0.8) < 1e-12
    assert abs(derivative(m, 0.0) - 0.75) < 1e-12


def test_stab1_element_fixes_one():
    m = stab1_element(1.25, -0.75)
    assert m.model == SU11
    assert abs(apply(m, 1.0) - 1.0) < 1e-10
    with pytest.raises(ConstraintViolation):
        stab1_element(1.0, 1.0)


def test_pullback_field_chain_rule():
    m = MoebiusMap(2.0, 1.0, 1.0, 1.0, SL2R)
    xi = lambda z: z ** 2
    pulled = pullback_field(m, xi)
    z = 0.4 + 1.3j
    expected = xi(apply(m, z)) / derivative(m, z)
    assert abs(pulled(z) - expected) < 1e-12


def test_json_roundtrip():
    m = MoebiusMap(2.0, 1.0, 1.0, 1.0, SL2R)
    blob = to_json(m)
    assert blob["model"] == "SL2R"
    # survives an actual serialization pass, and from_json takes either form
    m2 = from_json(json.dumps(blob))
    assert np.allclose(m.mat, m2.mat)
    d = zero_to_z(0.3 + 0.1j)
    d2 = from_json(to_json(d))
    assert d2.model == SU11
    assert np.allclose(d.mat, d2.mat)


def test_validate_rejects_wrong_determinant():
    with pytest.raises(ConstraintViolation):
        MoebiusMap(2.0, 0.0, 0.0, 2.0, SL2R, normalize=False).validate()
    with pytest.raises(ConstraintViolation):
        MoebiusMap(1.0, 1j, 0.0, 1.0, SL2R, normalize=False).validate()
