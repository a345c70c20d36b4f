"""Matrix polynomial fields: evaluation, exact derivatives, transformations."""

import numpy as np
import pytest

from kgen import clifford, generators
from kgen.errors import DimensionMismatchError
from kgen.fields import DISC, EUCLIDEAN, SPHERE, EvaluableField, MatrixPolyField


def random_poly_field(rng, ambient=3, size=2, degree=2, hermitian=False):
    terms = {}
    for _ in range(5):
        alpha = tuple(int(a) for a in rng.integers(0, degree + 1, ambient))
        mat = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        if hermitian:
            mat = 0.5 * (mat + mat.conj().T)
        terms[alpha] = terms.get(alpha, 0) + mat
    return MatrixPolyField(ambient, size, terms, EUCLIDEAN, selfadjoint=hermitian)


def test_evaluate_single_and_batch_agree():
    rng = np.random.default_rng(0)
    field = random_poly_field(rng)
    pts = rng.standard_normal((20, 3))
    batch = field.evaluate_batch(pts)
    for k, p in enumerate(pts):
        assert np.allclose(batch[k], field.evaluate(p), atol=1e-14)


def test_derivative_matches_central_differences():
    rng = np.random.default_rng(1)
    field = random_poly_field(rng, degree=3)
    step = 1e-5
    for _ in range(10):
        x = rng.standard_normal(3)
        for j in range(3):
            e = np.zeros(3)
            e[j] = step
            fd = (field.evaluate(x + e) - field.evaluate(x - e)) / (2 * step)
            exact = field.derivative(j).evaluate(x)
            assert np.max(np.abs(fd - exact)) < 1e-9


def test_derivative_of_constant_is_zero():
    field = MatrixPolyField(2, 2, {(0, 0): np.eye(2)}, EUCLIDEAN)
    d = field.derivative(0)
    assert np.array_equal(d.evaluate([0.3, 0.7]), np.zeros((2, 2)))


def test_direct_sum_blocks():
    rng = np.random.default_rng(2)
    a = random_poly_field(rng, size=2)
    b = random_poly_field(rng, size=3)
    s = a.direct_sum(b)
    x = rng.standard_normal(3)
    v = s.evaluate(x)
    assert v.shape == (5, 5)
    assert np.allclose(v[:2, :2], a.evaluate(x), atol=1e-14)
    assert np.allclose(v[2:, 2:], b.evaluate(x), atol=1e-14)
    assert np.max(np.abs(v[:2, 2:])) == 0.0


def test_reflect():
    rng = np.random.default_rng(3)
    field = random_poly_field(rng)
    x = rng.standard_normal(3)
    y = x.copy()
    y[0] = -y[0]
    assert np.allclose(field.reflect(0).evaluate(x), field.evaluate(y), atol=1e-14)


def test_conjugated_by():
    rng = np.random.default_rng(4)
    field = random_poly_field(rng)
    w, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    x = rng.standard_normal(3)
    expected = w.conj().T @ field.evaluate(x) @ w
    assert np.allclose(field.conjugated_by(w).evaluate(x), expected, atol=1e-13)


def test_affine_pullback_exact():
    rng = np.random.default_rng(5)
    field = random_poly_field(rng, degree=3)
    center = rng.standard_normal(3)
    radius = 0.37
    pulled = field.affine_pullback(center, radius)
    for _ in range(10):
        u = rng.standard_normal(3)
        assert np.allclose(
            pulled.evaluate(u), field.evaluate(center + radius * u), atol=1e-11
        )


def test_payload_round_trip():
    rng = np.random.default_rng(6)
    field = random_poly_field(rng, hermitian=True)
    back = MatrixPolyField.from_payload(field.to_payload())
    assert back.ambient_dim == field.ambient_dim
    assert back.selfadjoint
    assert set(back.terms) == set(field.terms)
    for alpha in field.terms:
        assert np.array_equal(back.terms[alpha], field.terms[alpha])


def test_shape_validation():
    with pytest.raises(ValueError):
        MatrixPolyField(2, 2, {(0,): np.eye(2)})
    with pytest.raises(ValueError):
        MatrixPolyField(2, 2, {(0, 0): np.eye(3)})
    field = MatrixPolyField(2, 2, {(0, 0): np.eye(2)})
    with pytest.raises(DimensionMismatchError):
        field.evaluate([1.0, 2.0, 3.0])


def test_evaluable_field_continuity_probe():
    rep = clifford.build_rep(3, clifford.LEFT)
    transform = generators.bounded_transform(
        generators.weyl_field(2, rep, domain=EUCLIDEAN)
    )
    assert transform.continuity_residual(probes=10) < 1e-5


def test_evaluable_field_shape_checks():
    field = EvaluableField(2, 2, lambda x: np.eye(2), DISC)
    with pytest.raises(DimensionMismatchError):
        field.evaluate([1.0])
    bad = EvaluableField(2, 2, lambda x: np.eye(3), SPHERE)
    with pytest.raises(DimensionMismatchError):
        bad.evaluate([1.0, 0.0])
