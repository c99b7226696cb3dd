import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartan_hartogs.domains import (
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    contains,
    generic_norm,
    make_domain,
    norm_unchecked,
    parse_kind,
    sample_interior,
    to_matrix,
)
from cartan_hartogs.errors import InvalidKindError, NonpositiveNormError, SamplingError, ShapeError
from cartan_hartogs.quadrature import integrate


def kinds_up_to_dim(max_dim):
    out = []
    for p in range(1, max_dim + 1):
        for q in range(p, max_dim + 1):
            if p * q <= max_dim:
                out.append(TypeI(p, q))
    out += [TypeII(n) for n in range(2, 10) if n * (n + 1) // 2 <= max_dim]
    out += [TypeIII(n) for n in range(4, 10) if n * (n - 1) // 2 <= max_dim]
    out += [TypeIV(n) for n in range(3, max_dim + 1)]
    return out


@pytest.mark.parametrize("kind,expected", [
    (TypeI(1, 3), (1, 2, 2, 4, 3)),
    (TypeI(2, 2), (2, 2, 0, 4, 4)),
    (TypeI(2, 3), (2, 2, 1, 5, 6)),
    (TypeII(3), (3, 1, 0, 4, 6)),
    (TypeIII(4), (2, 4, 0, 6, 6)),
    (TypeIII(5), (2, 4, 2, 8, 10)),
    (TypeIV(3), (2, 1, 0, 3, 3)),
    (TypeIV(5), (2, 3, 0, 5, 5)),
])
def test_invariant_table(kind, expected):
    spec = make_domain(kind)
    assert (spec.r, spec.a, spec.b, spec.genus, spec.dim) == expected


@pytest.mark.parametrize("kind", kinds_up_to_dim(10))
def test_invariant_identities(kind):
    spec = make_domain(kind)
    r, a, b = spec.r, spec.a, spec.b
    assert spec.genus == 2 + a * (r - 1) + b
    assert spec.dim == r + a * r * (r - 1) // 2 + r * b


@pytest.mark.parametrize("text", ["typeIV:2", "typeIII:3", "typeII:1", "typeI:3,2", "typeI:0,1", "typeV:3", "typeI:1"])
def test_invalid_kinds(text):
    with pytest.raises(InvalidKindError):
        make_domain(text)


@given(st.sampled_from(kinds_up_to_dim(10)))
def test_kind_name_round_trip(kind):
    assert parse_kind(str(kind)) == kind
    assert make_domain(str(kind)).name == str(kind)


@pytest.mark.parametrize("kind", ["typeI:1,1", "typeI:2,3", "typeII:2", "typeIII:4", "typeIV:3"])
def test_norm_at_origin(kind):
    spec = make_domain(kind)
    assert generic_norm(spec, np.zeros(spec.dim)) == pytest.approx(1.0, abs=1e-15)
    assert contains(spec, np.zeros(spec.dim))


def test_norm_examples():
    assert generic_norm(make_domain("typeI:1,1"), [0.5]) == pytest.approx(0.75)
    t = 0.6
    assert generic_norm(make_domain("typeIV:3"), [t, 0, 0]) == pytest.approx((1 - t * t) ** 2, abs=1e-14)


def test_contains_examples():
    assert not contains(make_domain("typeI:1,1"), [1.0])
    # 2*0.81 = 1.62 < 1 + 0.6561
    assert contains(make_domain("typeIV:3"), [0.9, 0, 0])
    assert not contains(make_domain("typeIV:3"), [0.8, 0.8, 0])


def test_shape_and_closure_errors():
    with pytest.raises(ShapeError):
        contains(make_domain("typeI:2,2"), np.zeros(3))
    with pytest.raises(NonpositiveNormError):
        generic_norm(make_domain("typeI:1,1"), [1.5])


def test_matrix_flattening():
    spec = make_domain("typeII:2")
    mat = to_matrix(spec, np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(mat, [[1, 2], [2, 3]])
    spec = make_domain("typeIII:4")
    mat = to_matrix(spec, np.arange(1, 7, dtype=complex))
    np.testing.assert_array_equal(mat, -mat.T)
    assert mat[0, 1] == 1 and mat[2, 3] == 6


def _random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_typeI_unitary_invariance():
    spec = make_domain("typeI:2,3")
    rng = np.random.default_rng(3)
    pts = sample_interior(spec, 100, 11).points
    for z in pts:
        u, v = _random_unitary(rng, 2), _random_unitary(rng, 3)
        rotated = (u @ z.reshape(2, 3) @ np.conj(v.T)).ravel()
        assert abs(generic_norm(spec, rotated) - generic_norm(spec, z)) < 1e-12


def test_typeIII_norm_squares_to_determinant():
    spec = make_domain("typeIII:4")
    z = sample_interior(spec, 20, 5).points
    mat = to_matrix(spec, z)
    det = np.real(np.linalg.det(np.eye(4) - mat @ np.conj(np.swapaxes(mat, -1, -2))))
    np.testing.assert_allclose(generic_norm(spec, z) ** 2, det, rtol=1e-12)


@pytest.mark.parametrize("kind", ["typeI:1,2", "typeI:2,2", "typeII:2", "typeIII:4", "typeIV:3"])
def test_norm_range_and_monotone_rays(kind):
    spec = make_domain(kind)
    pts = sample_interior(spec, 200, 2).points
    n = generic_norm(spec, pts)
    assert np.all((n > 0) & (n <= 1))
    ts = np.linspace(0, 1, 21)
    for z in pts[:20]:
        values = norm_unchecked(spec, ts[:, None] * z[None, :])
        assert np.all(np.diff(values) <= 1e-12)


def test_sampler_postconditions():
    spec = make_domain("typeI:1,1")
    s = sample_interior(spec, 1000, 7)
    assert len(s) == 1000 and np.all(np.abs(s.points[:, 0]) < 1)
    again = sample_interior(spec, 1000, 7)
    np.testing.assert_array_equal(s.points, again.points)
    np.testing.assert_array_equal(s.weights, again.weights)


def test_sampler_volumes():
    area, _ = integrate(lambda z: np.ones(len(z)), sample_interior(make_domain("typeI:1,1"), 10_000, 1))
    assert area == pytest.approx(math.pi, rel=0.05)
    vol, _ = integrate(lambda z: np.ones(len(z)), sample_interior(make_domain("typeI:1,2"), 100_000, 1))
    assert vol == pytest.approx(math.pi**2 / 2, rel=0.05)


def test_sampler_min_norm():
    spec = make_domain("typeIV:3")
    s = sample_interior(spec, 500, 4, min_norm=0.1)
    assert np.all(generic_norm(spec, s.points) > 0.1)


def test_sampler_fails_in_high_dimension():
    with pytest.raises(SamplingError):
        sample_interior(make_domain("typeIV:10"), 10, 0)
