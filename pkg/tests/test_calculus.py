import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartan_hartogs.calculus import (
    Stencil,
    boundary_density_A,
    boundary_density_cofactor,
    boundary_density_printed_sign,
    complex_hessian,
    complex_hessian_log,
    det_identity_residual,
    det_identity_values,
    metric_base,
)
from cartan_hartogs.domains import make_domain, norm_unchecked, sample_interior
from cartan_hartogs.errors import DomainViolationError, PreconditionError

DISK = make_domain("typeI:1,1")
BALL2 = make_domain("typeI:1,2")
CONFIGS = ["typeI:1,1", "typeI:1,2", "typeI:2,2", "typeII:2", "typeIV:3"]


def ball_log_hessian(z, mu):
    """Closed form of -ddbar log (1-|z|^2)^mu."""
    n = 1 - np.vdot(z, z).real
    return mu * (n * np.eye(len(z)) + np.outer(np.conj(z), z)) / n**2


def test_exp_potential():
    c = 0.7
    h = complex_hessian_log(lambda x: np.exp(c * np.abs(x[..., 0]) ** 2), np.array([0.3 + 0.2j]))
    assert h[0, 0] == pytest.approx(c, abs=1e-8)


def test_constant_potential_gives_zero():
    h = complex_hessian(lambda x: np.full(x.shape[:-1], 2.0), np.array([0.1, 0.2j]))
    assert np.max(np.abs(h)) < 1e-9


def test_disk_log_hessian_origin():
    h = complex_hessian_log(lambda x: 1 - np.abs(x[..., 0]) ** 2, np.array([0j]))
    assert h[0, 0] == pytest.approx(-1.0, abs=1e-6)


def test_nonpositive_stencil_node():
    with pytest.raises(DomainViolationError):
        complex_hessian_log(lambda x: 1 - np.abs(x[..., 0]) ** 2, np.array([0.9999999 + 0j]))


def test_stencil_bounds():
    with pytest.raises(ValueError):
        Stencil(step=1.0)
    with pytest.raises(ValueError):
        Stencil(step=1e-8)


@pytest.mark.parametrize("mu,expected", [(1.0, 0.5), (3.0, 1.5)])
def test_disk_metric_origin(mu, expected):
    assert metric_base(DISK, mu, np.zeros(1))[0, 0].real == pytest.approx(expected, abs=1e-8)


def test_ball_metric_origin():
    np.testing.assert_allclose(metric_base(BALL2, 1.0, np.zeros(2)), 0.5 * np.eye(2), atol=1e-8)


@given(st.floats(0.0, 0.9), st.floats(0.0, 6.28), st.floats(0.3, 3.0))
def test_ball_metric_matches_closed_form(r, phase, mu):
    z = np.array([r * np.exp(1j * phase) / np.sqrt(2), 0.3 * r])
    g = metric_base(BALL2, mu, z)
    np.testing.assert_allclose(g, 0.5 * ball_log_hessian(z, mu), rtol=1e-6, atol=1e-8)
    assert np.linalg.norm(g - np.conj(g.T)) <= 1e-8 * np.linalg.norm(g)


def test_richardson_consistency():
    z = np.array([0.3 + 0.1j, -0.2j])
    g1 = metric_base(BALL2, 1.0, z, Stencil(1e-3))
    g2 = metric_base(BALL2, 1.0, z, Stencil(5e-4))
    assert np.linalg.norm(g1 - g2) / np.linalg.norm(g1) < 1e-6


def test_mu_zero_rejected():
    with pytest.raises(PreconditionError):
        det_identity_residual(DISK, 0.0, np.zeros((2, 1)))


@pytest.mark.parametrize("kind", CONFIGS)
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_det_identity_z_independent(kind, mu):
    spec = make_domain(kind)
    _, dev = det_identity_residual(spec, mu, sample_interior(spec, 100, 1, min_norm=0.1))
    assert dev < 1e-4


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("mu", [0.5, 2.0])
def test_det_identity_ball_constant(d, mu):
    # det(-ddbar log N^mu) = mu^d N^-(d+1) on the ball, times 2^-d from the -1/2
    spec = make_domain(f"typeI:1,{d}")
    c = det_identity_values(spec, mu, sample_interior(spec, 20, 2, min_norm=0.1).points)
    np.testing.assert_allclose(c, (mu / 2) ** d, rtol=1e-6)


def test_disk_boundary_density_is_one():
    z = sample_interior(DISK, 200, 3).points
    assert np.max(np.abs(boundary_density_A(DISK, 1.0, z) - 1.0)) < 1e-5
    assert boundary_density_A(DISK, 1.0, np.zeros(1)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("kind", CONFIGS)
def test_boundary_density_at_origin(kind):
    spec = make_domain(kind)
    mu = 1.5
    h = complex_hessian(lambda x: norm_unchecked(spec, x) ** mu, np.zeros(spec.dim))
    a0 = boundary_density_A(spec, mu, np.zeros(spec.dim))
    assert a0 == pytest.approx(np.linalg.det(-h).real, rel=1e-8)


@pytest.mark.parametrize("kind", CONFIGS)
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_boundary_density_structure(kind, mu):
    spec = make_domain(kind)
    z = sample_interior(spec, 100, 4, min_norm=0.1).points
    a = boundary_density_A(spec, mu, z)
    scaled = a * norm_unchecked(spec, z) ** (spec.genus - mu * (spec.dim + 1))
    assert np.max(np.abs(scaled / scaled.mean() - 1)) < 1e-4


@pytest.mark.parametrize("kind", ["typeI:1,1", "typeI:1,2", "typeI:1,3", "typeII:2", "typeIV:3"])
def test_cofactor_expansion_agrees(kind):
    spec = make_domain(kind)
    z = sample_interior(spec, 30, 6, min_norm=0.1).points
    np.testing.assert_allclose(boundary_density_cofactor(spec, 1.3, z), boundary_density_A(spec, 1.3, z), rtol=1e-8)


def test_printed_sign_gives_different_density_on_disk():
    z = np.array([[0.5 + 0j], [0.3j]])
    np.testing.assert_allclose(boundary_density_printed_sign(DISK, 1.0, z), 1 - 2 * np.abs(z[:, 0]) ** 2, atol=1e-6)


def test_batch_matches_single_points():
    spec = make_domain("typeIV:3")
    z = sample_interior(spec, 5, 8, min_norm=0.1).points
    batch = metric_base(spec, 1.0, z)
    for i in range(5):
        np.testing.assert_allclose(batch[i], metric_base(spec, 1.0, z[i]), rtol=1e-12)
