import numpy as np
import pytest

from geodisc import (make_ball, make_ellipsoid, make_perturbed_ball, certify,
                     unit_outward_conormal, tangency_order_constant,
                     ball_geodesic, SolverSettings, AnalyticDisc, CircleGrid,
                     PreconditionError)


def test_ball_examples():
    b = make_ball([0, 0], 1.0)
    assert abs(b.rho(np.array([1.0, 0.0]))) < 1e-14
    assert np.allclose(b.grad(np.array([1.0, 0.0])), [1.0, 0.0])
    assert abs(b.rho(np.zeros(2)) + 1.0) < 1e-14
    b2 = make_ball([0, 0], np.sqrt(1.0 / 3.0))
    assert abs(b2.rho(np.array([0.0, np.sqrt(1.0 / 3.0)]))) < 1e-14


def test_ellipsoid_examples():
    e = make_ellipsoid([1.0, 1.0])
    b = make_ball([0, 0], 1.0)
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    assert np.max(np.abs(e.rho(pts) - b.rho(pts))) < 1e-12
    e21 = make_ellipsoid([2.0, 1.0])
    assert abs(e21.rho(np.array([2.0, 0.0]))) < 1e-14
    assert abs(e21.rho(np.array([1.0, 1.0])) - 0.25) < 1e-14


def test_perturbed_ball():
    assert make_perturbed_ball(0.0).kind == "perturbed_ball"
    pb = make_perturbed_ball(0.05, "re_z1_sq")
    cert = pb.cached_certificate()
    assert cert.passes
    assert cert.min_hessian_eigenvalue >= 2.0 - 0.2
    with pytest.raises(PreconditionError):
        make_perturbed_ball(2.0, "re_z1_sq")


def test_certify_ball_exact():
    b = make_ball([0, 0], 0.75)
    cert = certify(b, 128)
    assert abs(cert.min_hessian_eigenvalue - 2.0) < 1e-12
    assert abs(cert.min_gradient_norm - 2.0 * 0.75) < 1e-9
    assert cert.sample_count == 128


def test_certify_ellipsoid():
    cert = certify(make_ellipsoid([2.0, 1.0]), 128)
    assert abs(cert.min_hessian_eigenvalue - 0.5) < 1e-12


def test_certify_failing_is_data():
    # bounded but non-convex: rho = |z|^4 - 3|z1|^2 - 1 has a negative
    # Hessian eigenvalue at boundary points near the z2-axis
    from geodisc.domains import ConvexDomain

    def rho(z):
        r2 = np.sum(np.abs(z) ** 2, axis=-1)
        return r2 ** 2 - 3.0 * np.abs(z[..., 0]) ** 2 - 1.0

    def grad(z):
        r2 = np.sum(np.abs(z) ** 2, axis=-1)
        g = 2.0 * r2[..., None] * np.conj(z)
        g[..., 0] -= 3.0 * np.conj(z[..., 0])
        return g

    def hess(z):
        n = z.shape[-1]
        r2 = np.sum(np.abs(z) ** 2, axis=-1)
        zc = np.conj(z)
        A = 2.0 * zc[..., :, None] * zc[..., None, :]
        C = 2.0 * (zc[..., :, None] * z[..., None, :]
                   + r2[..., None, None] * np.eye(n))
        C[..., 0, 0] -= 3.0
        return A, C

    bad = ConvexDomain(2, "custom", rho, grad, hess)
    cert = certify(bad, 200)
    assert cert.min_hessian_eigenvalue < 0
    assert not cert.passes


def test_finite_difference_consistency():
    h = 1e-5
    rng = np.random.default_rng(1)
    for domain in (make_ball([0.1, -0.2j], 1.3), make_ellipsoid([2.0, 1.0]),
                   make_perturbed_ball(0.05, "re_z1z2")):
        n = domain.dimension
        pts = 0.3 * (rng.standard_normal((50, n))
                     + 1j * rng.standard_normal((50, n)))
        for z in pts:
            g = domain.grad(z)
            H = domain.hess_real(z)
            for j in range(n):
                ex = np.zeros(n, dtype=complex)
                ex[j] = h
                fd_x = (domain.rho(z + ex) - domain.rho(z - ex)) / (2 * h)
                fd_y = (domain.rho(z + 1j * ex) - domain.rho(z - 1j * ex)) / (2 * h)
                assert abs(fd_x - 2 * g[j].real) < 1e-6
                assert abs(fd_y + 2 * g[j].imag) < 1e-6
            # Hessian along a random real direction
            direction = rng.standard_normal(2 * n)
            dz = direction[0::2] + 1j * direction[1::2]
            second = (domain.rho(z + h * dz) - 2 * domain.rho(z)
                      + domain.rho(z - h * dz)) / h ** 2
            assert abs(second - direction @ H @ direction) < 1e-5


def test_unit_outward_conormal():
    b = make_ball([0, 0], 1.0)
    assert np.allclose(unit_outward_conormal(b, np.array([1.0, 0.0])),
                       [1.0, 0.0])
    assert np.allclose(unit_outward_conormal(b, np.array([0.0, 1.0j])),
                       [0.0, -1.0j])
    e = make_ellipsoid([2.0, 1.0])
    assert np.allclose(unit_outward_conormal(e, np.array([2.0, 0.0])),
                       [1.0, 0.0])
    with pytest.raises(PreconditionError):
        unit_outward_conormal(b, np.array([0.5, 0.0]))


def test_tangency_order_constant_vertical_line():
    # phi(tau) = (r, tau): rho2(phi)/|tau|^2 is exactly 1 for the ball of
    # radius r (unit-scale direction, not attached)
    r = 0.5
    inner = make_ball([0, 0], r)
    disc = AnalyticDisc(np.array([[r, 0.0], [0.0, 1.0]], dtype=complex),
                        CircleGrid(64))
    const = tangency_order_constant(inner, disc)
    assert abs(const - 1.0) < 1e-10


def test_tangency_order_constant_signs():
    inner = make_ball([0, 0], 0.5)
    ball = make_ball([0, 0], 1.0)
    st = SolverSettings()
    through = ball_geodesic(ball, np.zeros(2), np.array([1.0, 0.0]), st)
    assert tangency_order_constant(inner, through) < 0
    offset = AnalyticDisc(np.array([[0.8, 0.0], [0.0, 0.1]], dtype=complex),
                          CircleGrid(64))
    assert tangency_order_constant(inner, offset) > 0


def test_tangency_order_constant_rotation_invariance():
    r = 0.45
    inner = make_ball([0, 0], r)
    s = np.sqrt(1 - r ** 2)
    base = np.array([[r, 0.0], [0.0, s]], dtype=complex)
    c0 = tangency_order_constant(inner, AnalyticDisc(base, CircleGrid(64)))
    for alpha in (0.3, 1.1, 2.7):
        rot = base.copy()
        rot[1] *= np.exp(1j * alpha)
        c1 = tangency_order_constant(inner, AnalyticDisc(rot, CircleGrid(64)))
        assert abs(c1 - c0) < 1e-10


def test_hess_real_matches_complex_blocks():
    pb = make_perturbed_ball(0.05, "re_z1_sq")
    z = np.array([0.2 + 0.1j, -0.3 + 0.05j])
    H = pb.hess_real(z)
    assert np.max(np.abs(H - H.T)) < 1e-14
    # for rho = |z|^2 - 1 + eps Re z1^2: d2/dx1^2 = 2 + 2 eps, d2/dy1^2 = 2 - 2 eps
    assert abs(H[0, 0] - (2 + 0.1)) < 1e-12
    assert abs(H[1, 1] - (2 - 0.1)) < 1e-12
    assert abs(H[2, 2] - 2.0) < 1e-12


def test_certify_requires_min_samples():
    with pytest.raises(PreconditionError):
        certify(make_ball([0, 0], 1.0), 50)


def test_hess_alias():
    b = make_ball([0, 0], 1.0)
    z = np.array([0.2, 0.1j])
    assert np.max(np.abs(b.hess(z) - b.hess_real(z))) < 1e-15
