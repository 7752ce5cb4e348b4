"""Tangency geometry of an inner convex domain against the geodesics of
an outer one.

For a base point z_o between the domains, the tangency locus is the set
of points w on the inner boundary where some geodesic of the outer
domain through z_o is complex-tangent to the inner boundary.  Tangent
discs are solved in the touch-centered parametrization: the unknowns
are the touch point w, the complex-tangent direction d and the real
parameter sigma with

    psi(0) = w on the inner boundary,
    < drho2(w), d > = 0          (complex tangency at tau = 0),
    psi(sigma) = z_o,            (the disc passes through the base point)

where psi is the stationary disc of the outer domain with center w and
direction d.  Centering at the touch point keeps the disc coefficients
spectrally small even when z_o is close to the outer boundary.  The
locus (a curve for n = 2) is traced by predictor-corrector continuation
along the kernel of the residual Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discs import (AnalyticDisc, SolverSettings, _herm, _solve_cd_raw,
                    _ball_automorphism)
from .domains import ConvexDomain, tangency_order_constant
from .errors import HypothesisViolation, PreconditionError, SolverDivergence

TANGENCY_TOL = 1e-9
POINT_ON_DISC_TOL = 1e-6


@dataclass
class TangencyPoint:
    """One touch point of the tangency locus with its tangent disc.

    The disc is parametrized with the touch at tau = 0 (so w = disc(0))
    and passes through the base point at the real parameter sigma.
    """

    w: np.ndarray
    disc: AnalyticDisc
    touch_parameter: float
    tangency_constant: float
    sigma: float
    base_point: np.ndarray
    residual: float

    def psi_coordinates(self) -> np.ndarray:
        """The image of w under the Riemann map based at the base point.

        Reparametrizing the disc by the involution (sigma - tau)/(1 - sigma tau)
        gives the two-point normalization with xi = sigma and tangent
        (sigma^2 - 1) psi'(sigma), whence Psi(w) = -sigma psi'(sigma)/|psi'(sigma)|.
        """
        dv = self.disc.derivative(np.array([self.sigma + 0.0j]))[0]
        return -self.sigma * dv / np.linalg.norm(dv)


@dataclass
class TangencyLocus:
    base_point: np.ndarray
    points: list
    closure_gap: float

    def touch_points(self) -> np.ndarray:
        return np.array([p.w for p in self.points])

    def diameter(self) -> float:
        w = self.touch_points()
        d = np.linalg.norm(w[:, None, :] - w[None, :, :], axis=-1)
        return float(np.max(d))


def _find_parameter(disc, target, init=None, tol=1e-12, max_iters=40):
    """Parameter tau in the closed disc with disc(tau) closest to target."""
    target = np.asarray(target, dtype=complex)
    if init is None:
        radii = np.linspace(0.0, 0.999, 12)
        angles = np.exp(2j * np.pi * np.arange(48) / 48)
        taus = np.concatenate([(r * angles) for r in radii])
        dists = np.linalg.norm(disc(taus) - target, axis=-1)
        tau = taus[int(np.argmin(dists))]
    else:
        tau = complex(init)
    for _ in range(max_iters):
        val = disc(np.array([tau]))[0]
        dv = disc.derivative(np.array([tau]))[0]
        err = target - val
        step = _herm(err, dv) / max(np.linalg.norm(dv) ** 2, 1e-30)
        tau_new = tau + step
        if abs(tau_new) > 1.0:
            tau_new /= abs(tau_new)
        if abs(tau_new - tau) < tol:
            tau = tau_new
            break
        tau = tau_new
    dist = float(np.linalg.norm(disc(np.array([tau]))[0] - target))
    return tau, dist


def tangency_residual(rho2: ConvexDomain, z_o, candidate_w, disc,
                      sigma_w=None) -> np.ndarray:
    """The three real tangency equations at a candidate touch point:
    (rho2(w), Re<drho2(w), d>, Im<drho2(w), d>) with d the unit tangent
    of the disc at w and <.,.> the bilinear pairing."""
    z_o = np.asarray(z_o, dtype=complex)
    w = np.asarray(candidate_w, dtype=complex)
    _, dist_z = _find_parameter(disc, z_o)
    if dist_z > POINT_ON_DISC_TOL:
        raise PreconditionError(
            f"disc does not pass through the base point (distance {dist_z:.3g})")
    tau_w, dist_w = _find_parameter(disc, w, init=sigma_w)
    if dist_w > POINT_ON_DISC_TOL:
        raise PreconditionError(
            f"disc does not pass through the candidate point (distance {dist_w:.3g})")
    d = disc.derivative(np.array([tau_w]))[0]
    d = d / np.linalg.norm(d)
    pair = np.sum(rho2.grad(w) * d)
    return np.array([float(rho2.rho(w)), pair.real, pair.imag])


class _TangencySystem:
    """Residual/Jacobian of the touch-centered tangency equations, with
    warm-started inner disc solves."""

    def __init__(self, domain1, domain2, z_o, settings):
        self.d1 = domain1
        self.d2 = domain2
        self.z_o = np.asarray(z_o, dtype=complex)
        self.n = domain1.dimension
        self.settings = settings
        self.warm = None
        self.size = 4 * self.n + 1
        self.n_eq = 2 * self.n + 4

    def pack(self, w, d, sigma):
        return np.concatenate([w.real, w.imag, d.real, d.imag, [sigma]])

    def unpack(self, u):
        n = self.n
        w = u[:n] + 1j * u[n:2 * n]
        d = u[2 * n:3 * n] + 1j * u[3 * n:4 * n]
        return w, d, u[4 * n]

    def solve_disc(self, w, d):
        dn = d / np.linalg.norm(d)
        if self.d1.kind == "ball":
            # geodesics of the ball are exact in closed form
            from .discs import ball_geodesic
            return ball_geodesic(self.d1, w, dn, self.settings)
        coeffs, gamma, diag = _solve_cd_raw(self.d1, w, dn, self.settings,
                                            warm=self.warm)
        self.warm = (coeffs, gamma)
        disc = AnalyticDisc(coeffs, self.settings.grid, self.d1,
                            attachment_residual=diag["attachment"])
        return disc

    def residual(self, u, disc=None):
        w, d, sigma = self.unpack(u)
        if disc is None:
            disc = self.solve_disc(w, d)
        dn = d / np.linalg.norm(d)
        pair = np.sum(self.d2.grad(w) * dn)
        val = disc(np.array([sigma + 0.0j]))[0] - self.z_o
        R = np.concatenate([
            [float(self.d2.rho(w)), pair.real, pair.imag],
            val.real, val.imag,
            [np.linalg.norm(d) ** 2 - 1.0],
        ])
        return R, disc

    def jacobian(self, u, R0, disc0, h=1e-6):
        J = np.empty((self.n_eq, self.size))
        # sigma column is analytic: only the through-point rows see it
        _, _, sigma = self.unpack(u)
        dv = disc0.derivative(np.array([sigma + 0.0j]))[0]
        col = np.zeros(self.n_eq)
        col[3:3 + self.n] = dv.real
        col[3 + self.n:3 + 2 * self.n] = dv.imag
        J[:, -1] = col
        for i in range(self.size - 1):
            up = u.copy()
            up[i] += h
            try:
                R, _ = self.residual(up)
                J[:, i] = (R - R0) / h
            except (SolverDivergence, PreconditionError):
                up[i] -= 2 * h
                R, _ = self.residual(up)
                J[:, i] = (R0 - R) / h
        return J

    def correct(self, u, tol=TANGENCY_TOL, max_iters=12):
        R, disc = self.residual(u)
        norm = np.linalg.norm(R)
        for _ in range(max_iters):
            if np.max(np.abs(R)) <= tol:
                return u, R, disc
            J = self.jacobian(u, R, disc)
            step = np.linalg.lstsq(J, -R, rcond=None)[0]
            t = 1.0
            while t >= 1.0 / 32:
                try:
                    R_new, disc_new = self.residual(u + t * step)
                except (SolverDivergence, PreconditionError):
                    # trial state left the admissible region (e.g. the
                    # touch point escaped the outer domain): shorten
                    t *= 0.5
                    continue
                if np.linalg.norm(R_new) <= (1.0 - 1e-4 * t) * norm + tol:
                    break
                t *= 0.5
            else:
                raise SolverDivergence("tangency corrector stalled",
                                       last_residual=float(norm))
            u = u + t * step
            R, disc, norm = R_new, disc_new, np.linalg.norm(R_new)
        if np.max(np.abs(R)) <= tol:
            return u, R, disc
        raise SolverDivergence("tangency corrector did not converge",
                               last_residual=float(norm))

    def make_point(self, u, R, disc) -> TangencyPoint:
        w, d, sigma = self.unpack(u)
        if sigma < 0:
            # flip the direction so the base point sits at positive sigma
            u = self.pack(w, -d, -sigma)
            self.warm = None
            u, R, disc = self.correct(u)
            w, d, sigma = self.unpack(u)
        const = tangency_order_constant(self.d2, disc)
        if const <= 0:
            raise HypothesisViolation(
                "tangency constant is not positive: the inner domain is not "
                "strongly convex with respect to this disc "
                f"(constant {const:.3g})")
        return TangencyPoint(w=w, disc=disc, touch_parameter=0.0,
                             tangency_constant=const, sigma=float(sigma),
                             base_point=self.z_o,
                             residual=float(np.max(np.abs(R))))


def _tangent_projection(grad, vector):
    """Component of ``vector`` in the complex tangent space
    {v : <grad, v> = 0} (bilinear pairing)."""
    g2 = np.sum(np.abs(grad) ** 2)
    return vector - np.conj(grad) * (np.sum(grad * vector) / g2)


def _initial_state(system, seed_w):
    d2 = system.d2
    z_o = system.z_o
    w0 = d2.boundary_point(np.asarray(seed_w, dtype=complex) - d2.center)
    chord = z_o - w0
    d0 = _tangent_projection(d2.grad(w0), chord)
    if np.linalg.norm(d0) < 1e-10:
        # chord is conormal; take any tangent vector
        g = np.conj(d2.grad(w0))
        basis = np.eye(system.n, dtype=complex)
        k = int(np.argmin(np.abs(g)))
        d0 = _tangent_projection(d2.grad(w0), basis[k])
    d0 = d0 / np.linalg.norm(d0)
    disc = system.solve_disc(w0, d0)
    sigma0, _ = _find_parameter(disc, z_o)
    # rotate d so the through-point parameter is real positive
    phase = np.exp(1j * np.angle(sigma0)) if sigma0 != 0 else 1.0
    return system.pack(w0, d0 * phase, abs(sigma0))


def solve_tangent_disc(domain1: ConvexDomain, domain2: ConvexDomain, z_o,
                       seed_w, settings: SolverSettings | None = None
                       ) -> TangencyPoint:
    """Newton iteration for a single tangency point near ``seed_w``.

    z_o must lie strictly between the domains.  A nonpositive tangency
    constant is reported as a hypothesis violation, distinct from a
    solver failure.
    """
    settings = settings or SolverSettings()
    z_o = np.asarray(z_o, dtype=complex)
    if float(domain2.rho(z_o)) <= 1e-8:
        raise PreconditionError("base point must lie outside the inner domain")
    if float(domain1.rho(z_o)) >= -1e-8:
        raise PreconditionError("base point must lie inside the outer domain")
    system = _TangencySystem(domain1, domain2, z_o, settings)
    u0 = _initial_state(system, seed_w)
    u, R, disc = system.correct(u0)
    return system.make_point(u, R, disc)


def _ranked_seeds(domain2, z_o, samples=256, top=8):
    """Candidate touch points: the radial projection of z_o first (the
    locus collapses onto it as z_o approaches the inner boundary), then
    boundary points ranked by how close the chord to z_o comes to
    complex tangency (the score vanishes on the locus for straight
    geodesics and stays small near it in general)."""
    n = domain2.dimension
    rng = np.random.default_rng(7)
    raw = rng.standard_normal((samples, 2 * n))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    dirs = raw[:, 0::2] + 1j * raw[:, 1::2]
    pts = np.array([domain2.boundary_point(d) for d in dirs])
    grads = domain2.grad(pts)
    chords = z_o[None, :] - pts
    scores = np.abs(np.sum(grads * chords, axis=1)) \
        / (np.linalg.norm(grads, axis=1) * np.linalg.norm(chords, axis=1))
    order = np.argsort(scores)
    radial = domain2.boundary_point(z_o - domain2.center)
    return np.concatenate([radial[None, :], pts[order[:top]]])


def trace_locus(domain1: ConvexDomain, domain2: ConvexDomain, z_o, steps: int,
                settings: SolverSettings | None = None, seed_w=None
                ) -> TangencyLocus:
    """Sample the tangency locus through z_o.

    For n = 2 the locus is a closed curve traced by predictor-corrector
    continuation along the kernel of the residual Jacobian; for n >= 3
    a local patch of ``steps`` corrected samples around a seed point is
    returned (no atlas).
    """
    settings = settings or SolverSettings()
    z_o = np.asarray(z_o, dtype=complex)
    if seed_w is not None:
        first = solve_tangent_disc(domain1, domain2, z_o, seed_w, settings)
    else:
        first = None
        error = None
        for candidate in _ranked_seeds(domain2, z_o):
            try:
                first = solve_tangent_disc(domain1, domain2, z_o, candidate,
                                           settings)
                break
            except (SolverDivergence, PreconditionError) as exc:
                error = exc
        if first is None:
            raise SolverDivergence(
                f"no tangency seed converged ({error})")
    system = _TangencySystem(domain1, domain2, z_o, settings)
    system.warm = (first.disc.coeffs, None)
    n = domain1.dimension
    u = system.pack(first.w, first.disc.base_direction
                    / np.linalg.norm(first.disc.base_direction), first.sigma)
    u, R, disc = system.correct(u)
    first = system.make_point(u, R, disc)

    domain_scale = float(np.linalg.norm(first.w - domain2.center))

    if n >= 3:
        return _sample_patch(system, u, R, disc, steps,
                             2.0 * np.pi * domain_scale / steps)

    def kernel_tangent(u, R, disc, t_prev):
        J = system.jacobian(u, R, disc)
        _, _, vt = np.linalg.svd(J)
        t = vt[-1]
        if t_prev is not None and np.dot(t, t_prev) < 0:
            t = -t
        return t / max(np.linalg.norm(t[:2 * n]), 1e-12)

    # probe two small steps to estimate the locus through-circle, so the
    # step size tracks the locus size (which shrinks as z_o approaches
    # the inner boundary) rather than the domain size
    probe = 0.02 * domain_scale
    states = [(u, R, disc)]
    t_prev = None
    for _ in range(2):
        u_c, R_c, disc_c = states[-1]
        t_prev = kernel_tangent(u_c, R_c, disc_c, t_prev)
        states.append(system.correct(u_c + probe * t_prev))
    w3 = [system.unpack(s[0])[0] for s in states]
    radius = _circumradius(w3[0], w3[1], w3[2])
    radius = min(max(radius, probe), 10.0 * domain_scale)
    h = min(2.0 * np.pi * radius / steps, 0.5 * radius)

    points = [first]
    u, R, disc = states[0]
    t_prev = None
    w_start = first.w
    h_min, h_max = h / 16.0, 1.25 * h
    arc = 0.0
    for _ in range(4 * steps):
        t_prev = kernel_tangent(u, R, disc, t_prev)
        try:
            u_new, R_new, disc_new = system.correct(u + h * t_prev)
        except SolverDivergence:
            h *= 0.5
            if h < h_min:
                raise SolverDivergence(
                    "step-size collapse while tracing the tangency locus")
            continue
        point = system.make_point(u_new, R_new, disc_new)
        arc += float(np.linalg.norm(point.w - points[-1].w))
        points.append(point)
        u, R, disc = u_new, R_new, disc_new
        h = min(1.15 * h, h_max)
        gap = float(np.linalg.norm(point.w - w_start))
        if len(points) >= 5 and arc > 4.0 * radius and gap < h:
            return TangencyLocus(z_o, points, gap)
    raise SolverDivergence("tangency locus did not close while tracing")


def _circumradius(p0, p1, p2) -> float:
    """Radius of the circle through three points of C^n (in their plane)."""
    a = float(np.linalg.norm(p1 - p0))
    b = float(np.linalg.norm(p2 - p1))
    c = float(np.linalg.norm(p2 - p0))
    s = 0.5 * (a + b + c)
    area_sq = max(s * (s - a) * (s - b) * (s - c), 0.0)
    if area_sq <= 0.0:
        return float("inf")
    return a * b * c / (4.0 * np.sqrt(area_sq))


def _sample_patch(system, u, R, disc, steps, h):
    """Local patch of the (2n-3)-dimensional locus around a seed point."""
    rng = np.random.default_rng(11)
    points = [system.make_point(u, R, disc)]
    J = system.jacobian(u, R, disc)
    _, sv, vt = np.linalg.svd(J)
    rank = int(np.sum(sv > 1e-8 * sv[0]))
    kernel = vt[rank:]
    for _ in range(steps):
        combo = rng.standard_normal(kernel.shape[0])
        t = combo @ kernel
        t /= max(np.linalg.norm(t[:2 * system.n]), 1e-12)
        try:
            u_new, R_new, disc_new = system.correct(u + h * t)
            points.append(system.make_point(u_new, R_new, disc_new))
        except SolverDivergence:
            continue
        system.warm = (disc.coeffs, None)
    return TangencyLocus(system.z_o, points, float("nan"))


# ---------------------------------------------------------------------------
# the Jacobian certificate in Riemann-map coordinates


def jacobian_certificate(rho2_in_psi_coords: ConvexDomain, point) -> float:
    """Signed determinant of the 3x3 minor of the tangency-system
    Jacobian in normalized coordinates.

    With coordinates rotated so the gradient is (1, 0, ...) and the
    point is (0, c, 0, ...), the minor reduces to
    c^2 (|rho_{z2 z2}|^2 - rho_{z2 zbar2}^2); a negative value certifies
    that the locus is regular at the point (the restricted real Hessian
    is positive definite).
    """
    z = np.asarray(point, dtype=complex)
    grad = rho2_in_psi_coords.grad(z)
    gnorm = float(np.linalg.norm(grad))
    if gnorm < 1e-12:
        raise PreconditionError("normalization failure: vanishing gradient")
    c = float(np.linalg.norm(z))
    if c < 1e-12:
        raise PreconditionError("certificate point must be away from the origin")
    u1 = np.conj(grad) / gnorm
    u2 = z / c
    u2 = u2 - _herm(u2, u1) * u1
    u2 = u2 / np.linalg.norm(u2)
    n = len(z)
    cols = [u1, u2]
    basis = np.eye(n, dtype=complex)
    for k in range(n):
        w = basis[:, k]
        for col in cols:
            w = w - _herm(w, col) * col
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            cols.append(w / norm)
        if len(cols) == n:
            break
    S = np.column_stack(cols)              # z = S eta
    A, C = rho2_in_psi_coords.hess_complex(z)
    Ap = S.T @ A @ S
    Cp = S.T @ C @ np.conj(S)
    a22 = Ap[1, 1]
    c22 = Cp[1, 1].real
    return float(c ** 2 * (abs(a22) ** 2 - c22 ** 2) / gnorm ** 2)


def _ball_psi_inverse_fn(domain1, z_o):
    """Closed-form inverse Riemann map of a ball (exact, no solves)."""
    c = domain1.center
    R = domain1.meta["radius"]
    zp = (np.asarray(z_o, dtype=complex) - c) / R
    s2 = 1.0 - float(np.linalg.norm(zp) ** 2)
    s = np.sqrt(s2)
    nz = float(np.linalg.norm(zp))

    def inverse(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        xi = np.linalg.norm(zeta)
        t = zeta / xi
        if nz == 0.0:
            u = -t
        else:
            pt = (_herm(t, zp) / _herm(zp, zp)) * zp
            u_raw = pt / s2 + (t - pt) / s
            u = -u_raw / np.linalg.norm(u_raw)
        wp = _ball_automorphism(zp, xi * u)
        return c + R * wp

    return inverse


def push_domain_through_psi(domain1: ConvexDomain, domain2: ConvexDomain,
                            z_o, settings: SolverSettings | None = None,
                            fd_step: float | None = None) -> ConvexDomain:
    """The inner domain transported by the Riemann map based at z_o:
    rho_tilde = rho2 o Psi^{-1}.

    For a ball outer domain the inverse map is closed-form; otherwise
    every evaluation costs one disc solve.  First and second derivatives
    are finite differences of rho_tilde, adequate for the sign
    certificate."""
    z_o = np.asarray(z_o, dtype=complex)
    n = domain1.dimension
    if domain1.kind == "ball":
        inverse = _ball_psi_inverse_fn(domain1, z_o)
        h = fd_step or 1e-5
    else:
        from .lempert import psi_inverse
        settings = settings or SolverSettings()

        def inverse(zeta):
            return psi_inverse(domain1, z_o, zeta, settings)

        h = fd_step or 1e-3

    def rho_one(zeta):
        return float(domain2.rho(inverse(zeta)))

    def rho(z):
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            return rho_one(z)
        flat = z.reshape(-1, n)
        return np.array([rho_one(p) for p in flat]).reshape(z.shape[:-1])

    def _real_partials(zeta):
        vals = np.empty((2 * n, 2))
        for j in range(2 * n):
            e = np.zeros(n, dtype=complex)
            e[j // 2] = h if j % 2 == 0 else 1j * h
            vals[j, 0] = rho_one(zeta + e)
            vals[j, 1] = rho_one(zeta - e)
        return vals

    def grad_one(zeta):
        vals = _real_partials(zeta)
        partials = (vals[:, 0] - vals[:, 1]) / (2.0 * h)
        return 0.5 * (partials[0::2] - 1j * partials[1::2])

    def grad(z):
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            return grad_one(z)
        flat = z.reshape(-1, n)
        return np.array([grad_one(p) for p in flat]).reshape(z.shape)

    def hess_one(zeta):
        f0 = rho_one(zeta)

        def offset(i):
            e = np.zeros(n, dtype=complex)
            e[i // 2] = h if i % 2 == 0 else 1j * h
            return e

        H = np.empty((2 * n, 2 * n))
        for i in range(2 * n):
            ei = offset(i)
            H[i, i] = (rho_one(zeta + ei) - 2.0 * f0 + rho_one(zeta - ei)) / h ** 2
            for j in range(i + 1, 2 * n):
                ej = offset(j)
                H[i, j] = H[j, i] = (
                    rho_one(zeta + ei + ej) - rho_one(zeta + ei - ej)
                    - rho_one(zeta - ei + ej) + rho_one(zeta - ei - ej)
                ) / (4.0 * h ** 2)
        Hxx = H[0::2, 0::2]
        Hyy = H[1::2, 1::2]
        Hxy = H[0::2, 1::2]
        Hyx = H[1::2, 0::2]
        A = (Hxx - Hyy) / 4.0 - 1j * (Hxy + Hyx) / 4.0
        C = (Hxx + Hyy) / 4.0 + 1j * (Hxy - Hyx) / 4.0
        return A, C

    def hess(z):
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            return hess_one(z)
        flat = z.reshape(-1, n)
        pairs = [hess_one(p) for p in flat]
        A = np.array([p[0] for p in pairs]).reshape(z.shape[:-1] + (n, n))
        C = np.array([p[1] for p in pairs]).reshape(z.shape[:-1] + (n, n))
        return A, C

    return ConvexDomain(n, "psi_pushforward", rho, grad, hess,
                        meta={"center": np.zeros(n, dtype=complex)})


def pi_set_sample(domain1: ConvexDomain, domain2: ConvexDomain, z_o,
                  count: int, settings: SolverSettings | None = None,
                  seed: int = 0) -> np.ndarray:
    """Projectivized lift residues [phi*(0)] of tangent discs based at a
    point z_o on the inner boundary.

    For each of ``count`` complex-tangent directions the geodesic of the
    outer domain through z_o is solved and its lift projectivized at the
    pole.  For n = 2 all samples coincide (a single point of the
    projective line)."""
    from .lifts import lift_from_disc, projectivize

    settings = settings or SolverSettings()
    z_o = np.asarray(z_o, dtype=complex)
    if abs(float(domain2.rho(z_o))) > 1e-8:
        raise PreconditionError("base point must lie on the inner boundary")
    if float(domain1.rho(z_o)) >= -1e-8:
        raise PreconditionError("base point must be interior to the outer domain")
    n = domain1.dimension
    grad2 = domain2.grad(z_o)
    normal = np.conj(grad2) / np.linalg.norm(grad2)
    cols = [normal]
    basis = np.eye(n, dtype=complex)
    for k in range(n):
        w = basis[:, k]
        for col in cols:
            w = w - _herm(w, col) * col
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            cols.append(w / norm)
        if len(cols) == n:
            break
    tangent = np.column_stack(cols[1:])     # (n, n-1)
    rng = np.random.default_rng(seed)
    out = np.empty((count, n), dtype=complex)
    for k in range(count):
        if n == 2:
            v = np.exp(2j * np.pi * k / count) * tangent[:, 0]
        else:
            combo = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
            v = tangent @ combo
            v = v / np.linalg.norm(v)
        coeffs, _, diag = _solve_cd_raw(domain1, z_o, v, settings)
        disc = AnalyticDisc(coeffs, settings.grid, domain1,
                            attachment_residual=diag["attachment"])
        lift = lift_from_disc(domain1, disc)
        out[k] = projectivize(lift, 0.0)
    return out
