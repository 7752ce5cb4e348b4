"""Stationary (extremal) discs attached to the boundary of a strongly
convex domain.

A disc is the truncated power series phi(tau) = sum_{k=0}^M a_k tau^k
with a_k in C^n, attached when phi(e^{i theta}) lies on the boundary.
Stationarity is encoded spectrally: there is a real boundary factor g
such that tau * g(tau) * drho(phi(tau)) extends holomorphically through
the disc.

The solver treats the Fourier coefficients of phi (degrees 2..M), the
scale r > 0 of phi'(0) = r*v, and a real trigonometric polynomial g as
unknowns, and drives the following residuals to zero by a damped
Gauss-Newton iteration with a least-squares step:

  (i)   Fourier modes 0..L of rho(phi(e^{i theta}))        (attachment),
  (ii)  Fourier modes -1..-L of g * e^{i theta} * drho(phi) (lift
        holomorphy), componentwise,
  (iii) g(1) - 1                                            (gauge).

phi(0) = z and phi'(0) = r*v are enforced exactly through the
parametrization.  Residuals are collocated on a grid oversampled 2x
against the coefficient truncation to keep products alias-free.  For
non-ball domains the solve is reached by continuation from an inscribed
ball, for which the disc is known in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import CircleGrid, analyze
from .domains import ConvexDomain, make_ball
from .errors import PreconditionError, SolverDivergence

INTERIOR_MARGIN = 1e-8


@dataclass
class MoebiusMap:
    """tau -> rotation * (tau + a) / (1 + conj(a) tau), an automorphism
    of the unit disc."""

    a: complex = 0.0
    rotation: complex = 1.0

    def __post_init__(self):
        self.a = complex(self.a)
        self.rotation = complex(self.rotation)
        if abs(self.a) >= 1.0:
            raise PreconditionError("Moebius parameter needs |a| < 1")
        if abs(abs(self.rotation) - 1.0) > 1e-12:
            raise PreconditionError("rotation must be unimodular")

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=complex)
        return self.rotation * (tau + self.a) / (1.0 + np.conj(self.a) * tau)

    def inverse(self) -> "MoebiusMap":
        # m^{-1}(w) = (w/rot - a) / (1 - conj(a) w/rot)
        #           = conj(rot) * (w - rot*a) / (1 - conj(a*rot) ... )
        # realized as another MoebiusMap with parameters below
        return MoebiusMap(a=-self.a * self.rotation,
                          rotation=np.conj(self.rotation))


@dataclass
class AnalyticDisc:
    """Truncated power series of a holomorphic map of the closed unit
    disc into C^n, attached to the boundary of ``domain``."""

    coeffs: np.ndarray            # (M+1, n) complex
    grid: CircleGrid
    domain: ConvexDomain | None = None
    attachment_residual: float | None = None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 2:
            raise PreconditionError("disc coefficients must have shape (M+1, n)")

    @property
    def modes(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dimension(self) -> int:
        return self.coeffs.shape[1]

    @property
    def base_point(self) -> np.ndarray:
        return self.coeffs[0]

    @property
    def base_direction(self) -> np.ndarray:
        return self.coeffs[1]

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=complex)
        vals = np.polynomial.polynomial.polyval(tau, self.coeffs)
        return np.moveaxis(vals, 0, -1)

    def derivative(self, tau):
        tau = np.asarray(tau, dtype=complex)
        k = np.arange(1, self.modes + 1)
        dc = self.coeffs[1:] * k[:, None]
        vals = np.polynomial.polynomial.polyval(tau, dc)
        return np.moveaxis(vals, 0, -1)

    def boundary_values(self, grid: CircleGrid | None = None) -> np.ndarray:
        grid = grid or self.grid
        return self(grid.nodes)

    def boundary_residual(self, domain: ConvexDomain | None = None) -> float:
        domain = domain or self.domain
        if domain is None:
            raise PreconditionError("disc has no attached domain")
        return float(np.max(np.abs(domain.rho(self.boundary_values()))))

    def injectivity_gap(self) -> float:
        """min over distinct grid nodes of |phi(tau_j) - phi(tau_l)|."""
        b = self.boundary_values()
        d = np.linalg.norm(b[:, None, :] - b[None, :, :], axis=-1)
        d[np.diag_indices_from(d)] = np.inf
        return float(np.min(d))

    def to_json(self) -> dict:
        return {
            "coeffs": [[[float(z.real), float(z.imag)] for z in row]
                       for row in self.coeffs],
            "grid": self.grid.size,
            "base_point": [[float(z.real), float(z.imag)] for z in self.base_point],
            "residual": self.attachment_residual,
        }

    @classmethod
    def from_json(cls, data: dict, domain: ConvexDomain | None = None):
        coeffs = np.array([[complex(re, im) for re, im in row]
                           for row in data["coeffs"]])
        return cls(coeffs, CircleGrid(int(data["grid"])), domain,
                   attachment_residual=data.get("residual"))


@dataclass
class SolverSettings:
    modes: int = 64
    grid: CircleGrid = field(default_factory=lambda: CircleGrid(256))
    newton_tol: float = 1e-10
    max_iters: int = 40
    continuation_steps: int = 10

    def __post_init__(self):
        if self.newton_tol < 1e-12:
            raise PreconditionError("newton_tol must be >= 1e-12")
        if self.modes > self.grid.size // 4:
            raise PreconditionError(
                "modes must be <= grid.size/4 for dealiasing headroom")

    def scaled(self, *, grid_size=None, modes=None) -> "SolverSettings":
        return SolverSettings(
            modes=modes if modes is not None else self.modes,
            grid=CircleGrid(grid_size) if grid_size is not None else self.grid,
            newton_tol=self.newton_tol, max_iters=self.max_iters,
            continuation_steps=self.continuation_steps)


# ---------------------------------------------------------------------------
# closed-form geodesics of the ball


def _herm(a, b):
    """Hermitian pairing sum a_j conj(b_j)."""
    return np.sum(a * np.conj(b))


def ball_geodesic(domain: ConvexDomain, center_z, direction_v,
                  settings: SolverSettings | None = None) -> AnalyticDisc:
    """The extremal disc of a ball through ``center_z`` with
    phi'(0) a positive multiple of ``direction_v``, in closed form.

    The image is the affine complex line through the point cut by the
    ball, parametrized by composing a straight disc through the center
    with the standard ball automorphism; the power-series coefficients
    are geometric, a_k = mu^{k-1} a_1.
    """
    if domain.kind != "ball":
        raise PreconditionError("ball_geodesic needs a ball domain")
    settings = settings or SolverSettings()
    c = domain.center
    R = domain.meta["radius"]
    z = (np.asarray(center_z, dtype=complex) - c) / R
    v = np.asarray(direction_v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise PreconditionError("direction must be nonzero")
    v = v / nv
    if np.linalg.norm(z) >= 1.0:
        raise PreconditionError("center point is not inside the ball")
    s = np.sqrt(1.0 - np.linalg.norm(z) ** 2)
    if np.linalg.norm(z) == 0.0:
        proj = np.zeros_like(v)
    else:
        proj = (_herm(v, z) / _herm(z, z)) * z
    u_raw = proj / s ** 2 + (v - proj) / s
    u = -u_raw / np.linalg.norm(u_raw)
    mu = _herm(u, z)
    pu = (_herm(u, z) / _herm(z, z)) * z if np.linalg.norm(z) > 0 else np.zeros_like(u)
    q = pu + s * (u - pu)
    M = settings.modes
    a = np.zeros((M + 1, len(z)), dtype=complex)
    a[0] = z
    a1 = mu * z - q
    powers = mu ** np.arange(M)
    a[1:] = powers[:, None] * a1[None, :]
    a = a * R
    a[0] += c
    disc = AnalyticDisc(a, settings.grid, domain)
    disc.attachment_residual = disc.boundary_residual()
    return disc


def _ball_two_point_data(domain: ConvexDomain, z, w):
    """(direction v, xi) of the ball geodesic through z and w."""
    c = domain.center
    R = domain.meta["radius"]
    zp = (np.asarray(z, dtype=complex) - c) / R
    wp = (np.asarray(w, dtype=complex) - c) / R
    if max(np.linalg.norm(zp), np.linalg.norm(wp)) >= 1.0:
        raise PreconditionError("points are not inside the ball")
    m = _ball_automorphism(zp, wp)
    xi = np.linalg.norm(m)
    u = m / xi
    s2 = 1.0 - np.linalg.norm(zp) ** 2
    s = np.sqrt(s2)
    if np.linalg.norm(zp) == 0.0:
        d = -u
    else:
        pu = (_herm(u, zp) / _herm(zp, zp)) * zp
        d = -(s2 * pu + s * (u - pu))
    return d / np.linalg.norm(d), float(xi)


def _ball_automorphism(a, w):
    """The involutive automorphism of the unit ball exchanging 0 and a,
    evaluated at w."""
    na2 = np.linalg.norm(a) ** 2
    if na2 == 0.0:
        return -w
    s = np.sqrt(1.0 - na2)
    pw = (_herm(w, a) / na2) * a
    return (a - pw - s * (w - pw)) / (1.0 - _herm(w, a))


# ---------------------------------------------------------------------------
# the spectral Gauss-Newton system


class _CenterDirectionSystem:
    """Residual and Jacobian of the stationary-disc equations for fixed
    (domain, z, v) on an oversampled collocation grid."""

    def __init__(self, domain, z, v, settings):
        self.domain = domain
        self.z = np.asarray(z, dtype=complex)
        self.v = np.asarray(v, dtype=complex)
        self.n = len(self.z)
        self.M = settings.modes
        self.K = settings.modes
        N = settings.grid.size
        self.L = N // 2
        self.nn = 2 * N                          # residual grid
        theta = 2.0 * np.pi * np.arange(self.nn) / self.nn
        self.tau = np.exp(1j * theta)
        self.V = self.tau[:, None] ** np.arange(self.M + 1)[None, :]
        m = np.arange(1, self.K + 1)
        self.cos_mat = np.cos(np.outer(theta, m))
        self.sin_mat = np.sin(np.outer(theta, m))
        self.n_a = 2 * self.n * (self.M - 1)
        self.n_g = 1 + 2 * self.K
        self.size = 1 + self.n_a + self.n_g

    # -- packing ------------------------------------------------------

    def pack(self, r, a_tail, gamma):
        u = np.empty(self.size)
        u[0] = r
        u[1:1 + self.n_a:2] = a_tail.real.ravel()
        u[2:1 + self.n_a:2] = a_tail.imag.ravel()
        u[1 + self.n_a:] = gamma
        return u

    def unpack(self, u):
        r = u[0]
        re = u[1:1 + self.n_a:2].reshape(self.M - 1, self.n)
        im = u[2:1 + self.n_a:2].reshape(self.M - 1, self.n)
        gamma = u[1 + self.n_a:]
        return r, re + 1j * im, gamma

    def disc_coeffs(self, u):
        r, a_tail, _ = self.unpack(u)
        a = np.zeros((self.M + 1, self.n), dtype=complex)
        a[0] = self.z
        a[1] = r * self.v
        a[2:] = a_tail
        return a

    def initial_state(self, coeffs, gamma=None):
        """Pack a starting point from disc coefficients of any length."""
        a = np.zeros((self.M + 1, self.n), dtype=complex)
        k = min(len(coeffs), self.M + 1)
        a[:k] = coeffs[:k]
        r = float(np.real(_herm(a[1], self.v)))
        r = max(r, 1e-6)
        if gamma is None:
            gamma = np.zeros(self.n_g)
            gamma[0] = 1.0
        return self.pack(r, a[2:], gamma)

    # -- evaluation ----------------------------------------------------

    def _fields(self, u):
        a = self.disc_coeffs(u)
        phi = self.V @ a
        gamma = u[1 + self.n_a:]
        g = gamma[0] + self.cos_mat @ gamma[1::2] + self.sin_mat @ gamma[2::2]
        return a, phi, g

    def residual(self, u):
        _, phi, g = self._fields(u)
        rho_vals = np.real(self.domain.rho(phi))
        grads = self.domain.grad(phi)
        w = (g * self.tau)[:, None] * grads
        rho_hat = np.fft.fft(rho_vals) / self.nn
        w_hat = np.fft.fft(w, axis=0) / self.nn
        L = self.L
        neg = w_hat[self.nn - 1:self.nn - 1 - L:-1, :]     # k = -1 .. -L
        F = np.concatenate([
            [rho_hat[0].real],
            _interleave(rho_hat[1:L + 1]),
            _interleave(neg.T.reshape(-1)),
            [g[0] - 1.0],
        ])
        diag = {
            "attachment": float(np.max(np.abs(rho_vals))),
            "neg_modes": float(np.max(np.abs(neg))) if neg.size else 0.0,
            "gauge": abs(g[0] - 1.0),
            "min_g": float(np.min(g)),
        }
        return F, diag

    def jacobian(self, u):
        _, phi, g = self._fields(u)
        grads = self.domain.grad(phi)
        A, C = self.domain.hess_complex(phi)
        nn, n, M, K, L = self.nn, self.n, self.M, self.K, self.L
        gt = g * self.tau

        # r-column: delta phi = v * tau
        dphi_r = self.tau[:, None] * self.v[None, :]
        drho_r = 2.0 * np.real(np.sum(grads * dphi_r, axis=1))
        dgrad_r = np.einsum("jab,jb->ja", A, dphi_r) \
            + np.einsum("jab,jb->ja", C, np.conj(dphi_r))
        dw_r = gt[:, None] * dgrad_r

        # a-block: unknown order (k, c, re/im), k = 2..M
        Vk = self.V[:, 2:]                                  # (nn, M-1)
        GT = grads[:, None, :] * Vk[:, :, None]             # (nn, M-1, n)
        drho_a = np.empty((nn, M - 1, n, 2))
        drho_a[..., 0] = 2.0 * GT.real
        drho_a[..., 1] = -2.0 * GT.imag
        SA = A[:, :, None, :] * Vk[:, None, :, None]        # (nn, n, M-1, n)
        SC = C[:, :, None, :] * np.conj(Vk)[:, None, :, None]
        dw_a = np.empty((nn, n, M - 1, n, 2), dtype=complex)
        dw_a[..., 0] = SA + SC
        dw_a[..., 1] = 1j * SA - 1j * SC
        dw_a *= gt[:, None, None, None, None]

        # g-block: columns [gamma0, (cos_m, sin_m)...]
        Bg = np.empty((nn, self.n_g))
        Bg[:, 0] = 1.0
        Bg[:, 1::2] = self.cos_mat
        Bg[:, 2::2] = self.sin_mat
        dw_g = Bg[:, None, :] * (self.tau[:, None] * grads)[:, :, None]

        Drho = np.concatenate(
            [drho_r[:, None], drho_a.reshape(nn, -1), np.zeros((nn, self.n_g))],
            axis=1)
        Dw = np.concatenate(
            [dw_r[:, :, None], dw_a.reshape(nn, n, -1), dw_g], axis=2)

        Drho_hat = np.fft.fft(Drho, axis=0) / nn
        Dw_hat = np.fft.fft(Dw.reshape(nn, -1), axis=0).reshape(nn, n, -1) / nn

        rows = [Drho_hat[0].real[None, :],
                _interleave_rows(Drho_hat[1:L + 1])]
        for c in range(n):
            neg = Dw_hat[nn - 1:nn - 1 - L:-1, c, :]
            rows.append(_interleave_rows(neg))
        gauge = np.zeros((1, self.size))
        gauge[0, 1 + self.n_a] = 1.0
        gauge[0, 2 + self.n_a::2] = 1.0      # cos coefficients at theta = 0
        rows.append(gauge)
        return np.vstack(rows)

    # -- the iteration --------------------------------------------------

    @staticmethod
    def _converged(diag, tol):
        return max(diag["attachment"], diag["neg_modes"], diag["gauge"]) <= tol

    @staticmethod
    def _ls_step(J, F):
        """Gauss-Newton step by normal equations (lstsq as fallback)."""
        JtJ = J.T @ J
        JtJ[np.diag_indices_from(JtJ)] += 1e-13 * np.trace(JtJ) / len(JtJ)
        try:
            return np.linalg.solve(JtJ, -J.T @ F)
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(J, -F, rcond=None)[0]

    def gauss_newton(self, u0, tol, max_iters, min_iters=1):
        u = u0.copy()
        F, diag = self.residual(u)
        norm = np.linalg.norm(F)
        if min_iters == 0 and self._converged(diag, tol):
            return u, diag
        for _ in range(max_iters):
            J = self.jacobian(u)
            step = self._ls_step(J, F)
            t = 1.0
            while t >= 1.0 / 64:
                F_new, diag_new = self.residual(u + t * step)
                norm_new = np.linalg.norm(F_new)
                if norm_new <= (1.0 - 1e-4 * t) * norm or norm_new <= tol:
                    break
                t *= 0.5
            else:
                raise SolverDivergence(
                    "line search stalled", last_residual=float(norm))
            u = u + t * step
            F, diag, norm = F_new, diag_new, norm_new
            if self._converged(diag, tol):
                return u, diag
        raise SolverDivergence(
            f"no convergence in {max_iters} iterations "
            f"(attachment {diag['attachment']:.3g}, "
            f"lift modes {diag['neg_modes']:.3g})",
            last_residual=float(norm))


def _interleave(values):
    out = np.empty(2 * len(values))
    out[0::2] = values.real
    out[1::2] = values.imag
    return out


def _interleave_rows(rows):
    out = np.empty((2 * rows.shape[0], rows.shape[1]))
    out[0::2] = rows.real
    out[1::2] = rows.imag
    return out


# ---------------------------------------------------------------------------
# continuation driver and public solvers


def _inscribed_ball_radius(domain, samples=64, seed=0):
    cached = domain.meta.get("_inscribed_radius")
    if cached is not None:
        return cached
    if domain.kind == "ball":
        r = domain.meta["radius"]
    else:
        rng = np.random.default_rng(seed)
        raw = rng.standard_normal((samples, 2 * domain.dimension))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        dirs = raw[:, 0::2] + 1j * raw[:, 1::2]
        dists = [np.linalg.norm(domain.boundary_point(d) - domain.center)
                 for d in dirs]
        r = 0.999 * float(np.min(dists))
    domain.meta["_inscribed_radius"] = r
    return r


def _blend(domain_a, domain_b, t):
    """Convex blend (1-t) rho_a + t rho_b; strongly convex for t in [0,1]."""
    def rho(z):
        return (1.0 - t) * domain_a.rho(z) + t * domain_b.rho(z)

    def grad(z):
        return (1.0 - t) * domain_a.grad(z) + t * domain_b.grad(z)

    def hess(z):
        Aa, Ca = domain_a.hess_complex(z)
        Ab, Cb = domain_b.hess_complex(z)
        return (1.0 - t) * Aa + t * Ab, (1.0 - t) * Ca + t * Cb

    return ConvexDomain(domain_a.dimension, "blend", rho, grad, hess,
                        meta={"center": domain_b.center})


def _solve_cd_raw(domain, z, v, settings, warm=None):
    """Core center-direction solve; returns (coeffs, gamma, diagnostics)."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise PreconditionError("direction must be nonzero")
    v = v / nv
    if float(domain.rho(z)) >= -INTERIOR_MARGIN:
        raise PreconditionError("base point must be strictly interior")

    system = _CenterDirectionSystem(domain, z, v, settings)
    tol = settings.newton_tol

    if warm is not None:
        coeffs0, gamma0 = warm
        u0 = system.initial_state(coeffs0, gamma0)
        u, diag = system.gauss_newton(u0, tol, settings.max_iters, min_iters=0)
        return _finalize(system, u, diag)

    if domain.kind == "ball":
        init = ball_geodesic(domain, z, v, settings)
        u0 = system.initial_state(init.coeffs)
        u, diag = system.gauss_newton(u0, tol, settings.max_iters)
        return _finalize(system, u, diag)

    # continuation from an inscribed ball that contains z
    center = domain.center
    r_ins = _inscribed_ball_radius(domain)
    r0 = max(r_ins, 1.05 * float(np.linalg.norm(z - center)) + 0.05 * r_ins)
    ball0 = make_ball(center, r0)
    init = ball_geodesic(ball0, z, v, settings)
    sys0 = _CenterDirectionSystem(ball0, z, v, settings)
    u, diag = sys0.gauss_newton(system.initial_state(init.coeffs),
                                tol, settings.max_iters)
    t = 0.0
    dt = 1.0 / settings.continuation_steps
    while t < 1.0:
        t_next = min(1.0, t + dt)
        target = system if t_next == 1.0 else _CenterDirectionSystem(
            _blend(ball0, domain, t_next), z, v, settings)
        try:
            u_next, diag = target.gauss_newton(u, tol, settings.max_iters)
        except SolverDivergence:
            dt *= 0.5
            if dt < 1e-4:
                raise
            continue
        u, t = u_next, t_next
        dt = min(1.5 * dt, 1.0 / settings.continuation_steps)
    return _finalize(system, u, diag)


def _finalize(system, u, diag):
    r, _, gamma = system.unpack(u)
    if r <= 0:
        raise SolverDivergence("converged to nonpositive derivative scale",
                               last_residual=diag["attachment"])
    if diag["min_g"] <= 0:
        raise SolverDivergence("boundary factor g lost positivity",
                               last_residual=diag["attachment"])
    return system.disc_coeffs(u), gamma, diag


def solve_from_center_direction(domain: ConvexDomain, z, v,
                                settings: SolverSettings | None = None):
    """Stationary disc with phi(0) = z, phi'(0) = r*v (r > 0), together
    with its conormal lift.

    Raises :class:`PreconditionError` for non-interior z or a failing
    convexity certificate and :class:`SolverDivergence` when the
    Gauss-Newton continuation cannot reach the tolerance.
    """
    from .lifts import lift_from_disc

    settings = settings or SolverSettings()
    if not domain.cached_certificate().passes:
        raise PreconditionError("domain fails its convexity certificate")
    coeffs, gamma, diag = _solve_cd_raw(domain, z, v, settings)
    disc = AnalyticDisc(coeffs, settings.grid, domain,
                        attachment_residual=diag["attachment"])
    disc.solver_g = gamma          # boundary factor found by the solver
    lift = lift_from_disc(domain, disc)
    return disc, lift


def solve_two_point(domain: ConvexDomain, z, w,
                    settings: SolverSettings | None = None):
    """Stationary disc through two points, normalized by phi(0) = z,
    phi(xi) = w with xi in (0, 1); returns (disc, xi).

    Outer Newton iteration over the direction sphere and xi with the
    center-direction solver inside.
    """
    settings = settings or SolverSettings()
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.linalg.norm(w - z) < 1e-6:
        raise PreconditionError("points must be distinct (|z - w| >= 1e-6)")
    for p in (z, w):
        if float(domain.rho(p)) >= -INTERIOR_MARGIN:
            raise PreconditionError("both points must be strictly interior")

    n = len(z)
    center = domain.center
    r0 = _inscribed_ball_radius(domain)
    hint = make_ball(center, max(r0, 1.05 * max(
        np.linalg.norm(z - center), np.linalg.norm(w - center))))
    try:
        v0, xi0 = _ball_two_point_data(hint, z, w)
    except PreconditionError:
        v0 = (w - z) / np.linalg.norm(w - z)
        xi0 = 0.5
    xi0 = min(max(xi0, 1e-4), 1.0 - 1e-4)

    state = {"warm": None}

    def evaluate(x):
        v = x[:n] + 1j * x[n:2 * n]
        xi = x[2 * n]
        if not 0.0 < xi < 1.0 or np.linalg.norm(v) < 1e-8:
            return None, None
        coeffs, gamma, diag = _solve_cd_raw(domain, z, v, settings,
                                            warm=state["warm"])
        state["warm"] = (coeffs, gamma)
        disc = AnalyticDisc(coeffs, settings.grid, domain,
                            attachment_residual=diag["attachment"])
        val = disc(np.array([xi]))[0]
        G = np.concatenate([(val - w).real, (val - w).imag,
                            [np.linalg.norm(v) ** 2 - 1.0]])
        return G, disc

    x = np.concatenate([v0.real, v0.imag, [xi0]])
    G, disc = evaluate(x)
    if G is None:
        raise SolverDivergence("two-point initialization failed")
    tol = max(1e-9, settings.newton_tol)
    for _ in range(30):
        if np.max(np.abs(G)) <= tol:
            break
        J = np.empty((2 * n + 1, 2 * n + 1))
        h = 1e-6
        for i in range(2 * n + 1):
            xp = x.copy()
            xp[i] += h
            Gp, _ = evaluate(xp)
            if Gp is None:
                xp[i] -= 2 * h
                Gp, _ = evaluate(xp)
                J[:, i] = (G - Gp) / h
            else:
                J[:, i] = (Gp - G) / h
        try:
            step = np.linalg.solve(J, -G)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -G, rcond=None)[0]
        t = 1.0
        while t >= 1.0 / 64:
            x_new = x + t * step
            x_new[2 * n] = min(max(x_new[2 * n], 1e-6), 1.0 - 1e-6)
            G_new, disc_new = evaluate(x_new)
            if G_new is not None and np.linalg.norm(G_new) \
                    <= (1.0 - 1e-4 * t) * np.linalg.norm(G) + tol:
                break
            t *= 0.5
        else:
            raise SolverDivergence("two-point outer iteration stalled",
                                   last_residual=float(np.linalg.norm(G)))
        x, G, disc = x_new, G_new, disc_new
    else:
        raise SolverDivergence("two-point outer iteration did not converge",
                               last_residual=float(np.linalg.norm(G)))
    return disc, float(x[2 * n])


def reparametrize(disc: AnalyticDisc, moebius: MoebiusMap) -> AnalyticDisc:
    """The disc phi composed with an automorphism of the unit disc; the
    image set is unchanged.

    The composition is generically a full (decaying) power series even
    for polynomial input, so the result carries the grid's full mode
    budget rather than the input's degree."""
    values = disc(moebius(disc.grid.nodes))
    n = disc.dimension
    modes = max(disc.modes, disc.grid.size // 4)
    coeffs = np.zeros((modes + 1, n), dtype=complex)
    for c in range(n):
        series = analyze(values[:, c], disc.grid)
        half = disc.grid.size // 2
        coeffs[:, c] = series.coeffs[half:half + modes + 1]
    out = AnalyticDisc(coeffs, disc.grid, disc.domain)
    if disc.domain is not None:
        out.attachment_residual = out.boundary_residual()
    return out


def boundary_hausdorff(disc1: AnalyticDisc, disc2: AnalyticDisc,
                       newton_iters: int = 30) -> float:
    """Hausdorff distance between the boundary images, measured from the
    grid samples of each disc to the boundary curve (not the samples) of
    the other."""

    def directed(da, db):
        targets = da.boundary_values()
        theta = db.grid.angles
        nodes_b = db.boundary_values()
        d2 = np.linalg.norm(targets[:, None, :] - nodes_b[None, :, :], axis=-1)
        th = theta[np.argmin(d2, axis=1)]
        for _ in range(newton_iters):
            e = np.exp(1j * th)
            diff = db(e) - targets
            dphi = db.derivative(e) * (1j * e)[:, None]
            g = np.sum(dphi * np.conj(diff), axis=1).real
            gp = np.sum(np.abs(dphi) ** 2, axis=1) + 1e-30
            th = th - g / gp
        e = np.exp(1j * th)
        return float(np.max(np.linalg.norm(db(e) - targets, axis=1)))

    return max(directed(disc1, disc2), directed(disc2, disc1))


def poincare_distance(t1: complex, t2: complex) -> float:
    """Poincare distance between points of the unit disc."""
    q = abs((t1 - t2) / (1.0 - np.conj(t2) * t1))
    return float(np.arctanh(q))


def kobayashi_distance(domain: ConvexDomain, z, w,
                       settings: SolverSettings | None = None) -> float:
    """Kobayashi distance from the two-point geodesic parameter:
    (1/2) log((1+xi)/(1-xi))."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.array_equal(z, w):
        return 0.0
    _, xi = solve_two_point(domain, z, w, settings)
    return float(np.arctanh(xi))


@dataclass
class ProbeReport:
    max_abs_lambda: float
    trials: int
    lambdas: np.ndarray


def extremality_probe(domain: ConvexDomain, disc: AnalyticDisc, trials: int,
                      seed: int = 0) -> ProbeReport:
    """Empirical extremality check.

    Generates competitor discs psi mapping into the open domain with
    psi(0) = phi(0) and psi'(0) parallel to phi'(0), and records the
    ratio lambda = psi'(0)/phi'(0).  Extremality predicts |lambda| < 1
    for every competitor.  Competitors are scaled copies of the disc
    itself and random cubic discs grown until they nearly touch the
    boundary (the maximum of rho over the closed disc is attained on
    the boundary circle because rho is convex).
    """
    rng = np.random.default_rng(seed)
    z = disc.base_point
    dphi = disc.base_direction
    nodes = disc.grid.nodes
    lambdas = np.empty(trials, dtype=complex)
    n_scaled = max(1, trials // 4)
    for i in range(trials):
        if i < n_scaled:
            s = rng.uniform(0.3, 0.98)
            if float(np.max(domain.rho(disc(s * nodes)))) < 0:
                lambdas[i] = s
                continue
            s *= 0.9
            lambdas[i] = s
            continue
        mu = 0.4 * (rng.standard_normal() + 1j * rng.standard_normal())
        c2, c3 = (0.3 * np.linalg.norm(dphi)
                  * (rng.standard_normal((2, disc.dimension))
                     + 1j * rng.standard_normal((2, disc.dimension))))
        incr = (np.outer(nodes, mu * dphi) + np.outer(nodes ** 2, c2)
                + np.outer(nodes ** 3, c3))

        def worst(sig):
            return float(np.max(domain.rho(z[None, :] + sig * incr)))

        hi = 1.0
        while worst(hi) < 0 and hi < 1e6:
            hi *= 2.0
        lo = 0.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if worst(mid) < 0:
                lo = mid
            else:
                hi = mid
        lambdas[i] = 0.95 * lo * mu
    return ProbeReport(float(np.max(np.abs(lambdas))), trials, lambdas)
