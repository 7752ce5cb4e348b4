"""Spectral analysis on the unit circle.

Functions on the circle are held either as values at the N equispaced
nodes theta_j = 2*pi*j/N or as coefficients of the trigonometric
polynomial

    u(theta) = sum_{k=-N/2}^{N/2-1} c_k e^{i k theta},

stored in centered order (index j of the coefficient array holds
c_{j - N/2}).  ``analyze`` and ``synthesize`` convert between the two
representations and are exact inverses up to roundoff.

The harmonic-conjugate transform ``hilbert_conjugate`` acts as the
Fourier multiplier c_k -> -i*sgn(k)*c_k on nonzero modes; the free
additive constant is pinned so the conjugate vanishes at theta = 0
(tau = 1), which is where every normalization in this package lives.
The unpaired Nyquist mode -N/2 is annihilated (its conjugate aliases to
zero on the grid).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, WindingNumberError

#: tolerance used by realness / holomorphy checks on coefficients
REAL_TOL = 1e-12


@dataclass(frozen=True)
class CircleGrid:
    """Equispaced nodes theta_j = 2*pi*j/N; N a power of two, N >= 16."""

    size: int

    def __post_init__(self):
        n = self.size
        if n < 16 or (n & (n - 1)) != 0:
            raise PreconditionError(
                f"grid size must be a power of two >= 16, got {n}")

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def nodes(self) -> np.ndarray:
        """The points e^{i theta_j} on the unit circle."""
        return np.exp(1j * self.angles)

    def refined(self, factor: int = 2) -> "CircleGrid":
        return CircleGrid(self.size * factor)


@dataclass
class TrigSeries:
    """Finite Fourier series on a :class:`CircleGrid`.

    ``coeffs`` has length N with entry j holding c_{j - N/2}
    (wavenumbers -N/2 .. N/2-1).
    """

    grid: CircleGrid
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.grid.size,):
            raise PreconditionError(
                f"expected {self.grid.size} coefficients, got {self.coeffs.shape}")

    @property
    def wavenumbers(self) -> np.ndarray:
        n = self.grid.size
        return np.arange(-(n // 2), n // 2)

    def coeff(self, k: int) -> complex:
        n = self.grid.size
        if not -(n // 2) <= k < n // 2:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + n // 2])

    def _scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.coeffs))))

    def is_real(self, tol: float = REAL_TOL) -> bool:
        """True when c_{-k} = conj(c_k) within ``tol`` (relative)."""
        n = self.grid.size
        c = self.coeffs
        half = n // 2
        # pair k = 1..half-1 against -k; modes 0 and -half must be real
        pos = c[half + 1:]
        neg = c[1:half][::-1]
        err = np.max(np.abs(neg - np.conj(pos))) if half > 1 else 0.0
        err = max(err, abs(c[half].imag), abs(c[0].imag))
        return err <= tol * self._scale()

    def is_holomorphic_type(self, tol: float = REAL_TOL) -> bool:
        """True when all negative-wavenumber coefficients vanish."""
        n = self.grid.size
        neg = self.coeffs[:n // 2]
        return float(np.max(np.abs(neg))) <= tol * self._scale()

    def synthesize(self, at=None) -> np.ndarray:
        return synthesize(self, at)

    def derivative(self) -> "TrigSeries":
        """d/dtheta, i.e. c_k -> i*k*c_k."""
        return TrigSeries(self.grid, 1j * self.wavenumbers * self.coeffs)


def analyze(samples, grid: CircleGrid | None = None) -> TrigSeries:
    """Fourier coefficients of values sampled at the grid nodes."""
    samples = np.asarray(samples, dtype=complex)
    if grid is None:
        grid = CircleGrid(len(samples))
    if samples.shape != (grid.size,):
        raise PreconditionError(
            f"sample count {samples.shape} does not match grid size {grid.size}")
    coeffs = np.fft.fftshift(np.fft.fft(samples)) / grid.size
    return TrigSeries(grid, coeffs)


def synthesize(series: TrigSeries, at=None) -> np.ndarray:
    """Evaluate the trigonometric polynomial.

    ``at=None`` evaluates at the grid nodes (exact inverse of
    ``analyze``); otherwise ``at`` is an array of angles.
    """
    if at is None:
        return np.fft.ifft(np.fft.ifftshift(series.coeffs)) * series.grid.size
    at = np.atleast_1d(np.asarray(at, dtype=float))
    phases = np.exp(1j * np.outer(at, series.wavenumbers))
    return phases @ series.coeffs


def hilbert_conjugate(u: TrigSeries, tol: float = REAL_TOL) -> TrigSeries:
    """Harmonic conjugate T(u) of a real series, pinned to T(u)(1) = 0.

    u + i*T(u) extends holomorphically into the disc; the additive
    constant is fixed so the conjugate vanishes at theta = 0.
    """
    if not u.is_real(tol):
        raise PreconditionError("hilbert_conjugate requires a real-valued series")
    k = u.wavenumbers
    d = -1j * np.sign(k) * u.coeffs
    d[k == -(u.grid.size // 2)] = 0.0  # unpaired Nyquist mode
    d[k == 0] = 0.0
    d[k == 0] = -np.sum(d)  # pin the value at theta = 0 to zero
    return TrigSeries(u.grid, d)


def cauchy_extend(boundary: TrigSeries, tau) -> complex | np.ndarray:
    """Holomorphic extension sum_{k>=0} c_k tau^k at |tau| < 1.

    Negative modes are ignored; quantify them separately with
    ``negative_tail_norm``.
    """
    tau_arr = np.asarray(tau, dtype=complex)
    if np.any(np.abs(tau_arr) >= 1.0):
        raise PreconditionError("cauchy_extend requires |tau| < 1")
    n = boundary.grid.size
    c = boundary.coeffs[n // 2:]          # k = 0 .. N/2-1
    values = np.polynomial.polynomial.polyval(tau_arr, c)
    if np.isscalar(tau) or np.ndim(tau) == 0:
        return complex(values)
    return values


def negative_tail_norm(series: TrigSeries) -> float:
    """l2 norm of the negative-wavenumber coefficients."""
    n = series.grid.size
    return float(np.linalg.norm(series.coeffs[:n // 2]))


def continuous_log(values: np.ndarray, max_jump: float = np.pi / 2):
    """Continuous branch of log along a sampled closed curve.

    Returns ``(log_values, winding)`` where ``winding`` is the integer
    index of the curve about the origin.  Raises when a node-to-node
    phase jump reaches ``max_jump`` (under-resolved curve) or when a
    value vanishes.
    """
    values = np.asarray(values, dtype=complex)
    mags = np.abs(values)
    if np.min(mags) <= 1e-10:
        raise PreconditionError("curve passes through (or too close to) 0")
    ratios = np.roll(values, -1) / values
    jumps = np.angle(ratios)              # principal value in (-pi, pi]
    if np.max(np.abs(jumps)) >= max_jump:
        raise PreconditionError(
            "phase jump >= pi/2 between adjacent nodes; curve under-resolved")
    winding = int(round(np.sum(jumps) / (2.0 * np.pi)))
    phase0 = np.angle(values[0])
    phases = phase0 + np.concatenate(([0.0], np.cumsum(jumps[:-1])))
    return np.log(mags) + 1j * phases, winding


def log_lift(series: TrigSeries) -> TrigSeries:
    """Continuous branch of log(series) on the grid.

    Requires the sampled curve to stay away from 0 and to have winding
    number 0 about the origin; ``exp`` of the result reproduces the
    input nodewise.
    """
    values = synthesize(series)
    logs, winding = continuous_log(values)
    if winding != 0:
        raise WindingNumberError(
            f"curve has winding number {winding} about 0, expected 0")
    return analyze(logs, series.grid)
