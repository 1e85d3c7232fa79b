"""Closed-form geometry of the standard hyperbolic collar.

A simple closed geodesic of length ``ell <= 2 arsinh(1)`` in a closed
hyperbolic surface has a neighbourhood isometric to the cylinder
``(-X(ell), X(ell)) x S^1`` carrying the metric
``rho(s)^2 (ds^2 + dtheta^2)`` with

    rho(s) = ell / (2 pi cos(ell s / 2 pi)),
    X(ell) = (2 pi / ell) (pi/2 - arctan(sinh(ell/2))).

Everything here is evaluated in closed form; adaptive quadrature and
finite differences appear only in the tests, as independent oracles.

Three equivalent coordinates along the cylinder axis are used:

* ``s``   -- the conformal coordinate above;
* ``u``   -- the angle ``ell s / (2 pi)``, with ``|u| < u* < pi/2``;
* ``tau`` -- the Fermi coordinate ``arsinh(tan u)``, the signed hyperbolic
  distance from the core circle, in which ``rho = (ell / 2 pi) cosh(tau)``.

Near the collar ends, products of hyperbolic functions of ``tau`` are
preferred over trigonometric quotients of ``u``, which cancel badly there.
All operations are pure functions of immutable inputs and are safe to
evaluate concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .spectral import cheb_points

ELL_MAX = 2.0 * math.asinh(1.0)

_SQRT2P1 = 1.0 + math.sqrt(2.0)


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _ret(value, scalar):
    return float(value) if scalar else value


def half_width(ell: float) -> float:
    """Half-width X(ell) of the collar cylinder in the conformal coordinate.

    Positive and strictly decreasing on (0, 2 arsinh 1]; ell X(ell) -> pi^2
    as ell -> 0.
    """
    _check_ell(ell)
    return (2.0 * math.pi / ell) * (math.pi / 2.0 - math.atan(math.sinh(0.5 * ell)))


def _check_ell(ell):
    if not (0.0 < ell <= ELL_MAX):
        raise DomainError(
            f"core geodesic length must lie in (0, 2 arsinh 1] = (0, {ELL_MAX:.12g}], got {ell!r}"
        )


@dataclass(frozen=True)
class CollarParams:
    """A collar around a core geodesic of length ``ell``.

    ``half_width`` is derived from ``ell`` at construction and cached.
    """

    ell: float
    half_width: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "half_width", half_width(self.ell))

    @property
    def u_star(self) -> float:
        """Angle bound: u ranges over (-u*, u*), u* = pi/2 - arctan(sinh(ell/2))."""
        return math.pi / 2.0 - math.atan(math.sinh(0.5 * self.ell))

    @property
    def tau_max(self) -> float:
        """Fermi coordinate of the collar ends = distance from core to boundary."""
        return math.asinh(1.0 / math.sinh(0.5 * self.ell))

    @property
    def rho_core(self) -> float:
        return self.ell / (2.0 * math.pi)

    @property
    def inj_core(self) -> float:
        """Injectivity radius at the core circle: ell / 2."""
        return 0.5 * self.ell

    @property
    def inj_boundary(self) -> float:
        """Boundary value arsinh(cosh(ell/2)) of the injectivity radius."""
        return math.asinh(math.cosh(0.5 * self.ell))

    def u_of_s(self, s):
        arr, scalar = _as_array(s)
        return _ret(self.ell * arr / (2.0 * math.pi), scalar)

    def tau_of_s(self, s):
        arr, scalar = _as_array(s)
        return _ret(np.arcsinh(np.tan(self.ell * arr / (2.0 * math.pi))), scalar)

    def s_of_tau(self, tau):
        arr, scalar = _as_array(tau)
        return _ret(np.arctan(np.sinh(arr)) * (2.0 * math.pi / self.ell), scalar)

    def standard_grid(self, n: int = 512) -> np.ndarray:
        """Default verification grid: n Chebyshev points in u on (-u*, u*), as s-values."""
        return cheb_points(n, -self.u_star, self.u_star) * (2.0 * math.pi / self.ell)


@dataclass(frozen=True)
class CollarPoint:
    """A point of the collar cylinder, |s| < X(ell), theta normalized to [0, 2 pi)."""

    collar: CollarParams
    s: float
    theta: float = 0.0

    def __post_init__(self):
        if not abs(self.s) < self.collar.half_width:
            raise DomainError(
                f"|s| must be < X(ell) = {self.collar.half_width:.12g}, got {self.s!r}"
            )
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))


@dataclass(frozen=True)
class GeodesicLoop:
    """Shortest homotopically nontrivial loop through a point; length = 2 inj."""

    base: CollarPoint
    length: float

    @classmethod
    def shortest_through(cls, point: CollarPoint) -> "GeodesicLoop":
        return cls(point, 2.0 * injectivity_radius(point.collar, point.s))


# ---------------------------------------------------------------------------
# conformal factor and its derivatives


def conformal_factor(c: CollarParams, s):
    """rho(s) = ell / (2 pi cos(ell s / 2 pi)); even, increasing in |s|."""
    arr, scalar = _as_array(s)
    if np.any(np.abs(arr) >= c.half_width):
        raise DomainError(f"|s| must be < X(ell) = {c.half_width:.12g}")
    return _ret(c.ell / (2.0 * math.pi * np.cos(c.u_of_s(arr))), scalar)


def rho_sq(c: CollarParams, s):
    """rho^2 evaluated through the Fermi form (valid on the closed interval |s| <= X)."""
    arr, scalar = _as_array(s)
    return _ret((c.rho_core * np.cosh(c.tau_of_s(arr))) ** 2, scalar)


def d_rho_sq(c: CollarParams, s):
    """d(rho^2)/ds = 2 m^3 cosh^2(tau) sinh(tau), m = ell / 2 pi; odd in s."""
    arr, scalar = _as_array(s)
    tau = c.tau_of_s(arr)
    return _ret(2.0 * c.rho_core**3 * np.cosh(tau) ** 2 * np.sinh(tau), scalar)


def d2_rho_sq(c: CollarParams, s):
    """Second s-derivative of rho^2: 2 m^4 cosh^2(tau) (3 sinh^2(tau) + 1)."""
    arr, scalar = _as_array(s)
    tau = c.tau_of_s(arr)
    ch2 = np.cosh(tau) ** 2
    return _ret(2.0 * c.rho_core**4 * ch2 * (3.0 * np.sinh(tau) ** 2 + 1.0), scalar)


def log_rho_prime(c: CollarParams, s):
    """d(log rho)/ds = m tan(u) = m sinh(tau); the conformal Christoffel seed."""
    arr, scalar = _as_array(s)
    return _ret(c.rho_core * np.sinh(c.tau_of_s(arr)), scalar)


# ---------------------------------------------------------------------------
# distances, injectivity radius, bounds, areas


def dist_to_boundary(c: CollarParams, s):
    """Hyperbolic distance from the point at coordinate s to the collar boundary.

    Closed form: the arclength integral of rho telescopes to
    tau_max - arsinh(tan(ell |s| / 2 pi)).  Strictly decreasing in |s|,
    zero at the ends; d(0) = arsinh(1/sinh(ell/2)).
    """
    arr, scalar = _as_array(s)
    if np.any(np.abs(arr) > c.half_width):
        raise DomainError(f"|s| must be <= X(ell) = {c.half_width:.12g}")
    d = c.tau_max - np.arcsinh(np.abs(np.tan(c.u_of_s(arr))))
    return _ret(np.maximum(d, 0.0), scalar)


def injectivity_radius(c: CollarParams, s):
    """Injectivity radius inj(s) = arsinh(sinh(ell/2) cosh(tau(s))).

    The product form is the cancellation-free equivalent of
    arsinh(cosh(ell/2) cosh d - sinh d) with d the boundary distance;
    even in s, minimal value ell/2 at the core.
    """
    arr, scalar = _as_array(s)
    if np.any(np.abs(arr) >= c.half_width):
        raise DomainError(f"|s| must be < X(ell) = {c.half_width:.12g}")
    tau = c.tau_of_s(arr)
    return _ret(np.arcsinh(math.sinh(0.5 * c.ell) * np.cosh(tau)), scalar)


def inj_from_boundary_dist(c: CollarParams, d):
    """Injectivity radius at prescribed boundary distance d in [0, tau_max]."""
    arr, scalar = _as_array(d)
    if np.any(arr < 0.0) or np.any(arr > c.tau_max * (1.0 + 1e-12)):
        raise DomainError(f"d must lie in [0, {c.tau_max:.12g}]")
    return _ret(
        np.arcsinh(math.sinh(0.5 * c.ell) * np.cosh(c.tau_max - arr)), scalar
    )


def inj_bounds(d):
    """Two-sided bounds (arsinh(e^-d), arsinh((1+sqrt 2) e^-d)) on the injectivity radius."""
    arr, scalar = _as_array(d)
    if np.any(arr < 0.0):
        raise DomainError("boundary distance d must be >= 0")
    e = np.exp(-arr)
    lo, hi = np.arcsinh(e), np.arcsinh(_SQRT2P1 * e)
    return (_ret(lo, scalar), _ret(hi, scalar))


def collar_area(c: CollarParams, s1: float, s2: float) -> float:
    """Area 2 pi * int rho^2 ds = ell [tan(ell s / 2 pi)] between s1 <= s2."""
    if not (-c.half_width <= s1 <= s2 <= c.half_width):
        raise DomainError(
            f"need -X <= s1 <= s2 <= X with X = {c.half_width:.12g}, got ({s1!r}, {s2!r})"
        )
    # tan(u) = sinh(tau): evaluate through tau for end-point stability
    t1, t2 = np.sinh(c.tau_of_s(s1)), np.sinh(c.tau_of_s(s2))
    return float(c.ell * (t2 - t1))


def thin_part_area(c: CollarParams, v: float) -> float:
    """Area of {inj < v}: 2 ell sinh(tau_v) with cosh(tau_v) = sinh(v)/sinh(ell/2).

    Zero for v <= ell/2; the full collar area 2 ell / sinh(ell/2) once v
    exceeds the boundary value of inj.  Supports the empirical area/inj
    ratio reported alongside the bound suite.
    """
    if v <= 0.0:
        raise DomainError("threshold must be positive")
    r = math.sinh(v) / math.sinh(0.5 * c.ell)
    if r <= 1.0:
        return 0.0
    sinh_tau_v = min(math.sqrt(r * r - 1.0), 1.0 / math.sinh(0.5 * c.ell))
    return 2.0 * c.ell * sinh_tau_v


# ---------------------------------------------------------------------------
# closed-form partial derivatives (oracle-checked in tests)


def d_inj_d_dist(c: CollarParams, d):
    """Partial of inj with respect to boundary distance; <= 0, vanishing at d = tau_max."""
    arr, scalar = _as_array(d)
    k = math.sinh(0.5 * c.ell)
    tau = c.tau_max - arr
    return _ret(-k * np.sinh(tau) / np.sqrt(1.0 + (k * np.cosh(tau)) ** 2), scalar)


def inj_critical_dist(c: CollarParams) -> float:
    """Boundary distance where d(inj)/dd vanishes: artanh(1/cosh(ell/2)).

    Coincides with the core distance d(0) = tau_max.
    """
    return math.atanh(1.0 / math.cosh(0.5 * c.ell))


def d_inj_d_ell(c: CollarParams, s):
    """Partial of inj(s; ell) in ell at fixed conformal coordinate s."""
    arr, scalar = _as_array(s)
    k = math.sinh(0.5 * c.ell)
    dk = 0.5 * math.cosh(0.5 * c.ell)
    u = c.u_of_s(arr)
    tau = np.arcsinh(np.tan(u))
    # d tau / d ell at fixed s: sec(u) * s / (2 pi)
    dtau = (arr / (2.0 * math.pi)) / np.cos(u)
    ch, sh = np.cosh(tau), np.sinh(tau)
    return _ret((dk * ch + k * sh * dtau) / np.sqrt(1.0 + (k * ch) ** 2), scalar)


# ---------------------------------------------------------------------------
# profiles and sweeps


@dataclass(frozen=True)
class InjProfile:
    """Injectivity-radius samples on a sorted s-grid."""

    grid: np.ndarray
    values: np.ndarray

    @classmethod
    def from_collar(cls, c: CollarParams, n: int = 512) -> "InjProfile":
        g = c.standard_grid(n)
        return cls(g, injectivity_radius(c, g))

    def validate(self, sym_tol: float = 1e-12) -> None:
        """Check positivity, s -> -s symmetry, and that the minimum sits at the centre."""
        v, g = self.values, self.grid
        if v.shape != g.shape or np.any(np.diff(g) <= 0):
            raise DomainError("grid must be strictly increasing and match values")
        if np.any(v <= 0.0):
            raise DomainError("injectivity radius values must be positive")
        if np.max(np.abs(v - v[::-1])) > sym_tol:
            raise DomainError(f"profile not symmetric within {sym_tol}")
        n = v.size
        inner = {n // 2} if n % 2 else {n // 2 - 1, n // 2}
        if int(np.argmin(v)) not in inner:
            raise DomainError("profile minimum not at the centre")


@dataclass(frozen=True)
class BoundSweepReport:
    """Worst logarithmic slacks of the three pointwise collar bounds.

    Each slack is >= 0 exactly when the corresponding two-sided bound holds:

    * ``slack_rho_ball``: r - |log rho(y)/rho(x)| over pairs at distance <= r;
    * ``slack_inj_rho``:  min(log(inj/rho), log(pi rho / inj)) pointwise;
    * ``slack_inj_ball``: log(pi e^r) - |log inj(y)/inj(x)| over the same pairs.
    """

    ell: float
    r: float
    grid_size: int
    slack_rho_ball: float
    slack_inj_rho: float
    slack_inj_ball: float
    n_pairs: int
    fp_guard: float = 1e-12

    @property
    def passed(self) -> bool:
        g = -self.fp_guard
        return (
            self.slack_rho_ball >= g
            and self.slack_inj_rho >= g
            and self.slack_inj_ball >= g
        )


def pointwise_bound_sweep(
    c: CollarParams, r: float, grid_size: int, fp_guard: float = 1e-12
) -> BoundSweepReport:
    """Sweep the two-sided rho/inj comparison bounds over grid pairs within distance r.

    Pairs are taken along the cylinder axis, where the hyperbolic distance
    is exactly |tau_i - tau_j|; violations are report content, never raised.
    """
    if grid_size < 16:
        raise DomainError(f"grid_size must be >= 16, got {grid_size}")
    if r <= 0.0:
        raise DomainError("radius r must be positive")
    tau = c.tau_of_s(c.standard_grid(grid_size))
    log_rho = np.log(c.rho_core * np.cosh(tau))
    log_inj = np.log(np.arcsinh(math.sinh(0.5 * c.ell) * np.cosh(tau)))

    mask = np.abs(tau[:, None] - tau[None, :]) <= r
    n_pairs = int(mask.sum())

    dlr = np.abs(log_rho[None, :] - log_rho[:, None])
    slack_rho = float(np.min(np.where(mask, r - dlr, np.inf)))

    slack_ir = float(np.min(np.minimum(log_inj - log_rho, math.log(math.pi) + log_rho - log_inj)))

    dli = np.abs(log_inj[None, :] - log_inj[:, None])
    slack_ib = float(np.min(np.where(mask, math.log(math.pi) + r - dli, np.inf)))

    return BoundSweepReport(
        ell=c.ell,
        r=r,
        grid_size=grid_size,
        slack_rho_ball=slack_rho,
        slack_inj_rho=slack_ir,
        slack_inj_ball=slack_ib,
        n_pairs=n_pairs,
        fp_guard=fp_guard,
    )
