"""Rotationally invariant metric variations on a collar.

The variations of the collar metric g = rho^2 (ds^2 + dtheta^2) modelled
here split, L^2(g)-orthogonally on the symmetric sector, into real parts
of quadratic differentials c dw^2 (w = s + i theta) and Lie derivatives
along radial fields x(s) d/ds:

    Re(c dw^2)      = Re(c) (ds^2 - dtheta^2) - 2 Im(c) ds dtheta,
    L_{x d/ds} g    = ((r2)' x + 2 r2 x') ds^2 + (r2)' x dtheta^2,

with r2 = rho^2.  This module constructs these fields, projects a given
variation onto the split, and evaluates pointwise / first-order tensor
norms and the induced L^2 speed of a moving family.

Only the rotationally invariant sector (Fourier mode zero, h_stheta = 0
for the split) is in scope; nonzero modes are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, quad, simpson
from scipy.interpolate import CubicSpline

from .collar import (
    CollarParams,
    d_rho_sq,
    d2_rho_sq,
    injectivity_radius,
    log_rho_prime,
    rho_sq,
)
from .errors import DomainError, UnsupportedError
from .spectral import cheb_fit, cheb_interpolant

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QuadDiffCoeff:
    """Coefficient c of the rotationally invariant quadratic differential c dw^2."""

    c: complex

    def __post_init__(self):
        z = complex(self.c)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"coefficient must be finite, got {self.c!r}")
        object.__setattr__(self, "c", z)


@dataclass(frozen=True)
class RadialField:
    """Radial vector field x(s) d/ds given by vectorized callables for x and x'."""

    x: object
    dx: object
    ddx: object = None

    @classmethod
    def from_function(cls, collar: CollarParams, fn, n: int = 512) -> "RadialField":
        """Chebyshev-fit a callable on the standard grid; derivatives are spectral."""
        ser = cheb_fit(np.vectorize(fn, otypes=[float]), n, -collar.half_width, collar.half_width)
        return cls(ser, ser.deriv(), ser.deriv(2))

    @classmethod
    def from_samples(cls, collar: CollarParams, values) -> "RadialField":
        """Interpolate samples given on collar.standard_grid(len(values)).

        The standard grid is linear in u, so its s-values are first-kind
        Chebyshev points on (-X, X) and spectral interpolation applies
        directly.
        """
        ser = cheb_interpolant(values, -collar.half_width, collar.half_width)
        return cls(ser, ser.deriv(), ser.deriv(2))


@dataclass(frozen=True)
class SymTwoTensorField:
    """Symmetric 2-tensor h_ss ds^2 + 2 h_st ds dtheta + h_tt dtheta^2, functions of s.

    Components are vectorized callables; ``d_*`` hold s-derivatives when a
    closed form (or spectral series) is available.  ``tau_*``, when present,
    evaluate the same components as functions of the Fermi coordinate tau;
    near-degenerate collars are only addressable in that chart (the
    conformal coordinate saturates in floating point near the ends), so the
    projection prefers these.
    """

    h_ss: object
    h_st: object
    h_tt: object
    d_ss: object = None
    d_st: object = None
    d_tt: object = None
    tau_ss: object = None
    tau_st: object = None
    tau_tt: object = None

    @classmethod
    def constant(cls, hss: float, hst: float, htt: float) -> "SymTwoTensorField":
        zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))
        mk = lambda v: (lambda s, v=v: np.full_like(np.asarray(s, dtype=float), v))
        return cls(
            mk(hss), mk(hst), mk(htt), zero, zero, zero, mk(hss), mk(hst), mk(htt)
        )

    @classmethod
    def from_samples(cls, collar: CollarParams, hss, hst, htt) -> "SymTwoTensorField":
        """Spectral interpolants through samples on collar.standard_grid(n)."""
        a, b = -collar.half_width, collar.half_width
        sers = [cheb_interpolant(np.asarray(v, dtype=float), a, b) for v in (hss, hst, htt)]
        return cls(*sers, *(s.deriv() for s in sers))

    def with_derivs(self, collar: CollarParams, n: int = 512) -> "SymTwoTensorField":
        """Fill any missing derivative callables by Chebyshev differentiation."""
        if self.d_ss is not None and self.d_st is not None and self.d_tt is not None:
            return self
        a, b = -collar.half_width, collar.half_width
        out = {}
        for comp, dname in (("h_ss", "d_ss"), ("h_st", "d_st"), ("h_tt", "d_tt")):
            d = getattr(self, dname)
            out[dname] = d if d is not None else cheb_fit(getattr(self, comp), n, a, b).deriv()
        return SymTwoTensorField(self.h_ss, self.h_st, self.h_tt, **out)


@dataclass(frozen=True)
class DecompositionResult:
    """Output of horizontal_project: coefficient, radial field, L^2 residual."""

    c: QuadDiffCoeff
    x: RadialField
    residual: float
    grid_n: int


# ---------------------------------------------------------------------------
# model fields


def dl_variation(c: CollarParams) -> SymTwoTensorField:
    """Coordinate derivative of the collar family in ell at fixed (s, theta).

    Conformal: a(s) (ds^2 + dtheta^2) with
    a = d(rho^2)/d ell = (ell / 2 pi^2) (cos u + u sin u) sec^3 u,
    evaluated through the cancellation-free Fermi form
    a = (ell / 2 pi^2) cosh(tau)^2 (1 + u sinh(tau)), u = arctan(sinh(tau)).
    """
    ell = c.ell
    m = c.rho_core
    amp = ell / (2.0 * math.pi**2)

    def a_tau(tau):
        tau = np.asarray(tau, dtype=float)
        sh = np.sinh(tau)
        return amp * np.cosh(tau) ** 2 * (1.0 + np.arctan(sh) * sh)

    def a(s):
        return a_tau(c.tau_of_s(s))

    def da_tau(tau):
        # d/ds = rho d/dtau of the Fermi form above
        tau = np.asarray(tau, dtype=float)
        ch, sh = np.cosh(tau), np.sinh(tau)
        u = np.arctan(sh)
        inner = 2.0 * ch * sh * (1.0 + u * sh) + ch * sh + u * ch**3
        return m * ch * amp * inner

    def da(s):
        return da_tau(c.tau_of_s(s))

    zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))
    return SymTwoTensorField(a, zero, a, da, zero, da, a_tau, zero, a_tau)


def re_quad_diff(q: QuadDiffCoeff) -> SymTwoTensorField:
    """Real part of c dw^2: components (Re c, -Im c, -Re c); trace- and divergence-free."""
    a, b = q.c.real, q.c.imag
    return SymTwoTensorField.constant(a, -b, -a)


def lie_derivative(c: CollarParams, x: RadialField) -> SymTwoTensorField:
    """Lie derivative of the collar metric along x(s) d/ds."""

    def hss(s):
        return d_rho_sq(c, s) * x.x(s) + 2.0 * rho_sq(c, s) * x.dx(s)

    def htt(s):
        return d_rho_sq(c, s) * x.x(s)

    def dtt(s):
        return d2_rho_sq(c, s) * x.x(s) + d_rho_sq(c, s) * x.dx(s)

    if x.ddx is not None:
        def dss(s):
            return (
                d2_rho_sq(c, s) * x.x(s)
                + 3.0 * d_rho_sq(c, s) * x.dx(s)
                + 2.0 * rho_sq(c, s) * x.ddx(s)
            )
    else:
        dss = None

    zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))
    return SymTwoTensorField(hss, zero, htt, dss, zero, dtt)


# ---------------------------------------------------------------------------
# norms


def _scalar_like(value, s):
    return float(value) if np.asarray(s).ndim == 0 else np.asarray(value, dtype=float)


def pointwise_norm(c: CollarParams, h: SymTwoTensorField, s):
    """|h|_g = sqrt(rho^-4 (h_ss^2 + 2 h_st^2 + h_tt^2)) at s."""
    r2 = rho_sq(c, s)
    out = np.sqrt(h.h_ss(s) ** 2 + 2.0 * h.h_st(s) ** 2 + h.h_tt(s) ** 2) / r2
    return _scalar_like(out, s)


def _grad_norm(c: CollarParams, h: SymTwoTensorField, s):
    """|nabla h|_g from the conformal Christoffel symbols (phi' = d log rho / ds)."""
    h = h.with_derivs(c)
    p = log_rho_prime(c, s)
    hss, hst, htt = h.h_ss(s), h.h_st(s), h.h_tt(s)
    dss, dst, dtt = h.d_ss(s), h.d_st(s), h.d_tt(s)
    g_sss = dss - 2.0 * p * hss
    g_sst = dst - 2.0 * p * hst
    g_stt = dtt - 2.0 * p * htt
    g_tss = -2.0 * p * hst
    g_tst = p * (hss - htt)
    g_ttt = 2.0 * p * hst
    quad_sum = (
        g_sss**2 + 2.0 * g_sst**2 + g_stt**2 + g_tss**2 + 2.0 * g_tst**2 + g_ttt**2
    )
    return _scalar_like(np.sqrt(quad_sum) / rho_sq(c, s) ** 1.5, s)


def ck_seminorm(c: CollarParams, h: SymTwoTensorField, s, k: int):
    """C^k norm sum_{l<=k} |nabla^l h|_g at s, for k in {0, 1}."""
    if k not in (0, 1):
        raise UnsupportedError(f"only k in {{0, 1}} is supported, got {k!r}")
    out = pointwise_norm(c, h, s)
    if k == 1:
        out = out + _grad_norm(c, h, s)
    return out


def divergence(c: CollarParams, h: SymTwoTensorField, s):
    """(div h)_s and (div h)_theta with respect to the collar metric."""
    h = h.with_derivs(c)
    p = log_rho_prime(c, s)
    r2 = rho_sq(c, s)
    div_s = (h.d_ss(s) - p * (h.h_ss(s) + h.h_tt(s))) / r2
    div_t = h.d_st(s) / r2
    return _scalar_like(div_s, s), _scalar_like(div_t, s)


def trace(c: CollarParams, h: SymTwoTensorField, s):
    """g-trace rho^-2 (h_ss + h_tt)."""
    return _scalar_like((h.h_ss(s) + h.h_tt(s)) / rho_sq(c, s), s)


# ---------------------------------------------------------------------------
# L^2 speed


def wp_speed(c: CollarParams, q: QuadDiffCoeff) -> float:
    """L^2(g) norm of Re(c dw^2) over the collar, in closed form.

    ||Re(c dw^2)||^2 = 4 pi |c|^2 (2 pi / ell)^3 (u* + sin u* cos u*),
    with sin u* cos u* = sinh(ell/2) / cosh^2(ell/2).
    """
    ell = c.ell
    sc = math.sinh(0.5 * ell) / math.cosh(0.5 * ell) ** 2
    return math.sqrt(
        4.0 * math.pi * abs(q.c) ** 2 * (_TWO_PI / ell) ** 3 * (c.u_star + sc)
    )


def wp_speed_quadrature(c: CollarParams, q: QuadDiffCoeff) -> float:
    """Adaptive-quadrature oracle for wp_speed (|h|_g^2 integrated over the collar)."""
    amp = 2.0 * abs(q.c) ** 2 * 2.0 * math.pi

    def integrand(s):
        return 1.0 / rho_sq(c, s)

    X = c.half_width
    val, _ = quad(integrand, -X, X, points=[0.0], limit=200, epsabs=0.0, epsrel=1e-12)
    return math.sqrt(amp * val)


def first_variation_inj(c: CollarParams, k: SymTwoTensorField) -> float:
    """(1/4) of the loop integral of k(sigma', sigma') over the core loop.

    sigma is the core circle of length 2 inj(0) = ell at unit g-speed, so
    the integrand k_tt / rho^2 is constant and the integral is exact.
    Equals d(inj)/dt at the core when k is the time derivative of the
    metric.
    """
    ktt0 = float(np.asarray(k.h_tt(0.0)))
    return 0.25 * (ktt0 / rho_sq(c, 0.0)) * c.ell


def yaba_ratio(c: CollarParams) -> float:
    """Dimensionless sharpness ratio |Re(dw^2)|_g(0) * inj(0)^(1/2) / ||Re(dw^2)||.

    Independent of the coefficient by homogeneity; flat in ell exactly when
    the inverse-square-root injectivity weight in the elliptic estimate is
    sharp.
    """
    unit = QuadDiffCoeff(1.0)
    h = re_quad_diff(unit)
    num = float(pointwise_norm(c, h, 0.0)) * math.sqrt(injectivity_radius(c, 0.0))
    return num / wp_speed(c, unit)


# ---------------------------------------------------------------------------
# projection onto the split


def horizontal_project(
    c: CollarParams, k: SymTwoTensorField, grid_n: int = 4096
) -> DecompositionResult:
    """Least-squares split of k into Re(c dw^2) + L_{x d/ds} g.

    On the rotationally invariant sector the trace part of k determines
    rho^2 x by a single quadrature ((rho^2 x)' = (k_ss + k_tt)/2, odd
    gauge x(0) = 0), and the theta-theta equation then yields a pointwise
    coefficient c(s) = (rho^2)' x - k_tt.  The reported c minimizes the
    L^2(g) distance over constants; the residual is the weighted spread
    of c(s), which vanishes exactly on decomposable inputs.

    The quadrature is composite Simpson on a uniform grid in the Fermi
    coordinate (which resolves the collar ends uniformly in ell), so the
    residual of a decomposable field decreases at fourth order in grid_n.
    """
    if grid_n < 16:
        raise DomainError(f"grid_n must be >= 16, got {grid_n}")
    probe = c.standard_grid(64)
    off = float(np.max(np.abs(k.h_st(probe))))
    scale = max(
        float(np.max(np.abs(k.h_ss(probe)))), float(np.max(np.abs(k.h_tt(probe)))), 1e-300
    )
    if off > 1e-10 * max(scale, 1.0):
        raise UnsupportedError(
            "horizontal_project supports rotationally invariant fields with h_stheta = 0"
        )

    # odd node count so the core is a node: the quadrature must start at the
    # gauge point x(0) = 0 and run outward, otherwise the error collected in
    # the exponentially large end layers contaminates the small mid values
    n_nodes = grid_n if grid_n % 2 == 1 else grid_n + 1
    mid = n_nodes // 2
    m = c.rho_core
    tau = np.linspace(-c.tau_max, c.tau_max, n_nodes)
    s = np.arctan(np.sinh(tau)) / m
    ch = np.cosh(tau)
    rho = m * ch
    r2 = rho * rho
    dr2 = 2.0 * m**3 * ch * ch * np.sinh(tau)  # d(rho^2)/ds

    if k.tau_ss is not None and k.tau_tt is not None:
        kss = np.asarray(k.tau_ss(tau), dtype=float)
        ktt = np.asarray(k.tau_tt(tau), dtype=float)
    else:
        kss = np.asarray(k.h_ss(s), dtype=float)
        ktt = np.asarray(k.h_tt(s), dtype=float)
    tr_half = 0.5 * (kss + ktt)
    y = tr_half / rho
    G = np.empty_like(y)
    G[mid:] = cumulative_simpson(y[mid:], x=tau[mid:], initial=0.0)
    G[: mid + 1] = -cumulative_simpson(y[mid::-1], x=-tau[mid::-1], initial=0.0)[::-1]
    x = G / r2
    c_pt = dr2 * x - ktt

    w = rho**-3
    c_hat = float(simpson(w * c_pt, x=tau) / simpson(w, x=tau))
    res2 = 4.0 * math.pi * float(simpson(w * (c_hat - c_pt) ** 2, x=tau))
    residual = math.sqrt(max(res2, 0.0))

    # spline in tau: s saturates in floating point near the ends at tiny ell
    g_spline = CubicSpline(tau, G)

    def x_fn(sv):
        return g_spline(c.tau_of_s(sv)) / rho_sq(c, sv)

    def dx_fn(sv):
        tr = 0.5 * (np.asarray(k.h_ss(sv), dtype=float) + np.asarray(k.h_tt(sv), dtype=float))
        return (tr - d_rho_sq(c, sv) * x_fn(sv)) / rho_sq(c, sv)

    return DecompositionResult(
        c=QuadDiffCoeff(complex(c_hat, 0.0)),
        x=RadialField(x_fn, dx_fn),
        residual=residual,
        grid_n=grid_n,
    )


@lru_cache(maxsize=None)
def projected_coefficient(ell: float, grid_n: int = 4096) -> float:
    """|c| of the split of dl_variation at core length ell (cached)."""
    col = CollarParams(ell)
    return abs(horizontal_project(col, dl_variation(col), grid_n).c.c)


# ---------------------------------------------------------------------------
# norm evolution under a moving metric


@dataclass(frozen=True)
class TensorEvolutionReport:
    """Smallest exponential constant relating C^k norms of a fixed tensor across times."""

    k: int
    times: np.ndarray
    norms: np.ndarray
    speed_integral: np.ndarray
    c_emp: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.c_emp)


def tensor_evolution_check(
    times,
    collars,
    omega: SymTwoTensorField,
    k: int,
    ell_prime=None,
) -> TensorEvolutionReport:
    """Fit |Omega|_{C^k(g(t1))} <= |Omega|_{C^k(g(t2))} exp(C int |dg/dt|_{C^k})
    at the collar core over all time pairs; returns the smallest workable C.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0.0):
        raise DomainError("times must be an increasing 1-d grid")
    ells = np.array([col.ell for col in collars], dtype=float)
    if ells.size != t.size:
        raise DomainError("need one collar per time")
    dl = np.gradient(ells, t) if ell_prime is None else np.asarray(ell_prime, dtype=float)

    norms = np.array([float(ck_seminorm(col, omega, 0.0, k)) for col in collars])
    dg = np.array(
        [
            abs(dl[i]) * float(ck_seminorm(col, dl_variation(col), 0.0, k))
            for i, col in enumerate(collars)
        ]
    )
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (dg[1:] + dg[:-1]) * np.diff(t))])

    c_emp = 0.0
    for i in range(t.size):
        for j in range(i + 1, t.size):
            num = abs(math.log(norms[i] / norms[j]))
            den = integral[j] - integral[i]
            if den <= 0.0:
                if num > 1e-12:
                    c_emp = math.inf
                continue
            c_emp = max(c_emp, num / den)
    return TensorEvolutionReport(k=k, times=t, norms=norms, speed_integral=integral, c_emp=c_emp)
