"""Pinching schedules, L^2 (Weil-Petersson) length, the explicit cusp limit,
and the convergence / comparison suites for one-parameter collar families.

A schedule t -> ell(t) on [0, T) drives the collar family.  Its horizontal
speed is |ell'(t)| times the L^2 norm of the projected variation, i.e.
wp_speed(ell, c(ell)) with c(ell) the quadratic-differential coefficient of
the split of the coordinate ell-derivative; the length L(t) integrates that
speed from t to T, evaluated as an ell-integral (the measured small-ell
tail exponent of the density decides convergence of the improper integral).

Comparisons against the limit use the boundary gauge: a point is addressed
by its distance d to the collar boundary, so profiles at different times
live on one fixed d-domain.  The explicit limit is the cusp
dd^2 + (e^-d / pi)^2 dtheta^2, with injectivity profile arsinh(e^-d).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .collar import (
    ELL_MAX,
    CollarParams,
    InjProfile,
    d_inj_d_ell,
    dist_to_boundary,
    inj_from_boundary_dist,
    injectivity_radius,
)
from .errors import DomainError
from .variations import QuadDiffCoeff, projected_coefficient, wp_speed

_TAIL_MARGIN = 1e-2


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class PinchSchedule:
    """A nonincreasing family t -> ell(t) on [0, T).

    Parametric power law ell(t) = ell0 (1 - t/T)^p + ellT, or monotone
    (PCHIP) interpolation of samples [[t, ell], ...] whose last node is T.
    """

    T: float
    kind: str
    p: float = None
    ell0: float = None
    ellT: float = None
    samples: tuple = None

    @classmethod
    def power(cls, p: float, ell0: float = 1.0, ellT: float = 0.0, T: float = 1.0):
        sched = cls(T=T, kind="power", p=p, ell0=ell0, ellT=ellT)
        sched.validate()
        return sched

    @classmethod
    def constant(cls, ell: float, T: float = 1.0):
        return cls.power(p=1.0, ell0=0.0, ellT=ell, T=T)

    @classmethod
    def from_samples(cls, samples, T: float = None):
        pts = tuple((float(t), float(e)) for t, e in samples)
        T = pts[-1][0] if T is None else float(T)
        sched = cls(T=T, kind="samples", samples=pts)
        sched.validate()
        return sched

    def validate(self):
        if not (self.T > 0.0 and math.isfinite(self.T)):
            raise DomainError(f"T must be positive and finite, got {self.T!r}")
        if self.kind == "power":
            if self.p is None or self.p <= 0.0:
                raise DomainError("power schedule needs p > 0")
            if self.ell0 is None or self.ell0 < 0.0 or self.ellT is None or self.ellT < 0.0:
                raise DomainError("power schedule needs ell0 >= 0 and ellT >= 0")
            if self.ell0 + self.ellT <= 0.0:
                raise DomainError("schedule must have ell(0) > 0")
        elif self.kind == "samples":
            if not self.samples or len(self.samples) < 2:
                raise DomainError("sampled schedule needs at least two nodes")
            ts = [t for t, _ in self.samples]
            es = [e for _, e in self.samples]
            if ts[0] != 0.0 or abs(ts[-1] - self.T) > 1e-12 * max(1.0, self.T):
                raise DomainError("samples must start at t = 0 and end at t = T")
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise DomainError("sample times must be strictly increasing")
            if any(b > a for a, b in zip(es, es[1:])):
                raise DomainError("ell samples must be nonincreasing")
            if any(e < 0.0 for e in es):
                raise DomainError("ell samples must be nonnegative")
            if any(e <= 0.0 for e in es[:-1]):
                raise DomainError("ell(t) must stay positive for t < T")
        else:
            raise DomainError(f"unknown schedule kind {self.kind!r}")
        if self.ell(0.0) > ELL_MAX * (1.0 + 1e-12):
            raise DomainError(f"ell(0) = {self.ell(0.0)!r} exceeds 2 arsinh(1) = {ELL_MAX!r}")

    @property
    def ell_final(self) -> float:
        return self.ellT if self.kind == "power" else self.samples[-1][1]

    def _pchip(self):
        ts = np.array([t for t, _ in self.samples])
        es = np.array([e for _, e in self.samples])
        return PchipInterpolator(ts, es)

    def ell(self, t):
        arr = np.asarray(t, dtype=float)
        if self.kind == "power":
            out = self.ell0 * np.clip(1.0 - arr / self.T, 0.0, None) ** self.p + self.ellT
        else:
            out = self._pchip()(np.clip(arr, 0.0, self.T))
        return float(out) if arr.ndim == 0 else out

    def dell(self, t):
        arr = np.asarray(t, dtype=float)
        if self.kind == "power":
            base = np.clip(1.0 - arr / self.T, 0.0, None)
            out = -self.ell0 * self.p / self.T * base ** (self.p - 1.0)
        else:
            out = self._pchip().derivative()(np.clip(arr, 0.0, self.T))
        return float(out) if arr.ndim == 0 else out

    def collar(self, t) -> CollarParams:
        return CollarParams(self.ell(t))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        form = {"type": self.kind}
        if self.kind == "power":
            form.update(p=self.p, ell0=self.ell0, ellT=self.ellT)
        else:
            form["samples"] = [list(pair) for pair in self.samples]
        return {"T": self.T, "form": form}

    @classmethod
    def from_json(cls, obj: dict) -> "PinchSchedule":
        try:
            form = obj["form"]
            kind = form["type"]
            if kind == "power":
                return cls.power(
                    p=float(form["p"]),
                    ell0=float(form.get("ell0", 1.0)),
                    ellT=float(form.get("ellT", 0.0)),
                    T=float(obj["T"]),
                )
            if kind == "samples":
                return cls.from_samples(form["samples"], T=float(obj["T"]))
            raise DomainError(f"unknown schedule type {kind!r}")
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed schedule object: {exc}") from exc

    @classmethod
    def from_spec(cls, spec: str) -> "PinchSchedule":
        """Parse a path to a schedule JSON file or an inline 'power:p=3,ell0=1' spec."""
        if spec.startswith("power:") or spec == "power":
            kw = {"p": 3.0, "ell0": 1.0, "ellT": 0.0, "T": 1.0}
            body = spec[len("power:"):] if ":" in spec else ""
            for item in filter(None, body.split(",")):
                name, _, value = item.partition("=")
                if name not in kw:
                    raise DomainError(f"unknown power-schedule parameter {name!r}")
                kw[name] = float(value)
            return cls.power(**kw)
        with open(spec, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def default_times(sched: PinchSchedule, n: int = 32) -> np.ndarray:
    """n sample times in [0, T), uniformly spaced from 0."""
    return np.linspace(0.0, sched.T, n + 1)[:-1]


def _midpoint_refine(t: np.ndarray, T: float) -> np.ndarray:
    mids = 0.5 * (t[:-1] + t[1:])
    tail = 0.5 * (t[-1] + T)
    return np.sort(np.concatenate([t, mids, [tail]]))


# ---------------------------------------------------------------------------
# the explicit cusp limit and the boundary gauge


@dataclass(frozen=True)
class CuspLimit:
    """Limit geometry in the boundary gauge: dd^2 + rho_hat(d)^2 dtheta^2 on [0, inf).

    rho_hat(d) = e^-d / pi satisfies rho_hat'' = rho_hat, so the curvature
    is -1 exactly; the limit injectivity profile arsinh(e^-d) coincides
    with the lower member of the two-sided injectivity bounds.
    """

    def rho_hat(self, d):
        return np.exp(-np.asarray(d, dtype=float)) / math.pi

    def inj(self, d):
        return np.arcsinh(np.exp(-np.asarray(d, dtype=float)))


def metric_in_boundary_gauge(c: CollarParams, d, iters: int = 90):
    """Conformal factor at prescribed boundary distance, by bisecting s(d).

    Inverts dist_to_boundary with a vectorized bisection (well below 1e-12
    in s); agrees with the closed Fermi form (ell/2 pi) cosh(tau_max - d).
    """
    arr = np.asarray(d, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(np.array(arr, dtype=float))
    if np.any(arr < 0.0) or np.any(arr > c.tau_max * (1.0 + 1e-12)):
        raise DomainError(f"d must lie in [0, d(0)] = [0, {c.tau_max:.12g}]")
    lo = np.zeros_like(arr)
    hi = np.full_like(arr, c.half_width)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        too_shallow = dist_to_boundary(c, mid) >= arr
        lo = np.where(too_shallow, mid, lo)
        hi = np.where(too_shallow, hi, mid)
    s = 0.5 * (lo + hi)
    out = c.rho_core * np.cosh(c.tau_of_s(s))
    return float(out[0]) if scalar else out


def boundary_gauge_fermi(c: CollarParams, d):
    """Closed Fermi form of the boundary-gauge conformal factor."""
    arr = np.asarray(d, dtype=float)
    out = c.rho_core * np.cosh(c.tau_max - arr)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class LimitInjReport:
    """Limit injectivity profile of a schedule, with optional convergence audit."""

    cusp: CuspLimit = None
    collar_profile: InjProfile = None
    times: np.ndarray = None
    sup_diffs: np.ndarray = None  # sup_d |inj_{ell(t)}(d) - limit(d)| per time


def limit_inj(
    sched: PinchSchedule, times=None, d_max: float = 5.0, nd: int = 201
) -> LimitInjReport:
    """Limit of the injectivity profiles in the boundary gauge.

    For a pinching schedule (ell -> 0) the limit is the cusp profile
    arsinh(e^-d); otherwise the final collar's own profile is returned.
    With times supplied, the sup-distance to the limit is recorded per time
    over the window [0, min(d_max, d(0))].
    """
    if sched.ell_final > 0.0:
        return LimitInjReport(
            collar_profile=InjProfile.from_collar(CollarParams(sched.ell_final))
        )
    cusp = CuspLimit()
    if times is None:
        return LimitInjReport(cusp=cusp)
    t = np.asarray(times, dtype=float)
    sups = np.empty_like(t)
    for i, ti in enumerate(t):
        col = sched.collar(ti)
        dg = np.linspace(0.0, min(d_max, col.tau_max), nd)
        sups[i] = float(np.max(np.abs(inj_from_boundary_dist(col, dg) - cusp.inj(dg))))
    return LimitInjReport(cusp=cusp, times=t, sup_diffs=sups)


# ---------------------------------------------------------------------------
# length


def speed_density(ell: float, grid_n: int = 4096) -> float:
    """L^2 speed of the collar family per unit |d ell / dt|.

    |c(ell)| * ||Re dw^2||_{L^2}, with c(ell) the projected coefficient of
    the ell-derivative of the family.
    """
    return projected_coefficient(ell, grid_n) * wp_speed(CollarParams(ell), QuadDiffCoeff(1.0))


@lru_cache(maxsize=None)
def tail_exponent(grid_n: int = 4096) -> float:
    """Measured log-log slope of the speed density at small core length."""
    lam = np.geomspace(1e-6, 1e-4, 7)
    val = np.array([speed_density(x, grid_n) for x in lam])
    return float(np.polyfit(np.log(lam), np.log(val), 1)[0])


def _length_between(ell_lo: float, ell_hi: float, rel_tol: float, grid_n: int) -> float:
    """Integral of the speed density over [ell_lo, ell_hi], sqrt-substituted."""
    if ell_hi <= ell_lo:
        return 0.0

    def integrand(mu):
        return speed_density(mu * mu, grid_n) * 2.0 * mu

    val, _ = quad(
        integrand, math.sqrt(ell_lo), math.sqrt(ell_hi), epsabs=0.0, epsrel=rel_tol, limit=200
    )
    return val


def wp_length(
    sched: PinchSchedule, t: float, rel_tol: float = 1e-8, grid_n: int = 4096
) -> float:
    """Length L(t) of the remaining family: integral of the horizontal speed on [t, T).

    Reparametrization-invariant, hence evaluated as the ell-integral of the
    speed density from ell(T) up to ell(t).  When the schedule pinches to
    zero the improper integral is declared infinite exactly when the
    measured small-ell tail exponent of the density is <= -1; infinity is a
    value, not an error.
    """
    if not (0.0 <= t < sched.T):
        raise DomainError(f"t must lie in [0, T) = [0, {sched.T!r})")
    lo, hi = sched.ell_final, sched.ell(t)
    if lo <= 0.0 and tail_exponent(grid_n) <= -1.0 + _TAIL_MARGIN:
        return math.inf
    return _length_between(lo, hi, rel_tol, grid_n)


# ---------------------------------------------------------------------------
# per-run reports


def _d_delta(col: CollarParams, delta: float, iters: int = 80) -> float:
    """Boundary-gauge depth of the delta-thick set: largest d with inj(d) >= delta."""
    if delta <= inj_from_boundary_dist(col, col.tau_max):
        return col.tau_max
    if delta >= col.inj_boundary:
        return 0.0
    lo, hi = 0.0, col.tau_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if inj_from_boundary_dist(col, mid) >= delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _limit_inj_fn(sched: PinchSchedule):
    """Callable d -> limit injectivity profile (cusp or final collar)."""
    if sched.ell_final > 0.0:
        final = CollarParams(sched.ell_final)
        return final.tau_max, lambda dg: inj_from_boundary_dist(final, dg)
    return math.inf, CuspLimit().inj


def _sup_root_diff(col: CollarParams, sched: PinchSchedule, d_max: float, nd: int) -> float:
    d_cap, limit_fn = _limit_inj_fn(sched)
    dg = np.linspace(0.0, min(d_max, col.tau_max, d_cap), nd)
    return float(
        np.max(np.abs(np.sqrt(inj_from_boundary_dist(col, dg)) - np.sqrt(limit_fn(dg))))
    )


@dataclass(frozen=True)
class CurveReport:
    """Per-time diagnostics of a pinching run."""

    times: np.ndarray
    ells: np.ndarray
    speeds: np.ndarray          # |ell'(t)| * speed density
    lengths: np.ndarray         # L(t); may be inf
    sup_root_diffs: np.ndarray  # S(t) = sup_d |inj^1/2 - limit^1/2|
    ratios: np.ndarray          # S(t) / L(t)
    d_delta: np.ndarray         # boundary-gauge depth of the delta-thick set
    delta: float
    d_max: float
    k0_unif: float

    COLUMNS = ("t", "ell", "wp_speed", "L", "S", "S_over_L", "d_delta")

    def rows(self):
        for i in range(self.times.size):
            yield (
                float(self.times[i]),
                float(self.ells[i]),
                float(self.speeds[i]),
                float(self.lengths[i]),
                float(self.sup_root_diffs[i]),
                float(self.ratios[i]),
                float(self.d_delta[i]),
            )


def curve_report(
    sched: PinchSchedule,
    times=None,
    delta: float = 0.01,
    d_max: float = 5.0,
    nd: int = 257,
    rel_tol: float = 1e-8,
    grid_n: int = 4096,
) -> CurveReport:
    """Run a schedule and collect speeds, lengths, and convergence gaps per time."""
    t = default_times(sched) if times is None else np.asarray(times, dtype=float)
    ells = np.asarray(sched.ell(t), dtype=float)
    speeds = np.array(
        [abs(sched.dell(ti)) * speed_density(e, grid_n) for ti, e in zip(t, ells)]
    )

    if sched.ell_final <= 0.0 and tail_exponent(grid_n) <= -1.0 + _TAIL_MARGIN:
        lengths = np.full_like(t, math.inf)
    else:
        # suffix sums over the disjoint ell-intervals between sample times
        pieces = [_length_between(sched.ell_final, ells[-1], rel_tol, grid_n)]
        for i in range(t.size - 1, 0, -1):
            pieces.append(_length_between(ells[i], ells[i - 1], rel_tol, grid_n))
        lengths = np.cumsum(pieces)[::-1].copy()

    sups = np.array([_sup_root_diff(CollarParams(e), sched, d_max, nd) for e in ells])
    with np.errstate(invalid="ignore"):
        ratios = np.where(lengths > 0.0, sups / lengths, 0.0)
    k0 = float(np.max(ratios)) if np.all(np.isfinite(lengths)) else math.nan
    dd = np.array([_d_delta(CollarParams(e), delta) for e in ells])
    return CurveReport(
        times=t,
        ells=ells,
        speeds=speeds,
        lengths=lengths,
        sup_root_diffs=sups,
        ratios=ratios,
        d_delta=dd,
        delta=delta,
        d_max=d_max,
        k0_unif=k0,
    )


@dataclass(frozen=True)
class UnifConvReport:
    """Uniform-convergence constant K0 = max_t S(t)/L(t), with refinement audit."""

    k0: float
    k0_refined: float
    times: np.ndarray
    sup_root_diffs: np.ndarray
    lengths: np.ndarray
    rel_change: float

    def stable(self, frac: float = 0.05) -> bool:
        return math.isfinite(self.k0) and self.rel_change <= frac


def unif_conv_check(
    sched: PinchSchedule,
    times=None,
    d_max: float = 5.0,
    nd: int = 257,
    rel_tol: float = 1e-8,
    grid_n: int = 4096,
) -> UnifConvReport:
    """K0 from sup_d |inj^1/2 - limit^1/2| <= K0 L(t), audited at doubled resolution.

    Rejects infinite-length schedules: the estimate presumes L(0) < inf.
    """
    t = default_times(sched) if times is None else np.asarray(times, dtype=float)
    rep = curve_report(sched, t, d_max=d_max, nd=nd, rel_tol=rel_tol, grid_n=grid_n)
    if not np.all(np.isfinite(rep.lengths)):
        raise DomainError(
            "schedule has infinite length; the uniform-convergence estimate "
            "requires a finite-length family"
        )
    t2 = _midpoint_refine(t, sched.T)
    rep2 = curve_report(sched, t2, d_max=d_max, nd=2 * nd - 1, rel_tol=rel_tol, grid_n=grid_n)
    k0, k0r = rep.k0_unif, rep2.k0_unif
    rel = 0.0 if k0 == k0r == 0.0 else abs(k0 - k0r) / max(abs(k0), abs(k0r))
    return UnifConvReport(
        k0=k0,
        k0_refined=k0r,
        times=t,
        sup_root_diffs=rep.sup_root_diffs,
        lengths=rep.lengths,
        rel_change=rel,
    )


@dataclass(frozen=True)
class RootInjReport:
    """Ratio |d/dt inj^(1/2)| / speed over a fixed s-grid and times."""

    k0: float
    k0_refined: float
    k0_integrated: float
    s_grid: np.ndarray
    times: np.ndarray
    rel_change: float

    def stable(self, frac: float = 0.05) -> bool:
        return math.isfinite(self.k0) and self.rel_change <= frac


def _rootinj_sup(sched, times, s_grid, grid_n):
    sup = 0.0
    for ti in times:
        ell = float(sched.ell(ti))
        dl = abs(float(sched.dell(ti)))
        col = CollarParams(ell)
        speed = dl * speed_density(ell, grid_n)
        if speed == 0.0:
            continue  # both sides of the bound vanish
        inj = injectivity_radius(col, s_grid)
        num = 0.5 * np.abs(d_inj_d_ell(col, s_grid)) * dl / np.sqrt(inj)
        sup = max(sup, float(np.max(num / speed)))
    return sup


def _rootinj_integrated(sched, times, s_grid, grid_n, rel_tol=1e-8):
    roots = np.stack(
        [np.sqrt(injectivity_radius(CollarParams(sched.ell(ti)), s_grid)) for ti in times]
    )
    lengths = np.array([wp_length(sched, ti, rel_tol, grid_n) for ti in times])
    sup = 0.0
    for i in range(len(times)):
        for j in range(i + 1, len(times)):
            dL = lengths[i] - lengths[j]
            if dL <= 0.0:
                continue
            sup = max(sup, float(np.max(np.abs(roots[i] - roots[j])) / dL))
    return sup


def rootinj_bound_check(
    sched: PinchSchedule,
    times=None,
    s_grid=None,
    grid_n: int = 4096,
) -> RootInjReport:
    """Empirical constant in |d/dt inj^(1/2)| <= K0 * speed on a fixed s-grid.

    The time derivative uses the closed-form partial of inj in ell times
    ell'(t); the integrated variant max |Delta inj^(1/2)| / Delta L is also
    reported (it drives the nesting audit).  Stability is measured by
    doubling both grids.
    """
    t = default_times(sched) if times is None else np.asarray(times, dtype=float)
    if s_grid is None:
        span = 0.98 * CollarParams(sched.ell(0.0)).half_width
        s_grid = np.linspace(-span, span, 33)
    s_grid = np.asarray(s_grid, dtype=float)

    k0 = _rootinj_sup(sched, t, s_grid, grid_n)
    t2 = _midpoint_refine(t, sched.T)
    s2 = np.linspace(s_grid[0], s_grid[-1], 2 * s_grid.size - 1)
    k0r = _rootinj_sup(sched, t2, s2, grid_n)
    k0i = _rootinj_integrated(sched, t, s_grid, grid_n)
    rel = 0.0 if k0 == k0r == 0.0 else abs(k0 - k0r) / max(abs(k0), abs(k0r))
    return RootInjReport(
        k0=k0, k0_refined=k0r, k0_integrated=k0i, s_grid=s_grid, times=t, rel_change=rel
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Comparability constants across times on the delta-thick boundary-gauge window."""

    t0: float
    delta: float
    d_window: float
    c1: float           # metric ratio  g(s) <= C1 g(t)
    c2: float           # inj ratio     inj(s) <= C2 inj(t)
    c_cauchy: float     # |g(t1)-g(t2)|_{C^0(g(s))} <= C delta^-1/2 (L(t1)-L(t2))
    c_pointwise: float  # |dg/dt|_{C^0(g(s))} <= C delta^-1/2 speed(t)
    c1_h: float         # same-window ratio against the limit metric
    c2_h: float
    rel_change: float   # joint refinement drift of (c1, c2, c_cauchy)

    def finite(self) -> bool:
        return all(
            math.isfinite(v)
            for v in (self.c1, self.c2, self.c_cauchy, self.c_pointwise, self.c1_h, self.c2_h)
        )

    def stable(self, frac: float = 0.05) -> bool:
        return self.finite() and self.rel_change <= frac


def _coeff_integral(ell_lo: float, ell_hi: float, grid_n: int) -> float:
    """Integral of |c(lambda)| over [ell_lo, ell_hi] (accumulated horizontal field)."""
    if ell_hi <= ell_lo:
        return 0.0
    val, _ = quad(
        lambda lam: projected_coefficient(lam, grid_n),
        ell_lo,
        ell_hi,
        epsabs=0.0,
        epsrel=1e-10,
        limit=200,
    )
    return val


def equivalence_checks(
    sched: PinchSchedule,
    t0: float,
    delta: float,
    nt: int = 32,
    nd: int = 101,
    grid_n: int = 4096,
    rel_tol: float = 1e-8,
) -> EquivalenceReport:
    """Measure the cross-time comparability constants on the delta-thick window.

    Requires the hypothesis (2 K0 L(t0))^2 <= delta, with K0 the measured
    uniform-convergence constant of the schedule; otherwise the pair
    (t0, delta) is rejected with the computed threshold.  The Cauchy and
    pointwise constants are measured on the horizontal (projected) part of
    the variation, whose direction dw^2 is time-independent; the raw
    coordinate family's drift at fixed d is a gauge artifact.
    """
    if not (0.0 <= t0 < sched.T):
        raise DomainError("t0 must lie in [0, T)")
    uc = unif_conv_check(sched, grid_n=grid_n, rel_tol=rel_tol)
    k0 = uc.k0
    L0 = wp_length(sched, t0, rel_tol, grid_n)
    if (2.0 * k0 * L0) ** 2 > delta:
        raise DomainError(
            f"hypothesis violated: (2 K0 L(t0))^2 = {(2.0 * k0 * L0) ** 2:.6g} > delta = "
            f"{delta:.6g}; need L(t0) <= {math.sqrt(delta) / (2.0 * k0):.6g}"
        )

    def measure(nt_, nd_):
        times = t0 + (sched.T - t0) * np.linspace(0.0, 1.0, nt_ + 1)[:-1]
        col0 = CollarParams(sched.ell(t0))
        d_win = _d_delta(col0, delta)
        dg = np.linspace(0.0, d_win, nd_)

        cols = [CollarParams(sched.ell(ti)) for ti in times]
        rho2 = np.stack([boundary_gauge_fermi(c, dg) ** 2 for c in cols])
        injs = np.stack([inj_from_boundary_dist(c, dg) for c in cols])
        cusp = CuspLimit()
        c1 = float(np.max(rho2[:, None, :] / rho2[None, :, :]))
        c2 = float(np.max(injs[:, None, :] / injs[None, :, :]))
        rh = cusp.rho_hat(dg) ** 2
        ih = cusp.inj(dg)
        c1_h = float(np.max(np.maximum(rho2 / rh, rh / rho2)))
        c2_h = float(np.max(np.maximum(injs / ih, ih / injs)))

        lengths = np.array([wp_length(sched, ti, rel_tol, grid_n) for ti in times])
        ells = np.array([c.ell for c in cols])
        sd = math.sqrt(delta)
        inv_rho2_max = float(np.max(1.0 / rho2))

        # cumulative |c| integrals over the disjoint ell pieces, from the end
        pieces = [_coeff_integral(sched.ell_final, ells[-1], grid_n)]
        for i in range(times.size - 1, 0, -1):
            pieces.append(_coeff_integral(ells[i], ells[i - 1], grid_n))
        coeff_cum = np.cumsum(pieces)[::-1]

        c_cauchy = 0.0
        for i in range(times.size):
            for j in range(i + 1, times.size):
                dL = lengths[i] - lengths[j]
                if dL <= 0.0:
                    continue
                amp = math.sqrt(2.0) * (coeff_cum[i] - coeff_cum[j])
                c_cauchy = max(c_cauchy, amp * inv_rho2_max * sd / dL)

        c_point = 0.0
        for i in range(times.size):
            num = math.sqrt(2.0) * projected_coefficient(ells[i], grid_n)
            den = speed_density(ells[i], grid_n)
            c_point = max(c_point, num * inv_rho2_max * sd / den)
        return d_win, c1, c2, c_cauchy, c_point, c1_h, c2_h

    d_win, c1, c2, cc, cp, c1h, c2h = measure(nt, nd)
    _, c1b, c2b, ccb, _, _, _ = measure(2 * nt, 2 * nd - 1)
    rel = max(
        abs(c1 - c1b) / max(c1, c1b),
        abs(c2 - c2b) / max(c2, c2b),
        abs(cc - ccb) / max(cc, ccb, 1e-300),
    )
    return EquivalenceReport(
        t0=t0,
        delta=delta,
        d_window=d_win,
        c1=c1,
        c2=c2,
        c_cauchy=cc,
        c_pointwise=cp,
        c1_h=c1h,
        c2_h=c2h,
        rel_change=rel,
    )


@dataclass(frozen=True)
class LipschitzReport:
    """Max difference quotient of t -> inj(t, x) over a grid, with closed-form oracle."""

    constant: float
    constant_refined: float
    oracle: float  # max |d inj/d ell| |ell'| over the window
    window: tuple
    rel_change: float

    def stable(self, frac: float = 0.02) -> bool:
        return math.isfinite(self.constant) and self.rel_change <= frac


def lipschitz_check(
    sched: PinchSchedule,
    s_grid=None,
    nt: int = 64,
    window: tuple = None,
) -> LipschitzReport:
    """Bound the difference quotients of inj in t on a compact window.

    The quotient maximum is compared against the closed-form derivative
    bound max |d inj / d ell| |ell'(t)| and re-measured on a doubled time
    grid.
    """
    window = (0.0, 0.9 * sched.T) if window is None else window
    if not (0.0 <= window[0] < window[1] < sched.T):
        raise DomainError("window must be a compact subinterval of [0, T)")
    if s_grid is None:
        span = 0.98 * CollarParams(sched.ell(0.0)).half_width
        s_grid = np.linspace(-span, span, 17)
    s_grid = np.asarray(s_grid, dtype=float)

    def quotient_max(nt_):
        ts = np.linspace(window[0], window[1], nt_)
        vals = np.stack([injectivity_radius(CollarParams(sched.ell(ti)), s_grid) for ti in ts])
        quot = np.abs(np.diff(vals, axis=0)) / np.diff(ts)[:, None]
        return float(np.max(quot))

    lip = quotient_max(nt)
    lip2 = quotient_max(2 * nt - 1)
    oracle = 0.0
    for ti in np.linspace(window[0], window[1], 4 * nt):
        col = CollarParams(sched.ell(ti))
        oracle = max(
            oracle, float(np.max(np.abs(d_inj_d_ell(col, s_grid)))) * abs(sched.dell(ti))
        )
    rel = 0.0 if lip == lip2 == 0.0 else abs(lip - lip2) / max(lip, lip2)
    return LipschitzReport(
        constant=lip, constant_refined=lip2, oracle=oracle, window=tuple(window), rel_change=rel
    )
