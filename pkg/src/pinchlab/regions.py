"""Thick/thin set algebra on collars and combinatorial surface descriptors.

Inside a collar the injectivity radius is an even function of the axial
coordinate, strictly increasing in |s|, so every thick/thin set is a
symmetric interval (or its complement) whose boundary is found by
bisection on the monotone profile.  At the surface level, a descriptor
records the genus, the candidate collars, and the component graph of
their complement; only that combinatorial bookkeeping is modelled, since
off-collar points always have injectivity radius above arsinh(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .collar import CollarParams, InjProfile, injectivity_radius
from .errors import DomainError

_ARS1 = math.asinh(1.0)
_SQRT2P1 = 1.0 + math.sqrt(2.0)


@dataclass(frozen=True)
class ThickThinQuery:
    """Threshold bundle: delta-thin / beta-thick / epsilon-thin with target gap Q."""

    delta: float = None
    beta: float = None
    epsilon: float = None
    Q: float = None

    def __post_init__(self):
        for name in ("delta", "beta", "epsilon", "Q"):
            v = getattr(self, name)
            if v is not None and v <= 0.0:
                raise DomainError(f"{name} must be positive where present, got {v!r}")
        if self.epsilon is not None and self.beta is not None and self.epsilon >= self.beta:
            raise DomainError("epsilon must be < beta")


@dataclass(frozen=True)
class SRegion:
    """Disjoint sorted closed s-intervals inside the collar."""

    intervals: tuple

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in iv:
            if b < a:
                raise DomainError(f"interval endpoints out of order: ({a}, {b})")
        for (a1, b1), (a2, b2) in zip(iv, iv[1:]):
            if a2 <= b1:
                raise DomainError("intervals must be disjoint and sorted")
        object.__setattr__(self, "intervals", iv)

    @property
    def empty(self) -> bool:
        return not self.intervals

    def contains(self, s: float, tol: float = 0.0) -> bool:
        return any(a - tol <= s <= b + tol for a, b in self.intervals)

    def subset_of(self, other: "SRegion", tol: float = 0.0) -> bool:
        return all(
            any(oa - tol <= a and b <= ob + tol for oa, ob in other.intervals)
            for a, b in self.intervals
        )

    def is_symmetric(self, tol: float = 1e-10) -> bool:
        mirrored = sorted((-b, -a) for a, b in self.intervals)
        return all(
            abs(a - ma) <= tol and abs(b - mb) <= tol
            for (a, b), (ma, mb) in zip(self.intervals, mirrored)
        )


def _bisect_inj_level(c: CollarParams, value: float, iters: int = 120) -> float:
    """s >= 0 with inj(s) = value, by bisection on the increasing half-profile."""
    lo, hi = 0.0, c.half_width
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if injectivity_radius(c, min(mid, np.nextafter(c.half_width, 0.0))) < value:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def thin_interval(c: CollarParams, delta: float) -> SRegion:
    """{s : inj(s) < delta} -- empty, the whole collar, or a symmetric interval.

    Boundary located by bisection, exploiting monotonicity of the profile;
    endpoints accurate to well below 1e-10.
    """
    if delta <= 0.0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if delta <= c.inj_core:
        return SRegion(())
    if delta >= c.inj_boundary:
        return SRegion(((-c.half_width, c.half_width),))
    s_d = _bisect_inj_level(c, delta)
    return SRegion(((-s_d, s_d),))


def epsilon_for_separation(beta: float, Q: float, margin: float = 1e-6) -> float:
    """Thinness threshold guaranteeing that the beta-thick and epsilon-thin parts
    of any collar are separated by more than Q.

    eps = (1 - margin) min(beta, arsinh 1, arsinh(sinh(beta) e^-Q / (1 + sqrt 2)));
    then -log sinh(eps) + log(sinh(beta)/(1 + sqrt 2)) > Q and eps < min(beta, arsinh 1).
    """
    if beta <= 0.0 or Q <= 0.0:
        raise DomainError("beta and Q must be positive")
    cand = math.asinh(math.sinh(beta) * math.exp(-Q) / _SQRT2P1)
    return (1.0 - margin) * min(beta, _ARS1, cand)


@dataclass(frozen=True)
class SeparationResult:
    """Distance between the beta-thick and epsilon-thin parts inside one collar."""

    ell: float
    beta: float
    epsilon: float
    thick_empty: bool
    thin_empty: bool
    distance: float = None  # None when a region is empty
    d_thick_deepest: float = None
    d_thin_shallowest: float = None
    proof_lower_bound: float = None


def separation_check(c: CollarParams, beta: float, epsilon: float) -> SeparationResult:
    """Radial distance between {inj >= beta} and {inj < epsilon} inside the collar.

    Both regions are rotationally symmetric, so the minimal distance is the
    difference of their boundary-distance levels.  Empty regions are
    reported, not raised.
    """
    if epsilon >= beta:
        raise DomainError("epsilon must be < beta")
    bound = -math.log(math.sinh(epsilon)) + math.log(math.sinh(beta) / _SQRT2P1)
    thick_empty = beta >= c.inj_boundary
    thin_empty = epsilon <= c.inj_core
    if thick_empty or thin_empty:
        return SeparationResult(
            c.ell, beta, epsilon, thick_empty, thin_empty, proof_lower_bound=bound
        )
    # tau levels: inj = arsinh(sinh(ell/2) cosh tau) increasing in |tau|
    tau_beta = c.tau_of_s(_bisect_inj_level(c, beta)) if beta > c.inj_core else c.tau_max
    tau_eps = c.tau_of_s(_bisect_inj_level(c, epsilon))
    d_thick = c.tau_max - tau_beta  # deepest beta-thick point
    d_thin = c.tau_max - tau_eps    # shallowest epsilon-thin point
    return SeparationResult(
        c.ell,
        beta,
        epsilon,
        thick_empty=False,
        thin_empty=False,
        distance=float(tau_beta - tau_eps),
        d_thick_deepest=float(d_thick),
        d_thin_shallowest=float(d_thin),
        proof_lower_bound=bound,
    )


# ---------------------------------------------------------------------------
# nested thick families


@dataclass(frozen=True)
class NestedFamily:
    """Grid masks of {inj > (K0 L(t) + mu)^2} at each time, with containment audit."""

    times: np.ndarray
    lengths: np.ndarray
    k0: float
    mu: float
    mu_tilde: float
    grid: np.ndarray
    masks: np.ndarray          # with threshold (K0 L + mu)^2
    masks_tilde: np.ndarray    # with threshold (K0 L + mu_tilde)^2
    violations: tuple          # (s, t1, t2) triples, capped
    n_violations: int
    final_claim_violations: int

    @property
    def nested(self) -> bool:
        return self.n_violations == 0

    def regions(self) -> list:
        """SRegion view of each time's set (maximal grid runs of membership)."""
        out = []
        for mask in self.masks:
            iv = []
            i = 0
            while i < mask.size:
                if mask[i]:
                    j = i
                    while j + 1 < mask.size and mask[j + 1]:
                        j += 1
                    iv.append((self.grid[i], self.grid[j]))
                    i = j + 1
                else:
                    i += 1
            out.append(SRegion(tuple(iv)))
        return out


def nested_sets(
    profiles,
    lengths_L,
    k0: float,
    mu: float,
    times=None,
    mu_tilde: float = None,
) -> NestedFamily:
    """Build the sets {inj > (K0 L(t) + mu)^2} on a shared grid and audit nesting.

    Checks containment of the mu-set at t1 in the mu_tilde-set at t2 for
    every t1 <= t2 (mu_tilde <= mu, default mu), and the closing claim
    that the (K0 L(0) + mu)^2-thick set at the first time stays inside the
    mu^2-thick set at all later times.  Membership is a strict inequality
    on computed values; no tolerance.
    """
    profiles = list(profiles)
    L = np.asarray(lengths_L, dtype=float)
    if len(profiles) != L.size or len(profiles) < 1:
        raise DomainError("need one profile per length value")
    if np.any(np.diff(L) > 0.0):
        raise DomainError("lengths_L must be nonincreasing")
    if mu < 0.0 or k0 < 0.0:
        raise DomainError("k0 and mu must be nonnegative")
    mu_tilde = mu if mu_tilde is None else mu_tilde
    if not (0.0 <= mu_tilde <= mu):
        raise DomainError("need 0 <= mu_tilde <= mu")
    grid = profiles[0].grid
    for p in profiles[1:]:
        if not np.array_equal(p.grid, grid):
            raise DomainError("profiles must share one s-grid")
    t = np.arange(L.size, dtype=float) if times is None else np.asarray(times, dtype=float)

    vals = np.stack([p.values for p in profiles])
    masks = vals > (k0 * L[:, None] + mu) ** 2
    masks_tilde = vals > (k0 * L[:, None] + mu_tilde) ** 2

    violations = []
    n_viol = 0
    for i in range(L.size):
        for j in range(i + 1, L.size):
            bad = masks[i] & ~masks_tilde[j]
            nb = int(bad.sum())
            n_viol += nb
            if nb and len(violations) < 64:
                for idx in np.nonzero(bad)[0][: 64 - len(violations)]:
                    violations.append((float(grid[idx]), float(t[i]), float(t[j])))

    init_thick = vals[0] > (k0 * L[0] + mu) ** 2
    final_bad = 0
    if mu > 0.0:
        for j in range(L.size):
            final_bad += int((init_thick & ~(vals[j] > mu**2)).sum())

    return NestedFamily(
        times=t,
        lengths=L,
        k0=float(k0),
        mu=float(mu),
        mu_tilde=float(mu_tilde),
        grid=grid,
        masks=masks,
        masks_tilde=masks_tilde,
        violations=tuple(violations),
        n_violations=n_viol,
        final_claim_violations=final_bad,
    )


# ---------------------------------------------------------------------------
# surface descriptors


@dataclass(frozen=True)
class ComponentSpec:
    """A complement component: its genus and the collar ends glued to it.

    Ends are (collar_index, side) pairs with side in {0, 1}.
    """

    genus: int
    ends: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "ends", tuple((int(i), int(side)) for i, side in self.ends)
        )


@dataclass(frozen=True)
class SurfaceDescriptor:
    """Combinatorial model: genus, pinching-candidate collars, component graph."""

    genus: int
    collars: tuple
    components: tuple

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "collars": [{"ell": col.ell} for col in self.collars],
            "components": [
                {"genus": comp.genus, "ends": [list(e) for e in comp.ends]}
                for comp in self.components
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SurfaceDescriptor":
        try:
            collars = tuple(CollarParams(col["ell"]) for col in obj["collars"])
            comps = tuple(
                ComponentSpec(comp["genus"], tuple(tuple(e) for e in comp["ends"]))
                for comp in obj["components"]
            )
            return cls(int(obj["genus"]), collars, comps)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed surface descriptor: {exc}") from exc


@dataclass(frozen=True)
class DescriptorReport:
    """Per-constraint audit of a SurfaceDescriptor."""

    checks: tuple  # (name, ok, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list:
        return [(name, detail) for name, ok, detail in self.checks if not ok]


def _end_usage(d: SurfaceDescriptor):
    used = {}
    for ci, comp in enumerate(d.components):
        for end in comp.ends:
            used.setdefault(end, []).append(ci)
    return used


def _connected(d: SurfaceDescriptor) -> bool:
    m = len(d.components)
    if m == 0:
        return False
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    used = _end_usage(d)
    for i in range(len(d.collars)):
        owners = used.get((i, 0), []) + used.get((i, 1), [])
        for a, b in zip(owners, owners[1:]):
            parent[find(a)] = find(b)
    return len({find(i) for i in range(m)}) == 1


def descriptor_validate(d: SurfaceDescriptor) -> DescriptorReport:
    """Audit every descriptor invariant; violations are report content."""
    checks = []
    gamma, kappa, m = d.genus, len(d.collars), len(d.components)

    checks.append(("genus_at_least_2", gamma >= 2, f"genus = {gamma}"))

    used = _end_usage(d)
    expected = {(i, side) for i in range(kappa) for side in (0, 1)}
    bad_refs = sorted(set(used) - expected)
    multi = sorted(e for e, owners in used.items() if len(owners) != 1)
    missing = sorted(expected - set(used))
    ok_struct = not bad_refs and not multi and not missing
    checks.append(
        (
            "ends_used_exactly_once",
            ok_struct,
            f"bad refs {bad_refs}, duplicated {multi}, missing {missing}",
        )
    )

    checks.append(
        ("kappa_range", 0 <= kappa <= 3 * (gamma - 1), f"kappa = {kappa}, bound {3 * (gamma - 1)}")
    )
    checks.append(
        ("m_range", 1 <= m <= 2 * (gamma - 1), f"m = {m}, bound {2 * (gamma - 1)}")
    )
    checks.append(
        ("kappa_ge_m_minus_1", kappa >= m - 1, f"kappa = {kappa}, m - 1 = {m - 1}")
    )
    checks.append(("connected", ok_struct and _connected(d), "component graph connectivity"))

    chis = [2 - 2 * comp.genus - len(comp.ends) for comp in d.components]
    checks.append(
        (
            "euler_total",
            sum(chis) == 2 - 2 * gamma,
            f"sum chi = {sum(chis)}, expected {2 - 2 * gamma}",
        )
    )
    checks.append(
        ("euler_components", all(x <= -1 for x in chis), f"component chis = {chis}")
    )
    checks.append(
        (
            "component_genus_nonnegative",
            all(comp.genus >= 0 for comp in d.components),
            f"genera = {[comp.genus for comp in d.components]}",
        )
    )
    return DescriptorReport(tuple(checks))


@dataclass(frozen=True)
class LimitComponent:
    genus: int
    punctures: int
    members: tuple  # original component indices


@dataclass(frozen=True)
class LimitDecomposition:
    """Topology after pinching a subset of collars."""

    components: tuple
    total_punctures: int
    descriptor: SurfaceDescriptor  # same surface with only the pinched collars kept


def limit_decomposition(d: SurfaceDescriptor, pinched) -> LimitDecomposition:
    """Components of the complement of the pinched collars, with genus and punctures.

    Surviving collars are absorbed: merged genus is the sum of member genera
    plus the cycle rank of the surviving sub-multigraph; each pinched collar
    contributes one puncture per end.  Cross-checked against the additivity
    of the Euler characteristic; inconsistent graphs raise.
    """
    rep = descriptor_validate(d)
    if not rep.passed:
        raise DomainError(f"descriptor invalid: {rep.failures()}")
    pinched = sorted(set(int(i) for i in pinched))
    if pinched and not (0 <= pinched[0] and pinched[-1] < len(d.collars)):
        raise DomainError("pinched indices out of range")
    pinched_set = set(pinched)

    m = len(d.components)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {end: ci for ci, comp in enumerate(d.components) for end in comp.ends}
    surviving = [i for i in range(len(d.collars)) if i not in pinched_set]
    for i in surviving:
        parent[find(owner[(i, 0)])] = find(owner[(i, 1)])

    groups = {}
    for ci in range(m):
        groups.setdefault(find(ci), []).append(ci)

    comps = []
    new_index = {old: new for new, old in enumerate(pinched)}
    merged_specs = []
    for members in groups.values():
        members = sorted(members)
        member_set = set(members)
        e_surv = sum(
            1 for i in surviving if owner[(i, 0)] in member_set  # both ends in one group
        )
        genus = sum(d.components[ci].genus for ci in members) + (e_surv - len(members) + 1)
        pinched_ends = [
            (i, side)
            for ci in members
            for (i, side) in d.components[ci].ends
            if i in pinched_set
        ]
        punctures = len(pinched_ends)
        chi_sum = sum(2 - 2 * d.components[ci].genus - len(d.components[ci].ends) for ci in members)
        genus_euler = (2 - punctures - chi_sum) // 2
        if genus_euler != genus or (2 - punctures - chi_sum) % 2 != 0:
            raise DomainError(
                f"inconsistent component graph: cycle-rank genus {genus} "
                f"!= Euler genus {(2 - punctures - chi_sum) / 2}"
            )
        comps.append(LimitComponent(genus, punctures, tuple(members)))
        merged_specs.append(
            ComponentSpec(genus, tuple((new_index[i], side) for i, side in pinched_ends))
        )

    order = sorted(range(len(comps)), key=lambda k: comps[k].members)
    comps = tuple(comps[k] for k in order)
    merged_specs = tuple(merged_specs[k] for k in order)
    limit_desc = SurfaceDescriptor(
        d.genus, tuple(d.collars[i] for i in pinched), merged_specs
    )
    return LimitDecomposition(
        components=comps,
        total_punctures=sum(cp.punctures for cp in comps),
        descriptor=limit_desc,
    )
