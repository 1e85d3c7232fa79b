import json
import math

import numpy as np
import pytest

from pinchlab import (
    CollarParams,
    ComponentSpec,
    DomainError,
    InjProfile,
    SRegion,
    SurfaceDescriptor,
    ThickThinQuery,
    descriptor_validate,
    epsilon_for_separation,
    injectivity_radius,
    limit_decomposition,
    nested_sets,
    separation_check,
    thin_interval,
)
from pinchlab.suites import genus2_descriptor_cases

ARS1 = math.asinh(1.0)

# frozen: thin_interval(ell=0.1, delta=0.2) endpoint (root of inj = 0.2)
S_EPS_01_02 = 82.920590347742234121
# frozen: epsilon_for_separation values before the 1e-6 margin factor
EPS_ARS1_10 = 1.8805247832032139723e-05 / (1 - 1e-6)
EPS_05_5 = 0.0014543484701417181504 / (1 - 1e-6)


def test_thick_thin_query_validation():
    ThickThinQuery(delta=0.1)
    ThickThinQuery(beta=0.5, epsilon=0.1, Q=2.0)
    with pytest.raises(DomainError):
        ThickThinQuery(delta=-1.0)
    with pytest.raises(DomainError):
        ThickThinQuery(beta=0.1, epsilon=0.2)


def test_sregion_algebra():
    r = SRegion(((-2.0, -1.0), (1.0, 2.0)))
    assert not r.empty
    assert r.contains(1.5) and not r.contains(0.0)
    assert r.is_symmetric()
    assert SRegion(((-1.0, 1.0),)).subset_of(SRegion(((-2.0, 2.0),)))
    assert not SRegion(((-3.0, 1.0),)).subset_of(SRegion(((-2.0, 2.0),)))
    with pytest.raises(DomainError):
        SRegion(((1.0, 0.0),))
    with pytest.raises(DomainError):
        SRegion(((0.0, 1.0), (0.5, 2.0)))


def test_thin_interval_trivial_cases():
    c = CollarParams(1.0)
    assert thin_interval(c, 0.5).empty            # delta <= min inj
    assert thin_interval(c, 0.2).empty
    full = thin_interval(c, c.inj_boundary + 0.1)  # delta above boundary value
    assert full.intervals == ((-c.half_width, c.half_width),)


def test_thin_interval_bisection_against_dense_scan_and_root():
    c = CollarParams(0.1)
    region = thin_interval(c, 0.2)
    (a, b), = region.intervals
    assert b == pytest.approx(S_EPS_01_02, abs=1e-9)
    assert a == pytest.approx(-b, abs=1e-12)
    s = np.linspace(0, np.nextafter(c.half_width, 0), 200001)
    inj = injectivity_radius(c, s)
    scan = s[inj < 0.2][-1]
    assert b == pytest.approx(scan, abs=2 * (s[1] - s[0]))
    # endpoint is a true level crossing
    assert injectivity_radius(c, b) == pytest.approx(0.2, abs=1e-11)


def test_thin_interval_monotone_in_delta():
    c = CollarParams(0.05)
    r1 = thin_interval(c, 0.1)
    r2 = thin_interval(c, 0.3)
    assert r1.subset_of(r2, tol=1e-12)


def test_epsilon_for_separation_frozen_values_and_guarantee():
    eps = epsilon_for_separation(ARS1, 10.0)
    assert eps == pytest.approx((1 - 1e-6) * EPS_ARS1_10, rel=1e-12)
    eps2 = epsilon_for_separation(0.5, 5.0)
    assert eps2 == pytest.approx((1 - 1e-6) * EPS_05_5, rel=1e-12)
    for beta, q in ((ARS1, 10.0), (0.5, 5.0), (0.2, 1.0), (1.5, 0.01)):
        e = epsilon_for_separation(beta, q)
        assert e < min(beta, ARS1)
        assert -math.log(math.sinh(e)) + math.log(math.sinh(beta) / (1 + math.sqrt(2))) > q
    # Q -> 0 limit: the Q-constraint goes inactive
    e = epsilon_for_separation(0.3, 1e-9)
    assert e == pytest.approx(
        (1 - 1e-6) * math.asinh(math.sinh(0.3) / (1 + math.sqrt(2))), rel=1e-6
    )
    with pytest.raises(DomainError):
        epsilon_for_separation(-1.0, 1.0)


def test_separation_check_reports_empty_regions():
    c = CollarParams(1.0)  # min inj = 0.5
    res = separation_check(c, beta=0.6, epsilon=0.1)
    assert res.thin_empty and res.distance is None
    with pytest.raises(DomainError):
        separation_check(c, beta=0.1, epsilon=0.2)


def test_separation_exceeds_target_when_nonempty():
    beta, q = ARS1, 10.0
    eps = epsilon_for_separation(beta, q)
    c = CollarParams(1e-5)  # min inj = 5e-6 < eps: both regions nonempty
    res = separation_check(c, beta, eps)
    assert not res.thick_empty and not res.thin_empty
    assert res.distance > q
    assert res.distance >= res.proof_lower_bound - 1e-9


def test_separation_against_proof_bound_mid_range():
    c = CollarParams(1e-3)
    res = separation_check(c, beta=ARS1, epsilon=ARS1 / 2)
    assert res.distance is not None and res.distance > 0
    assert res.distance >= res.proof_lower_bound  # bound is negative here


# -- nesting -------------------------------------------------------------------


def _profiles_for(ells, s_grid):
    return [InjProfile(s_grid, injectivity_radius(CollarParams(e), s_grid)) for e in ells]


def test_nested_sets_constant_schedule_is_static():
    s_grid = np.linspace(-2.0, 2.0, 21)
    profs = _profiles_for([0.5, 0.5, 0.5], s_grid)
    fam = nested_sets(profs, [0.0, 0.0, 0.0], k0=1.0, mu=0.1)
    assert fam.nested
    assert np.array_equal(fam.masks[0], fam.masks[-1])


def test_nested_sets_single_time_trivial():
    s_grid = np.linspace(-2.0, 2.0, 21)
    fam = nested_sets(_profiles_for([0.7], s_grid), [1.3], k0=0.05, mu=0.0)
    assert fam.nested


def test_nested_sets_detects_violations_with_too_small_k0():
    s_grid = np.linspace(-1.0, 1.0, 11)
    profs = _profiles_for([1.0, 0.005], s_grid)
    fam = nested_sets(profs, [1.0, 0.99], k0=0.01, mu=0.05)
    assert fam.n_violations > 0
    assert len(fam.violations) > 0
    s, t1, t2 = fam.violations[0]
    assert t1 < t2


def test_nested_sets_regions_view_and_validation():
    s_grid = np.linspace(-2.0, 2.0, 21)
    profs = _profiles_for([0.8, 0.4], s_grid)
    fam = nested_sets(profs, [0.5, 0.2], k0=0.05, mu=0.1)
    regs = fam.regions()
    assert len(regs) == 2
    assert regs[0].subset_of(regs[1], tol=1e-12) or regs[0].empty
    with pytest.raises(DomainError):
        nested_sets(profs, [0.2, 0.5], k0=0.05, mu=0.1)  # lengths increase
    with pytest.raises(DomainError):
        nested_sets(profs, [0.5, 0.2], k0=0.05, mu=0.1, mu_tilde=0.2)  # mu_tilde > mu


# -- descriptors ----------------------------------------------------------------


def test_descriptor_enumerations():
    valid, invalid = genus2_descriptor_cases()
    assert len(valid) == 6 and len(invalid) == 4
    for name, d in valid:
        rep = descriptor_validate(d)
        assert rep.passed, (name, rep.failures())
    for name, d in invalid:
        rep = descriptor_validate(d)
        assert not rep.passed, name


def test_descriptor_rejects_structural_misuse():
    d = SurfaceDescriptor(
        2, (CollarParams(0.5),), (ComponentSpec(1, ((0, 0), (0, 0))),)
    )
    rep = descriptor_validate(d)
    assert not rep.passed
    assert any(name == "ends_used_exactly_once" for name, _ in rep.failures())


def test_descriptor_json_round_trip():
    _, d = genus2_descriptor_cases()[0][5]  # maximal pants
    blob = json.dumps(d.to_dict(), sort_keys=True)
    back = SurfaceDescriptor.from_dict(json.loads(blob))
    assert back.to_dict() == d.to_dict()
    with pytest.raises(DomainError):
        SurfaceDescriptor.from_dict({"genus": 2})


def test_limit_decomposition_no_pinching():
    valid, _ = genus2_descriptor_cases()
    d = dict(valid)["maximal_pants"]
    lim = limit_decomposition(d, ())
    assert len(lim.components) == 1
    assert lim.components[0].genus == 2
    assert lim.total_punctures == 0


def test_limit_decomposition_separating_and_non_separating():
    valid, _ = genus2_descriptor_cases()
    cases = dict(valid)
    sep = limit_decomposition(cases["one_separating"], [0])
    assert len(sep.components) == 2
    assert all(cp.genus == 1 and cp.punctures == 1 for cp in sep.components)
    nonsep = limit_decomposition(cases["one_nonseparating"], [0])
    assert len(nonsep.components) == 1
    assert nonsep.components[0].genus == 1
    assert nonsep.components[0].punctures == 2
    assert nonsep.total_punctures == 2


def test_limit_decomposition_closure_under_validation():
    valid, _ = genus2_descriptor_cases()
    for name, d in valid:
        kappa = len(d.collars)
        for pinched in ([], list(range(kappa))):
            lim = limit_decomposition(d, pinched)
            assert descriptor_validate(lim.descriptor).passed, name
            assert lim.total_punctures == 2 * len(pinched)
            if pinched:
                assert all(cp.genus < d.genus for cp in lim.components)
            assert 1 <= len(lim.components) <= 2 * (d.genus - 1)


def test_limit_decomposition_rejects_invalid_descriptor():
    _, invalid = genus2_descriptor_cases()
    with pytest.raises(DomainError):
        limit_decomposition(dict(invalid)["euler_mismatch"], [0])
