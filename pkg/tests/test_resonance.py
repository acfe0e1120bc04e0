import math

import numpy as np
import pytest
from scipy import optimize

from diracshell import specfun
from diracshell.interaction import (
    Strengths,
    canonical_case,
    delta_shell_wall,
    lambda_from_strengths,
)
from diracshell.resonance import (
    ComplexEnergy,
    continuation,
    family,
    find_resonances,
    outgoing_residual,
    trace_locus,
)
from diracshell.spectrum import (
    PhysicalParams,
    bound_states,
    confined_spectrum,
    electro_critical_strengths,
    electro_supercritical_strengths,
    scalar_critical_strengths,
    secular_bound_residual,
)

P1 = PhysicalParams(2, 1, 1)
P2 = PhysicalParams(2, 1, 2)
P4 = PhysicalParams(2, 1, 4)


def lam_of(case, g):
    return lambda_from_strengths(canonical_case(case, g))


def magnetic_atheta(a):
    # a^2 = (2 + Atheta)^2 / (2 - Atheta)^2 with Ar = 0
    return 2 * (a - 1) / (a + 1)


def test_complex_energy_contract():
    c = ComplexEnergy(1.0, -0.25)
    assert c.E == complex(1, -0.25)
    assert c.lifetime_scale == pytest.approx(4.0)
    assert ComplexEnergy(0.5, 0.0).lifetime_scale == math.inf
    with pytest.raises(ValueError):
        ComplexEnergy(1.0, 0.1)


def test_residual_continues_bound_residual():
    for case, g in [("delta", -1.0), ("scalar", 0.7), ("electrostatic", 3.0), ("magnetic", (1.0, 0.5))]:
        lam = lam_of(case, g)
        for E in np.linspace(-1.99, 1.99, 9):
            s = outgoing_residual(E, P2, lam)
            assert abs(s.imag) <= 1e-12 * max(1.0, abs(s))
            assert s.real == pytest.approx(secular_bound_residual(E, P2, lam), rel=1e-12, abs=1e-12)


def test_free_residual_is_one_over_r():
    lam = lambda_from_strengths(Strengths())
    for E in (-5 - 0.3j, 0.5, 3 - 1j, 7.0):
        assert outgoing_residual(E, PhysicalParams(2, 0.5, 3), lam) == pytest.approx(2.0, rel=1e-12)


def test_residual_vectorized():
    lam = lam_of("delta", -1.0)
    Es = np.array([3 - 0.2j, -4 - 1j, 0.5])
    out = outgoing_residual(Es, P2, lam)
    for E, v in zip(Es, out):
        assert v == pytest.approx(outgoing_residual(complex(E), P2, lam), rel=1e-14)


def test_delta_roots_satisfy_hankel_form():
    A0 = -1.0
    for r in find_resonances(family("delta"), P2, strength=A0):
        if r.kind != "resonance":
            continue
        E = r.E
        z = np.sqrt(E - 2) * np.sqrt(E + 2)
        lhs = (E + 2) * specfun.bessel_j(2, z) * specfun.hankel(1, 2, z)
        assert abs(lhs - 1j / (math.pi * A0)) < 1e-8


def test_electrostatic_roots_satisfy_hankel_form():
    A0 = 2.5
    for r in find_resonances(family("electrostatic"), P2, strength=A0):
        if r.kind != "resonance":
            continue
        E = r.E
        z = np.sqrt(E - 2) * np.sqrt(E + 2)
        lhs = (E + 2) * specfun.bessel_j(2, z) * specfun.hankel(1, 2, z) + (E - 2) * specfun.bessel_j(3, z) * specfun.hankel(1, 3, z)
        assert abs(lhs - 1j * (4 - A0**2) / (2 * math.pi * A0)) < 1e-8


def test_scalar_locus_shape():
    fam = family("scalar")
    L = trace_locus(fam, P1, (-6, 6, -2, 0))
    assert len(L.branches) == 6
    for br, vals in zip(L.branches, L.values):
        assert np.all(np.abs(fam.f(br, P1).imag) <= 1e-8)
        assert np.all(np.isfinite(vals))
        assert br.imag.min() == pytest.approx(-2.0)
    reaching = [b for b in L.branches if b.imag.max() > -1e-6]
    # one U closes below the axis, the others rise from the bottom edge to the axis
    assert len(reaching) == 5
    closed = [b for b in L.branches if b.imag.max() <= -1e-6]
    assert closed[0][0].imag == pytest.approx(-2.0) and closed[0][-1].imag == pytest.approx(-2.0)

    touch = sorted(float(b[np.argmax(b.imag)].real) for b in reaching)
    assert touch[1] == pytest.approx(-2.0, abs=1e-3) or touch[2] == pytest.approx(-2.0, abs=1e-3)
    assert any(t == pytest.approx(2.0, abs=1e-3) for t in touch)

    # touchpoints outside the gap are sign changes of Im f just below the axis
    def im_f(x):
        return float(fam.f(complex(x, -1e-12), P1).imag)

    xs = np.concatenate([np.linspace(-6, -2.001, 4000), np.linspace(2.001, 6, 4000)])
    vals = np.array([im_f(x) for x in xs])
    axis = []
    for i in range(len(xs) - 1):
        if vals[i] * vals[i + 1] < 0 and abs(xs[i + 1] - xs[i]) < 0.01:
            x = optimize.brentq(im_f, xs[i], xs[i + 1])
            if abs(fam.f(complex(x, -1e-12), P1)) < 1e6:
                axis.append(x)
    outside = [t for t in touch if abs(t) > 2.001]
    for t in outside:
        assert min(abs(t - x) for x in axis) < 1e-3


def test_delta_locus_is_asymmetric():
    fam = family("delta")
    L = trace_locus(fam, P2, (-12, 12, -3, 0))
    pts = np.array([c.E for c in L.points])
    assert np.all(np.abs(fam.f(pts, P2).imag) <= 1e-8)
    mirrored = -pts.real + 1j * pts.imag
    assert np.max(np.abs(fam.f(mirrored, P2).imag)) > 1e-3
    assert len(L) == pts.size


def test_empty_locus_allowed():
    L = trace_locus(family("scalar"), P1, (6.0, 6.5, -0.01, -0.005), resolution=(5, 5))
    assert len(L) >= 0


def test_family_validation():
    with pytest.raises(ValueError):
        family("vector")


def test_threshold_examples():
    roots = find_resonances(family("electrostatic"), P2, strength=1.070368)
    assert [r for r in roots if r.kind == "supercritical" and r.E_R == -2.0]
    roots = find_resonances(family("electrostatic"), P2, strength=4.828427)
    assert [r for r in roots if r.kind == "critical" and r.E_R == 2.0]
    roots = find_resonances(family("delta"), P2, strength=-0.5)
    assert [r for r in roots if r.kind == "critical" and r.E_R == 2.0]


def test_family_and_general_modes_agree():
    lam = lam_of("delta", -1.0)
    fam = find_resonances(family("delta"), P2, strength=-1.0)
    gen = find_resonances(lam, P2)
    assert len(fam) == len(gen) == 8
    for a, b in zip(fam, gen):
        assert abs(a.E - b.E) < 1e-8
    assert fam == sorted(fam, key=lambda r: (r.E_R, r.E_I))
    for r in fam:
        assert abs(outgoing_residual(r.E, P2, lam)) < 1e-8
        assert r.E_I <= 0


def test_delta_reference_roots():
    # independent seeds: Newton from the general mode at coarse guesses
    expected = [-8.94506 - 0.53159j, -5.82199 - 0.54575j, -2.68577 - 0.65998j, -1.32116 - 0.36238j,
                0.758305, 1.73908 - 0.19941j, 5.80022 - 0.091212j, 8.98119 - 0.11915j]
    got = [r.E for r in find_resonances(family("delta"), P2, strength=-1.0)]
    for e, g in zip(expected, got):
        assert abs(e - g) < 2e-5


def test_real_roots_are_bound_states():
    for case, g, params in [("delta", -1.0, P2), ("scalar", -1.2, P1), ("electrostatic", 6.0, P2)]:
        lam = lam_of(case, g)
        bound = [s.E for s in bound_states(params, lam)]
        roots = find_resonances(family(case), params, strength=g)
        real = [r.E_R for r in roots if r.kind == "bound"]
        assert len(real) == len(bound)
        for e in real:
            assert min(abs(e - b) for b in bound) <= 1e-9


def test_diagnostics_for_failed_seeds():
    diag = []
    find_resonances(lam_of("delta", -1.0), P2, seeds=[0.0 - 2.9j, 50 - 0.5j], diagnostics=diag)
    assert all(isinstance(d, str) for d in diag)


def test_family_mode_needs_strength():
    with pytest.raises(ValueError):
        find_resonances(family("delta"), P2)


def test_empty_box_finds_nothing_but_bound_states():
    roots = find_resonances(family("delta"), P2, strength=-1.0, box=(20, 21, -0.1, 0))
    assert [r.kind for r in roots] == ["bound"]


def test_electrostatic_continuation_events():
    grid = np.linspace(0.5, 6, 111)
    cont = continuation("electrostatic", grid, P2, track=False)
    events = [(e.kind, e.threshold) for e in cont.events]
    assert events == [("capture", "supercritical"), ("emission", "critical")]
    assert cont.events[0].strength == pytest.approx(electro_supercritical_strengths(P2)[0], abs=1e-9)
    assert cont.events[1].strength == pytest.approx(electro_critical_strengths(P2)[0], abs=1e-9)


def test_scalar_continuation_events():
    crit = max(scalar_critical_strengths(P1))
    down = continuation("scalar", np.linspace(-0.01, -1.99, 100), P1, track=False)
    assert [(e.kind, e.threshold) for e in down.events] == [("capture", "critical")]
    assert down.events[0].strength == pytest.approx(crit, abs=1e-6)
    up = continuation("scalar", np.linspace(-1.99, -0.01, 100), P1, track=False)
    assert [e.kind for e in up.events] == ["emission"]
    assert up.events[0].strength == pytest.approx(crit, abs=1e-6)


def test_magnetic_continuation_has_no_events():
    a = np.geomspace(1e-3, 1e3, 41)
    cont = continuation("magnetic", [magnetic_atheta(x) for x in a], P4, track=False)
    assert cont.events == []
    assert set(cont.bound_counts) == {0}


def test_continuation_tracks_roots():
    cont = continuation("delta", np.linspace(-1.2, -0.8, 5), P2, box=(-6, 6, -1, 0), resolution=(121, 31))
    assert cont.trajectories
    for t in cont.trajectories:
        assert len(t.strengths) == len(t.energies)
        steps = [abs(b.E - a.E) for a, b in zip(t.energies, t.energies[1:])]
        assert all(s < 0.5 for s in steps)


def test_continuation_rejects_non_monotone():
    with pytest.raises(ValueError):
        continuation("delta", [-1.0, -0.5, -0.8], P2, track=False)


def test_delta_limit_near_real_roots_match_confined_levels():
    A0 = -1e6
    roots = find_resonances(family("delta"), P2, strength=A0)
    bc = delta_shell_wall()
    levels = confined_spectrum(bc, P2, 12.5) + confined_spectrum(bc, P2, 12.5, branch="antiparticle")
    near_real = [r for r in roots if abs(r.E_I) < 1e-4 and abs(r.E_R) > 2.001]
    assert len(near_real) == len(levels)
    for r in near_real:
        assert min(abs(r.E_R - e) for e in levels) < 1e-3


def test_delta_limit_remaining_roots_are_hankel_zeros():
    roots = find_resonances(family("delta"), P2, strength=-1e6)
    others = [r for r in roots if abs(r.E_I) >= 1e-4]
    assert others
    for r in others:
        z = np.sqrt(r.E - 2) * np.sqrt(r.E + 2)
        assert abs(specfun.hankel(1, 2, z)) < 1e-5


@pytest.mark.xfail(strict=True, reason="roots at zeros of H_l(pR) keep a finite width as |A0| grows")
def test_delta_limit_all_roots_become_real():
    roots = find_resonances(family("delta"), P2, strength=-1e6)
    assert all(abs(r.E_I) < 1e-4 for r in roots)


def test_magnetic_small_a_remnants_hug_thresholds():
    At = magnetic_atheta(1e-3)
    roots = find_resonances(lambda_from_strengths(canonical_case("magnetic", (0.0, At))), P4)
    near = [r for r in roots if abs(abs(r.E_R) - 2) < 1e-3 and abs(r.E_I) < 1e-6]
    assert sorted(np.sign(r.E_R) for r in near) == [-1, 1]
    assert all(abs(r.E_R) > 2 for r in near)


@pytest.mark.xfail(strict=True, reason="no near-threshold roots survive as a grows large")
def test_magnetic_large_a_remnants():
    At = magnetic_atheta(1e3)
    roots = find_resonances(lambda_from_strengths(canonical_case("magnetic", (0.0, At))), P4)
    near = [r for r in roots if 2 < abs(r.E_R) < 2.1 and abs(r.E_I) < 0.1]
    assert len(near) == 2
