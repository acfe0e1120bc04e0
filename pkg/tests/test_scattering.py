import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracshell.interaction import LambdaParams, Strengths, canonical_case, lambda_from_strengths, permeability
from diracshell.resonance import family, find_resonances
from diracshell.scattering import (
    phase_shift,
    phase_shift_scan,
    tan_phase_shift,
    time_delay_tan_form,
    wigner_time_delay,
)
from diracshell.spectrum import PhysicalParams

P1 = PhysicalParams(2, 1, 1)
P2 = PhysicalParams(2, 1, 2)


def scalar_closed_form(B, E, m, R, l):
    """tan(delta) of the scalar shell written directly in B, evaluated with mpmath."""
    with mpmath.workdps(30):
        z = R * mpmath.sqrt(E * E - m * m)
        J0, J1 = mpmath.besselj(l, z), mpmath.besselj(l + 1, z)
        Y0, Y1 = mpmath.bessely(l, z), mpmath.bessely(l + 1, z)
        num = 2 * mpmath.pi * B * R * ((E - m) * J1**2 - (E + m) * J0**2)
        den = B**2 + 2 * mpmath.pi * B * R * ((E - m) * J1 * Y1 - (E + m) * J0 * Y0) + 4
        return float(num / den)


def random_lambda(rng):
    while True:
        s = Strengths(*rng.uniform(-5, 5, 4))
        if permeability(s):
            return lambda_from_strengths(s)


def test_free_case_is_trivial():
    lam = LambdaParams.identity()
    for l in range(4):
        params = P1.with_l(l)
        for E in (2.1, 5.0, -3.3, -11.0):
            assert tan_phase_shift(E, params, lam) == 0.0
            assert wigner_time_delay(E, params, lam) == 0.0
    scan = phase_shift_scan(P1, lam, np.linspace(2.01, 10, 50))
    assert all(p.delta == 0 and p.tau == 0 for p in scan)


def test_scalar_closed_form():
    lam = lambda_from_strengths(Strengths(B=1))
    assert tan_phase_shift(3.0, P1, lam) == pytest.approx(scalar_closed_form(1, 3, 2, 1, 1), rel=1e-12, abs=1e-12)
    for B, E in [(-1.2, 4.5), (0.7, -6.0), (1.9, 2.3)]:
        lam = lambda_from_strengths(Strengths(B=B))
        assert tan_phase_shift(E, P1, lam) == pytest.approx(scalar_closed_form(B, E, 2, 1, 1), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("B", [-1.2, 0.3, 1.5])
def test_scalar_duality(B):
    l1 = lambda_from_strengths(Strengths(B=B))
    l2 = lambda_from_strengths(Strengths(B=4 / B))
    for E in (2.5, 4.0, -3.0, -9.0):
        assert tan_phase_shift(E, P1, l1) == pytest.approx(tan_phase_shift(E, P1, l2), rel=1e-10, abs=1e-14)


def test_domain_errors():
    lam = LambdaParams.identity()
    for E in (0.0, 2.0, -2.0):
        with pytest.raises(ValueError):
            tan_phase_shift(E, P1, lam)
        with pytest.raises(ValueError):
            wigner_time_delay(E, P1, lam)
    with pytest.raises(ValueError):
        wigner_time_delay(3.0, P1, lam, method="spline")
    with pytest.raises(ValueError):
        phase_shift_scan(P1, lam, [-3.0, 3.0])


def test_phase_consistent_with_tan():
    lam = lambda_from_strengths(Strengths(A0=1.3, Ar=0.4))
    for E in (2.2, 6.0, -4.0):
        d = phase_shift(E, P2, lam)
        assert -math.pi / 2 < d <= math.pi / 2
        assert math.tan(d) == pytest.approx(tan_phase_shift(E, P2, lam), rel=1e-9)


def test_analytic_vs_finite_difference():
    rng = np.random.default_rng(7)
    for _ in range(50):
        lam = random_lambda(rng)
        params = PhysicalParams(2, 1, int(rng.integers(0, 5)))
        E = float(rng.choice([-1, 1]) * rng.uniform(2.2, 12))
        ta = wigner_time_delay(E, params, lam)
        tf = wigner_time_delay(E, params, lam, method="finite_difference")
        assert tf == pytest.approx(ta, rel=1e-6, abs=1e-9)


def test_two_forms_agree_away_from_poles():
    rng = np.random.default_rng(3)
    for _ in range(50):
        lam = random_lambda(rng)
        E = float(rng.choice([-1, 1]) * rng.uniform(2.2, 12))
        if abs(tan_phase_shift(E, P2, lam)) > 1e3:
            continue
        assert time_delay_tan_form(E, P2, lam) == pytest.approx(wigner_time_delay(E, P2, lam), rel=1e-8, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.tuples(*[st.floats(-5, 5)] * 4).map(lambda t: Strengths(*t)).filter(permeability),
    st.floats(2.05, 12.0),
    st.sampled_from([1, -1]),
    st.integers(0, 4),
)
def test_sign_flip_invariance(s, E, sign, l):
    lam = lambda_from_strengths(s)
    params = PhysicalParams(2, 1, l)
    t1 = tan_phase_shift(sign * E, params, lam)
    t2 = tan_phase_shift(sign * E, params, lam.negated())
    assert t1 == t2 or t1 == pytest.approx(t2, rel=1e-12)


def test_scan_continuity_and_order():
    lam = lambda_from_strengths(canonical_case("delta", -1.0))
    for grid in (np.linspace(2.001, 12, 300), np.linspace(-12, -2.001, 300)):
        pts = phase_shift_scan(P2, lam, grid)
        Es = [p.E for p in pts]
        assert Es == sorted(Es)
        assert max(abs(b.delta - a.delta) for a, b in zip(pts, pts[1:])) < math.pi / 2
        for p in pts[::37]:
            assert math.tan(p.delta) == pytest.approx(p.tan_delta, rel=1e-9, abs=1e-12)


def test_scan_refines_coarse_grid():
    lam = lambda_from_strengths(canonical_case("delta", -1.0))
    pts = phase_shift_scan(P2, lam, [2.1, 12.0])
    assert len(pts) > 2
    assert max(abs(b.delta - a.delta) for a, b in zip(pts, pts[1:])) < math.pi / 2


def test_scan_threads_match_serial():
    lam = lambda_from_strengths(Strengths(B=-1))
    grid = np.linspace(2.01, 12, 120)
    assert phase_shift_scan(P1, lam, grid) == phase_shift_scan(P1, lam, grid, workers=4)


def test_delta_steps_by_pi_across_sharp_resonances():
    lam = lambda_from_strengths(canonical_case("delta", -1.0))
    roots = find_resonances(family("delta"), P2, strength=-1.0)
    sharp = [r for r in roots if abs(r.E_R) > 2.5 and -0.15 < r.E_I < 0]
    assert sharp
    k = 10
    for r in sharp:
        width = abs(r.E_I)
        w = k * width
        pts = phase_shift_scan(P2, lam, np.linspace(r.E_R - w, r.E_R + w, 400))
        # remove the smooth background: edge tau minus the Breit-Wigner tail
        tail = 2 * width / (w * w + width * width)
        background = 0.5 * (pts[0].tau + pts[-1].tau - 2 * tail) * w
        step = pts[-1].delta - pts[0].delta - background
        # resonant part rises by 2 atan(k), approaching pi
        assert step == pytest.approx(2 * math.atan(k), abs=0.05)
