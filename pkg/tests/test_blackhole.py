import warnings
from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfl import blackhole as bh
from qfl.bogoliubov import bose_einstein, hawking_spectrum
from qfl.errors import InvalidArgument, OutOfScope

masses = st.floats(1e-3, 1e3)
couplings = st.floats(1e-3, 1e3)


def test_unit_hole():
    d = bh.schwarzschild(bh.BlackHoleParams(M=1.0))
    assert d.r_h == 2.0
    assert d.A == pytest.approx(16 * pi, rel=1e-15)
    assert d.A == pytest.approx(50.2655, abs=1e-4)
    assert d.S == pytest.approx(12.5664, abs=1e-4)
    assert d.T == pytest.approx(0.0397887, abs=1e-7)
    assert d.kappa == pytest.approx(0.25, rel=1e-15)


@given(masses, couplings)
def test_derived_invariants(M, G):
    d = bh.schwarzschild(bh.BlackHoleParams(M=M, G=G))
    assert d.r_h == pytest.approx(2 * G * M, rel=1e-15)
    assert d.S == pytest.approx(4 * pi * G * M**2, rel=1e-12)
    assert d.T * d.S == pytest.approx(M / 2, rel=1e-12)
    assert d.S / d.A == pytest.approx(1 / (4 * G), rel=1e-12)
    assert d.kappa == pytest.approx(2 * pi * d.T, rel=1e-15)


@given(masses, couplings)
def test_smarr_identity(M, G):
    d = bh.schwarzschild(bh.BlackHoleParams(M=M, G=G))
    assert abs(2 * d.T * d.S - M) <= 1e-12 * M


@pytest.mark.parametrize("M", [0.1, 1.0, 7.5])
def test_mass_doubling(M):
    d1 = bh.schwarzschild(bh.BlackHoleParams(M=M))
    d2 = bh.schwarzschild(bh.BlackHoleParams(M=2 * M))
    assert d2.A / d1.A == pytest.approx(4, rel=1e-14)
    assert d2.T / d1.T == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_rescaling_invariance(lam):
    M, G = 1.3, 0.7
    a = bh.schwarzschild(bh.BlackHoleParams(M=M, G=G))
    b = bh.schwarzschild(bh.BlackHoleParams(M=lam * M, G=G / lam))
    # GM is the only scale, so T, r_h and A are invariant
    assert (lam * M) * (G / lam) == pytest.approx(M * G, rel=1e-15)
    assert b.T == pytest.approx(a.T, rel=1e-12)
    assert b.r_h == pytest.approx(a.r_h, rel=1e-12)
    assert b.A == pytest.approx(a.A, rel=1e-12)
    # S = A/4G and T*M each pick up one power of lambda
    assert b.S == pytest.approx(lam * a.S, rel=1e-12)
    assert b.T * (lam * M) == pytest.approx(lam * a.T * M, rel=1e-12)


# --- first law -------------------------------------------------------------------

def test_first_law_unit_hole():
    p = bh.BlackHoleParams(M=1.0)
    dS, dM_over_T, resid = bh.first_law_check(p, 1e-4)
    assert resid < 1e-6
    assert dS / 1e-4 == pytest.approx(8 * pi, rel=1e-4)
    assert dM_over_T / 1e-4 == pytest.approx(8 * pi, rel=1e-12)


@pytest.mark.parametrize("M,G", [(1.0, 1.0), (3.0, 0.5), (0.2, 2.0)])
def test_first_law_second_order(M, G):
    p = bh.BlackHoleParams(M=M, G=G)
    dM = 1e-3 * M
    r1 = bh.first_law_check(p, dM)[2]
    r2 = bh.first_law_check(p, dM / 2)[2]
    assert r1 / r2 == pytest.approx(4, rel=0.2)
    # Richardson oracle: the leading error term is the curvature of S(M)
    assert r1 == pytest.approx(4 * pi * G * dM**2, rel=1e-4)


def test_derivative_level_identity():
    for M in (0.5, 1.0, 4.0):
        assert 8 * pi * M == pytest.approx(1 / bh.hawking_temperature(M), rel=1e-15)


def test_first_law_warns_on_large_step():
    with pytest.warns(UserWarning, match="dM/M"):
        bh.first_law_check(bh.BlackHoleParams(M=1.0), 0.05)


def test_first_law_quiet_on_small_step():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bh.first_law_check(bh.BlackHoleParams(M=1.0), 1e-3)


@pytest.mark.parametrize("dM", [0.0, -1e-4])
def test_first_law_rejects_nonpositive_step(dM):
    with pytest.raises(InvalidArgument):
        bh.first_law_check(bh.BlackHoleParams(M=1.0), dM)


# --- area theorem ------------------------------------------------------------------

def test_equal_mass_merger():
    merged, total, ok = bh.area_theorem_check(1.0, 1.0)
    assert merged == pytest.approx(64 * pi, rel=1e-15)
    assert total == pytest.approx(32 * pi, rel=1e-15)
    assert ok


def test_random_mergers():
    rng = np.random.default_rng(2024)
    pairs = rng.uniform(1e-3, 1e3, size=(1000, 2))
    assert all(bh.area_theorem_check(m1, m2)[2] for m1, m2 in pairs)


@given(masses, masses, couplings)
def test_merger_strict_increase(M1, M2, G):
    merged, total, ok = bh.area_theorem_check(M1, M2, G)
    assert ok and merged > total


def test_light_companion_limit():
    A1 = bh.horizon_area(1.0)
    gaps = [bh.area_theorem_check(1.0, m2)[0] - A1 for m2 in (1e-2, 1e-4, 1e-6)]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    for m2, gap in zip((1e-2, 1e-4, 1e-6), gaps):
        assert gap == pytest.approx(32 * pi * m2, rel=1e-2)


def test_area_theorem_rejects_nonpositive_mass():
    with pytest.raises(InvalidArgument):
        bh.area_theorem_check(1.0, 0.0)


# --- scope and errors --------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"J": 0.1}, {"Q": 0.2}, {"Omega": 0.1}, {"Phi": -1.0}])
def test_out_of_scope(kw):
    with pytest.raises(OutOfScope):
        bh.BlackHoleParams(M=1.0, **kw)


@pytest.mark.parametrize("M,G", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (float("nan"), 1.0)])
def test_invalid_params(M, G):
    with pytest.raises(InvalidArgument):
        bh.BlackHoleParams(M=M, G=G)


# --- cross-module ------------------------------------------------------------------

@given(st.floats(1e-3, 1.0), st.floats(0.1, 10), st.floats(0.1, 10))
def test_hawking_spectrum_coherent_with_temperature(w, M, G):
    T = bh.schwarzschild(bh.BlackHoleParams(M=M, G=G)).T
    ref = bose_einstein(w, T)
    assert abs(hawking_spectrum(w, M, G) - ref) <= 1e-12 * max(1.0, ref)


def test_report_keys():
    rep = bh.blackhole_report(bh.BlackHoleParams(M=1.0))
    assert list(rep) == ["M", "G", "r_h", "A", "kappa", "T", "S", "first_law_residual"]
    assert rep["S"] == pytest.approx(4 * pi)
