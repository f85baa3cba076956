import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tpctf import analysis as A
from tpctf import filters as F


def test_tight_frame_examples():
    assert A.check_tight_frame(F.tensor_bank_2d(F.haar_bank(16)), 1e-12).passed
    rep = A.check_tight_frame(F.ctf_bank(6, 1024), 1e-8)
    assert rep.passed and rep.max_residual_pr1 <= 1e-8 and rep.max_residual_pr0 <= 1e-8
    assert rep.as_dict()["pass"] is True


def test_tight_frame_rejects_mixed_grids():
    a = F.ctf_bank(3, 64)
    b = F.ctf_bank(3, 128)
    mixed = F.FilterBank1D(3, a.lowpass, b.highpass)
    with pytest.raises(ValueError):
        A.check_tight_frame(mixed)


def test_orthogonal_wavelet_checks():
    ha, hb = (f.to_freq(64) for f in F.haar_filters())
    assert A.check_orthogonal_wavelet(ha, hb, 1e-12)
    assert not A.check_orthogonal_wavelet(ha, ha, 1e-8)
    _, _, a1, b1, a2, b2 = F.kingsbury_filters()
    # the printed taps are orthogonal to 1.08e-8, just above 1e-8
    assert A.check_orthogonal_wavelet(a1.to_freq(1024), b1.to_freq(1024), 1.1e-8)
    assert not A.check_orthogonal_wavelet(a1.to_freq(1024), b1.to_freq(1024), 1e-8)
    a0, b0 = F.kingsbury_filters()[:2]
    assert A.check_orthogonal_wavelet(a0.to_freq(1024), b0.to_freq(1024), 1e-12)


def test_kingsbury_diagnostics():
    a0, b0, a1, b1, a2, b2 = F.kingsbury_filters()
    assert (A.sum_rules(a0), A.sum_rules(a1)) == (2, 1)
    assert (A.vanishing_moments(b0), A.vanishing_moments(b1), A.vanishing_moments(b2)) == (2, 1, 1)
    assert A.smoothness_exponent(a0) == pytest.approx(1.509402, abs=1e-4)
    assert A.smoothness_exponent(a1) == pytest.approx(0.997590, abs=1e-4)
    # pinned to the full computed precision
    assert A.smoothness_exponent(a0) == pytest.approx(1.5094017514348885, abs=1e-10)
    assert A.smoothness_exponent(a1) == pytest.approx(0.9975899017758185, abs=1e-10)


def test_haar_diagnostics():
    a, b = F.haar_filters()
    assert A.sum_rules(a) == 1 and A.vanishing_moments(b) == 1
    assert A.smoothness_exponent(a) == pytest.approx(0.5, abs=1e-12)


def test_smoothness_needs_sum_rule():
    with pytest.raises(ValueError):
        A.smoothness_exponent(F.TimeFilter(0, np.array([1.0])))


@given(st.integers(-20, 20), st.sampled_from([0, 2]))
def test_diagnostics_shift_invariant(k, which):
    a = F.kingsbury_filters()[which]
    s = F.shift(a, k)
    assert A.sum_rules(s) == A.sum_rules(a)
    assert A.smoothness_exponent(s) == pytest.approx(A.smoothness_exponent(a), abs=1e-9)
    b = F.highpass_from_lowpass(a)
    assert A.vanishing_moments(F.shift(b, k)) == A.vanishing_moments(b)


def test_separation_level1():
    m0 = F.build_meyer_orthogonal(189 / 256, 1, 1024)[0]
    rep = A.separation_level1(m0)
    assert rep.pointwise_dev <= 1e-8
    assert rep.integral == pytest.approx(np.pi - 2, abs=1e-4)
    k0 = F.kingsbury_filters()[0].to_freq(1024)
    rk = A.separation_level1(k0)
    assert rk.pointwise_dev <= 1e-8
    assert rk.integral == pytest.approx(rep.integral, abs=1e-4)
    assert set(rep.factor_curves) == {"xi", *A.FACTOR_KINDS}


def test_separation_level1_many_orthogonal_filters():
    vals = []
    for eps in (0.2, 0.5, 189 / 256, 1.0, np.pi / 2):
        rep = A.separation_level1(F.build_meyer_orthogonal(eps, 1, 1024)[0])
        assert rep.pointwise_dev <= 1e-8
        vals.append(rep.integral)
    rep = A.separation_level1(F.haar_filters()[0].to_freq(1024))
    assert rep.pointwise_dev <= 1e-8
    vals.append(rep.integral)
    assert max(vals) - min(vals) <= 1e-4


def test_separation_level1_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        A.separation_level1(F.ctf_bank(3, 256).a)


def test_separation_factor_examples():
    assert A.separation_factor("sin", np.pi / 2) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert A.separation_factor("ideal", -0.1) == 0.0
    assert A.separation_factor("ideal", 0.0) == pytest.approx(math.sqrt(2), abs=1e-15)
    with pytest.raises(ValueError):
        A.separation_factor("cos", 0.0)
    for kind in A.FACTOR_KINDS:
        assert A.factor_energy(kind) == pytest.approx(2 * np.pi, abs=1e-6)


def test_half_shift_deviation():
    _, m1, m2 = F.build_meyer_orthogonal(189 / 256, 1, 1024)
    assert A.half_shift_deviation(m1, m2) <= 1e-12
    _, _, a1, _, a2, _ = F.kingsbury_filters()
    dev = A.half_shift_deviation(a1.to_freq(4096), a2.to_freq(4096))
    assert dev == pytest.approx(0.14702743020185044, abs=1e-10)
    assert A.half_shift_deviation(m1, m1) > 0.1
    with pytest.raises(ValueError):
        A.half_shift_deviation(m1, a1.to_freq(64))


def test_theta_identity_examples():
    assert A.theta_identity_check(5.3) == (5.0, 5.0)
    assert A.theta_identity_check(0.0) == (0.0, 0.0)
    assert A.theta_identity_check(-2.7) == (-2.0, -2.0)
    with pytest.raises(ValueError):
        A.theta_identity_check(1e30, terms=8)


def test_theta_identity_random(rng):
    xi = rng.uniform(-100, 100, 100_000)
    # breakpoints of the floor sum sit at the integers
    xi = xi[np.abs(xi - np.round(xi)) > 1e-9]
    lhs, rhs = A.theta_identity_check(xi)
    assert np.array_equal(lhs, rhs)


def test_direction_counts():
    assert [A.direction_count(n) for n in (3, 4, 5, 6)] == [4, 6, 8, 14]
    with pytest.raises(ValueError):
        A.direction_count(2)
    for n in (3, 4, 6):
        bank2 = F.tensor_bank_2d(F.ctf_bank(n, 256))
        assert len(A.distinct_directions(bank2)) == A.direction_count(n)
    b5 = F.tensor_bank_2d(F.build_ctf(F.special_params(5, 0.8, 0.35), 256))
    assert len(A.distinct_directions(b5)) == 8


def test_positive_concentration():
    bank = F.ctf_bank(6, 1024)
    for f in bank.highpass[:2]:
        assert A.positive_concentration(f) > 0.9
    for f in bank.highpass[2:]:
        assert A.positive_concentration(f) < 0.1


def test_bank_report():
    rep = A.bank_report(F.ctf_bank(6, 256))
    assert rep["tight_frame_1d"]["pass"] and rep["tight_frame_2d"]["pass"]
    assert rep["highpass_count_2d"] == 32
    assert len(rep["directions_2d"]) == rep["direction_count_formula"] == 14
