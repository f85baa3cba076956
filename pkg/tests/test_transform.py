import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from tpctf import filters as F
from tpctf import transform as T


def _random_time_filter(rng, support, offset):
    c = rng.normal(size=support) + 1j * rng.normal(size=support)
    return F.TimeFilter(offset, c)


# --- operators against the brute-force oracle ------------------------------------

@given(st.integers(1, 8), st.integers(1, 5), st.integers(-4, 4), st.integers(0, 2 ** 32 - 1))
def test_transition_subdivision_1d_oracle(half, support, offset, seed):
    rng = np.random.default_rng(seed)
    n = 2 * half
    f = _random_time_filter(rng, support, offset)
    taps = oracles.periodic_taps(f.coeffs, f.offset, n)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.max(np.abs(T.transition(v, f.to_freq(n)) - oracles.transition_1d(v, taps))) <= 1e-12
    u = rng.normal(size=half) + 1j * rng.normal(size=half)
    assert np.max(np.abs(T.subdivision(u, f.to_freq(n)) - oracles.subdivision_1d(u, taps))) <= 1e-12


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_transition_subdivision_2d_oracle(hh, hw, support, seed):
    rng = np.random.default_rng(seed)
    h, w = 2 * hh, 2 * hw
    r = _random_time_filter(rng, support, -1)
    c = _random_time_filter(rng, int(rng.integers(1, 6)), 0)
    tf = F.TensorFilter(r.to_freq(h), c.to_freq(w))
    taps = np.multiply.outer(oracles.periodic_taps(r.coeffs, r.offset, h),
                             oracles.periodic_taps(c.coeffs, c.offset, w))
    v = rng.normal(size=(h, w)) + 1j * rng.normal(size=(h, w))
    assert np.max(np.abs(T.transition(v, tf) - oracles.transition_2d(v, taps))) <= 1e-12
    u = rng.normal(size=(hh, hw))
    assert np.max(np.abs(T.subdivision(u, tf) - oracles.subdivision_2d(u, taps))) <= 1e-12


def test_transition_examples(rng):
    haar = F.haar_filters()[0].to_freq(8)
    delta = np.zeros(8)
    delta[0] = 1
    assert np.allclose(T.transition(delta, haar), [1, 0, 0, 0], atol=1e-15)
    ident = F.TimeFilter(0, np.array([1.0])).to_freq(16)
    v = rng.normal(size=16)
    assert np.allclose(T.transition(v, ident), 2 * v[::2], atol=1e-14)
    u, w = rng.normal(size=16), rng.normal(size=16)
    f = F.ctf_bank(3, 64).highpass[0]
    lin = T.transition(2 * u - 3j * w, f) - (2 * T.transition(u, f) - 3j * T.transition(w, f))
    assert np.max(np.abs(lin)) <= 1e-12
    with pytest.raises(ValueError):
        T.transition(np.ones(7), F.TimeFilter(0, np.array([1.0])).to_freq(8))


def test_subdivision_examples(rng):
    haar = F.haar_filters()[0].to_freq(8)
    delta = np.zeros(4)
    delta[0] = 1
    assert np.allclose(T.subdivision(delta, haar), [1, 1, 0, 0, 0, 0, 0, 0], atol=1e-15)
    ident = F.TimeFilter(0, np.array([1.0])).to_freq(16)
    v = rng.normal(size=8)
    up = np.zeros(16)
    up[::2] = v
    assert np.allclose(T.subdivision(v, ident), 2 * up, atol=1e-14)
    f = F.ctf_bank(6, 64).highpass[1]
    u = rng.normal(size=32) + 1j * rng.normal(size=32)
    w = rng.normal(size=64) + 1j * rng.normal(size=64)
    assert abs(np.vdot(w, T.subdivision(u, f)) - np.vdot(T.transition(w, f), u)) <= 1e-10


# --- decompose / reconstruct -------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 6])
def test_constant_signal_has_no_highpass(n):
    bank = F.ctf_bank(n, 64)
    p = T.decompose(np.full((64, 64), 7.0), bank, 3)
    for _, _, kind, arr in p.entries():
        if kind == "highpass":
            assert np.max(np.abs(arr)) <= 1e-10


def test_haar_checkerboard():
    img = np.indices((8, 8)).sum(axis=0) % 2 * 2.0 - 1.0
    p = T.decompose(img, F.haar_bank(8), 1)
    e = {lab: float(np.sum(np.abs(a) ** 2)) for lab, a in p.highpass[0].items()}
    assert e["bxb"] == pytest.approx(64.0, abs=1e-12)
    assert e["axb"] <= 1e-24 and e["bxa"] <= 1e-24
    assert np.sum(np.abs(p.lowpass) ** 2) <= 1e-24


def test_energy_identity_2d(rng):
    v = rng.normal(size=(64, 64))
    p = T.decompose(v, F.ctf_bank(6, 64), 3)
    assert abs(T.energy(p) - np.sum(v ** 2)) <= 1e-10 * np.sum(v ** 2)
    assert T.energy(T.decompose(2 * v, F.ctf_bank(6, 64), 3)) == pytest.approx(4 * T.energy(p), rel=1e-12)
    assert T.energy(T.decompose(np.zeros((64, 64)), F.ctf_bank(6, 64), 3)) == 0.0


@pytest.mark.parametrize("n", [3, 4, 6])
def test_perfect_reconstruction_1d(n, rng):
    v = rng.normal(size=512)
    bank = F.ctf_bank(n, 512)
    rec = T.reconstruct(T.decompose(v, bank, 4), bank)
    assert np.linalg.norm(rec - v) / np.linalg.norm(v) <= 1e-9


@given(st.integers(1, 5), st.sampled_from([3, 4, 6]), st.integers(0, 2 ** 32 - 1))
def test_perfect_reconstruction_property(J, n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    bank = F.ctf_bank(n, 128)
    p = T.decompose(v, bank, J)
    assert abs(T.energy(p) - np.vdot(v, v).real) <= 1e-9 * np.vdot(v, v).real
    assert np.linalg.norm(T.reconstruct(p, bank) - v) <= 1e-9 * np.linalg.norm(v)


def test_lowpass_projection_and_zero(rng):
    v = rng.normal(size=(32, 32))
    bank = F.ctf_bank(3, 64)
    p = T.decompose(v, bank, 2)
    q = p.copy()
    for bands in q.highpass:
        for lab in bands:
            bands[lab] = np.zeros_like(bands[lab])
    proj = T.reconstruct(q, bank)
    assert np.sum(np.abs(proj) ** 2) <= np.sum(v ** 2)
    for bands in q.highpass:
        for lab in bands:
            bands[lab] *= 0
    q.lowpass = np.zeros_like(q.lowpass)
    assert np.max(np.abs(T.reconstruct(q, bank))) == 0.0


def test_decompose_validation(rng):
    bank = F.ctf_bank(3, 64)
    with pytest.raises(ValueError):
        T.decompose(rng.normal(size=(48, 64)), bank, 5)
    with pytest.raises(ValueError):
        T.decompose(rng.normal(size=(128, 128)), bank, 2)  # grid too small
    p = T.decompose(rng.normal(size=(64, 64)), bank, 2)
    p.highpass[0].pop(next(iter(p.highpass[0])))
    with pytest.raises(ValueError):
        T.reconstruct(p, bank)


def test_conjugate_subbands_for_real_input(rng):
    v = rng.normal(size=(64, 64))
    p = T.decompose(v, F.ctf_bank(6, 64), 2)
    swap = str.maketrans("pn", "np")
    for bands in p.highpass:
        for lab, arr in bands.items():
            assert np.max(np.abs(bands[lab.translate(swap)] - np.conj(arr))) <= 1e-10
    p1 = T.decompose(rng.normal(size=128), F.ctf_bank(3, 128), 3)
    for bands in p1.highpass:
        assert np.max(np.abs(bands["b1n"] - np.conj(bands["b1p"]))) <= 1e-10


# --- multilevel filters --------------------------------------------------------------

def test_multilevel_filter_examples():
    bank = F.ctf_bank(6, 256)
    g = T.multilevel_filter(bank, 1, "a")
    assert np.allclose(g.freq, np.sqrt(2) * bank.a.samples, atol=1e-15)
    haar = F.haar_bank(16)
    g2 = T.multilevel_filter(haar, 2, "a")
    t = g2.time.real
    assert np.allclose(t[:4], 0.5, atol=1e-15) and np.allclose(t[4:], 0, atol=1e-15)
    assert g2.lattice == 4
    with pytest.raises(ValueError):
        T.multilevel_filter(haar, 5, "a")
    with pytest.raises(KeyError):
        T.multilevel_filter(haar, 1, "zz")


def test_cascade_identity():
    bank = F.tensor_bank_2d(F.ctf_bank(6, 128))
    a = bank.lowpass
    for j in range(2, 6):
        prev = T.multilevel_filter(bank, j - 1, "axa").freq
        cur = T.multilevel_filter(bank, j, "axa").freq
        step = np.multiply.outer(a.rows.dilate(j - 1), a.cols.dilate(j - 1))
        assert np.max(np.abs(cur - 2 * prev * step)) <= 1e-9
        for lab in ("apxb1p", "b2nxb1p"):
            b = T.multilevel_filter(bank, j, lab)
            f = next(f for f in bank.highpass if f.label == lab)
            step_b = np.multiply.outer(f.rows.dilate(j - 1), f.cols.dilate(j - 1))
            assert np.max(np.abs(b.freq - 2 * prev * step_b)) <= 1e-9


@pytest.mark.parametrize("ndim", [1, 2])
def test_coefficient_identity(ndim, rng):
    shape = (64,) * ndim
    v = rng.normal(size=shape)
    bank = F.ctf_bank(4, 64)
    J = 3
    p = T.decompose(v, bank, J)
    b = T.as_bank(bank, ndim)
    total = 0.0
    for g in T.das_generators(b, J):
        c = T.das_coefficients(v, g)
        total += np.sum(np.abs(c) ** 2)
        ref = p.lowpass if g.label == b.analysis_filters()[0].label else p.highpass[g.level - 1][g.label]
        assert np.max(np.abs(c - ref)) <= 1e-10
    assert abs(total - np.sum(v ** 2)) <= 1e-9 * np.sum(v ** 2)


def test_generator_norms_agree_within_level():
    bank = F.ctf_bank(3, 256)
    for j in (1, 2, 3):
        a = T.multilevel_filter(bank, j, "a").norm()
        b = [T.multilevel_filter(bank, j, f.label).norm() for f in bank.highpass]
        # conjugate pairs share a norm, and every generator is at most unit size
        assert b[0] == pytest.approx(b[1], rel=1e-12)
        assert max([a] + b) <= 1.0 + 1e-12


def test_level5_generators_of_tpctf6():
    bank = F.tensor_bank_2d(F.ctf_bank(6, 256))
    gens = [T.multilevel_filter(bank, 5, f.label) for f in bank.highpass]
    assert len(gens) == 32
    swap = str.maketrans("pn", "np")
    labels = {g.label for g in gens}
    assert all(g.label.translate(swap) in labels for g in gens)  # 16 conjugate pairs
    dirs = {round(g.direction, 3) for g in gens}
    assert len(dirs) == 14


# --- serialization -------------------------------------------------------------------

def test_pyramid_round_trip(tmp_path, rng):
    v = rng.normal(size=(32, 32))
    bank = F.ctf_bank(6, 64)
    p = T.decompose(v, bank, 2)
    T.save_pyramid(p, tmp_path)
    q = T.load_pyramid(tmp_path)
    assert q.levels == 2 and q.ndim == 2
    for (j, lab, kind, a), (j2, lab2, kind2, b) in zip(p.entries(), q.entries()):
        assert (j, lab, kind) == (j2, lab2, kind2)
        assert np.array_equal(a, b)
    raw = np.fromfile(tmp_path / "highpass_L1_b1pxb1p.bin", dtype="<f8")
    assert raw.size == 2 * 16 * 16
