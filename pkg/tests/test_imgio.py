import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from tpctf import imgio


def test_read_p5(tmp_path):
    f = tmp_path / "a.pgm"
    f.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    assert imgio.read_pgm(f).tolist() == [[0, 255], [128, 64]]


def test_read_p2_with_comments(tmp_path):
    f = tmp_path / "a.pgm"
    f.write_bytes(b"P2\n# made by hand\n2 2\n255\n0 255\n128 64\n")
    assert imgio.read_pgm(f).tolist() == [[0, 255], [128, 64]]


@pytest.mark.parametrize("data", [
    b"P5\n2 2\n65535\n" + bytes(8),     # 16-bit maxval
    b"P5\n2 2\n255\n" + bytes(3),       # truncated raster
    b"P2\n2 2\n255\n1 2 3\n",           # truncated ASCII raster
    b"P2\n2 2\n255\n1 2 3 300\n",       # sample out of range
    b"P6\n2 2\n255\n" + bytes(12),      # colour
    b"P5\n2\n",                         # truncated header
    b"P5\nx 2\n255\n" + bytes(4),       # malformed field
])
def test_read_rejects_bad_files(tmp_path, data):
    f = tmp_path / "bad.pgm"
    f.write_bytes(data)
    with pytest.raises(imgio.PGMError):
        imgio.read_pgm(f)


def test_write_clips_and_rounds(tmp_path):
    f = tmp_path / "o.pgm"
    imgio.write_pgm(np.array([[255.7, -3.0, 2.5, 3.5], [0.49, 127.5, 1.0, 254.5]]), f)
    assert imgio.read_pgm(f).tolist() == [[255, 0, 3, 4], [0, 128, 1, 255]]
    assert f.read_bytes().startswith(b"P5\n4 2\n255\n")
    with pytest.raises(ValueError):
        imgio.write_pgm(np.array([[np.nan, 1.0]]), f)


@given(arrays(np.float64, (5, 7), elements=st.floats(-50, 300)))
def test_write_read_round_trip(tmp_path_factory, x):
    d = tmp_path_factory.mktemp("rt")
    imgio.write_pgm(x, d / "a.pgm")
    imgio.write_pgm(x, d / "b.pgm", ascii=True)
    expect = np.floor(np.clip(x, 0, 255) + 0.5)
    assert np.array_equal(imgio.read_pgm(d / "a.pgm"), expect)
    assert np.array_equal(imgio.read_pgm(d / "b.pgm"), expect)
    imgio.write_pgm(expect, d / "c.pgm")
    assert (d / "a.pgm").read_bytes() == (d / "c.pgm").read_bytes()


def test_signal_conversion():
    img = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(imgio.from_signal(imgio.to_signal(img)), img)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert np.array_equal(imgio.from_signal(img + 1e-9j), img)
    with pytest.warns(RuntimeWarning):
        imgio.from_signal(img + 1e-3j)


def test_raw_round_trip(tmp_path, rng):
    x = rng.normal(size=(3, 5))
    f = tmp_path / "x.raw"
    imgio.write_raw(x, f)
    assert f.stat().st_size == 15 * 8
    assert np.array_equal(imgio.read_image(f), x)
    (tmp_path / "x.raw.json").write_text('{"width": 4, "height": 4}')
    with pytest.raises(ValueError):
        imgio.read_raw(f)


def test_find_image(tmp_path, monkeypatch):
    monkeypatch.setenv(imgio.IMAGE_ENV, str(tmp_path))
    assert imgio.find_image("nothing-here") is None
    imgio.write_pgm(np.zeros((2, 2)), tmp_path / "tiny.pgm")
    assert imgio.find_image("tiny") == str(tmp_path / "tiny.pgm")
    assert imgio.find_image("tiny.pgm") == str(tmp_path / "tiny.pgm")
