import json

import numpy as np
import pytest

from tpctf import cli, imgio


@pytest.fixture
def small(tmp_path, lena):
    path = tmp_path / "small.pgm"
    imgio.write_pgm(lena[::8, ::8], path)
    return path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_and_analyze(tmp_path, capsys):
    bank = tmp_path / "ctf6.json"
    code, out, _ = run(capsys, "build", "--n", 6, "--grid", 1024, "--out", bank)
    assert code == 0 and bank.exists()
    code, out, _ = run(capsys, "analyze", bank)
    rep = json.loads(out)
    assert code == 0 and rep["result"] == "pass"
    assert rep["tight_frame_1d"]["max_residual_pr1"] <= 1e-8
    assert rep["tight_frame_1d"]["max_residual_pr0"] <= 1e-8


def test_build_rational_flags(tmp_path, capsys):
    bank = tmp_path / "b.json"
    code, _, _ = run(capsys, "build", "--n", 3, "--c1", "33/32", "--eps1", "69/128", "--m", 4,
                     "--grid", 512, "--out", bank)
    assert code == 0
    doc = json.loads(bank.read_text())
    assert doc["params"]["c"][0] == 33 / 32 and doc["params"]["eps"][0] == 69 / 128


def test_analyze_failure_exit_code(tmp_path, capsys):
    bank = tmp_path / "bad.json"
    code, _, err = run(capsys, "build", "--n", 3, "--c1", "1/2", "--eps1", "0.6", "--grid", 256,
                       "--out", bank)
    assert code == 0 and "warning" in err
    code, out, _ = run(capsys, "analyze", bank)
    assert code == 2 and json.loads(out)["result"] == "fail"


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "build", "--n", 3)[0] == 1                    # missing --out
    assert run(capsys, "build", "--n", "x", "--out", "o")[0] == 1
    assert run(capsys, "psnr", tmp_path / "no.pgm", tmp_path / "no.pgm")[0] == 3
    (tmp_path / "bad.pgm").write_bytes(b"P5\n2 2\n65535\n")
    assert run(capsys, "psnr", tmp_path / "bad.pgm", tmp_path / "bad.pgm")[0] == 3
    assert run(capsys, "build", "--n", 5, "--out", tmp_path / "x.json")[0] == 2
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 3


@pytest.mark.parametrize("sub", [None, "build", "analyze", "transform", "generators", "denoise",
                                 "psnr", "factors"])
def test_help_exits_zero(sub, capsys):
    argv = ["--help"] if sub is None else [sub, "--help"]
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 0


def test_psnr(small, tmp_path, capsys):
    code, out, _ = run(capsys, "psnr", small, small)
    assert code == 0 and out.strip() == "inf"
    img = imgio.read_pgm(small)
    imgio.write_pgm(np.clip(img + 1, 0, 254), tmp_path / "b.pgm")
    code, out, _ = run(capsys, "psnr", small, tmp_path / "b.pgm")
    assert code == 0 and float(out) > 40


@pytest.mark.parametrize("bank", ["tpctf6", "dtcwt-kingsbury", "dtcwt-meyer", "dtcwt-hybrid6",
                                  "file"])
def test_transform_round_trip(bank, small, tmp_path, capsys):
    if bank == "file":
        bank = tmp_path / "b.json"
        assert run(capsys, "build", "--n", 4, "--grid", 64, "--out", bank)[0] == 0
    fwd, inv = tmp_path / "fwd", tmp_path / "inv"
    assert run(capsys, "transform", "--bank", bank, "--levels", 3, "--in", small,
               "--out-dir", fwd)[0] == 0
    assert (fwd / "manifest.json").exists()
    assert run(capsys, "transform", "--bank", bank, "--inverse", "--in", fwd,
               "--out-dir", inv)[0] == 0
    assert np.array_equal(imgio.read_pgm(inv / "reconstruction.pgm"), imgio.read_pgm(small))
    assert np.allclose(imgio.read_image(inv / "reconstruction.raw"), imgio.read_pgm(small), atol=1e-9)


def test_transform_wrong_bank_for_inverse(small, tmp_path, capsys):
    fwd = tmp_path / "fwd"
    run(capsys, "transform", "--bank", "tpctf3", "--levels", 2, "--in", small, "--out-dir", fwd)
    assert run(capsys, "transform", "--bank", "dtcwt-meyer", "--inverse", "--in", fwd,
               "--out-dir", tmp_path / "x")[0] == 2


def test_generators(tmp_path, capsys):
    out = tmp_path / "g"
    code, msg, _ = run(capsys, "generators", "--bank", "tpctf6", "--levels", 6, "--level", 5,
                       "--grid", 128, "--out-dir", out)
    assert code == 0 and "14 distinct directions" in msg
    index = json.loads((out / "generators.json").read_text())
    assert len(index["generators"]) == 32
    img = imgio.read_pgm(out / index["generators"][0]["files"][0])
    assert img.shape == (128, 128) and img.min() == 0 and img.max() == 255
    code, msg, _ = run(capsys, "generators", "--bank", "dtcwt-meyer", "--levels", 5, "--level", 5,
                       "--grid", 128, "--out-dir", tmp_path / "m")
    assert code == 0 and "12 generators (6 distinct directions)" in msg
    assert run(capsys, "generators", "--bank", "tpctf3", "--levels", 2, "--level", 3,
               "--out-dir", tmp_path / "z")[0] == 2


def test_factors(tmp_path, capsys):
    code, _, err = run(capsys, "factors", "--out", tmp_path / "f.csv", "--points", 257)
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert code == 0 and len(lines) == 258
    assert lines[0] == "xi,sin,ideal,half_sin,half_cos_sgn"
    code, out, _ = run(capsys, "factors", "--format", "json", "--points", 33)
    doc = json.loads(out)
    assert len(doc["xi"]) == 33 and set(doc["squared_integrals"]) == {"sin", "ideal", "half_sin",
                                                                       "half_cos_sgn"}


def test_denoise(small, capsys, tmp_path):
    argv = ["denoise", "--image", small, "--transform", "tpctf6", "--sigma", 25, "--sigma", 10,
            "--trials", 2, "--levels", 3]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and len(out.splitlines()) == 4
    assert run(capsys, *argv)[1] == out
    code, out, _ = run(capsys, "denoise", "--image", small, "--transform", "dtcwt-kingsbury",
                       "--sigma", 20, "--seeds", "3,4", "--levels", 3, "--out-table", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"][0]["psnr_per_trial"]) == 2
    assert run(capsys, "denoise", "--image", small, "--seeds", "1,2", "--trials", 3)[0] == 2
    assert run(capsys, "denoise", "--image", small, "--transform", "wavelet")[0] == 1
    code, _, _ = run(capsys, "denoise", "--image", small, "--sigma", 25, "--trials", 1,
                     "--levels", 3, "--out-table", "csv", "--output", tmp_path / "t.csv",
                     "--save-images", tmp_path / "imgs")
    assert code == 0 and (tmp_path / "t.csv").read_text().startswith("image,")
    assert len(list((tmp_path / "imgs").iterdir())) == 2
