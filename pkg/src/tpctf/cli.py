"""Command-line interface: ``tpctf <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import analysis, denoise, dtcwt, filters, imgio, transform

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _number(text: str) -> float:
    try:
        return filters.parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0 or Fraction(text) != v:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None


# --------------------------------------------------------------------------
# Transform selection shared by transform/generators
# --------------------------------------------------------------------------

_NAMED = ("tpctf3", "tpctf4", "tpctf6", "dtcwt-kingsbury", "dtcwt-meyer", "dtcwt-hybrid6")


def _resolve_bank(spec: str, shape):
    """A bank JSON path or a transform name, sized for ``shape``."""
    grid = math.lcm(*shape)
    if os.path.exists(spec):
        with open(spec) as fh:
            return "framelet", filters.bank_from_json(fh.read()), None
    if spec.startswith("tpctf") and spec in _NAMED:
        return "framelet", filters.ctf_bank(int(spec[5:]), grid), None
    if spec in ("dtcwt-kingsbury", "dtcwt-meyer"):
        fs = dtcwt.DtFilterSet.meyer() if spec == "dtcwt-meyer" else dtcwt.DtFilterSet.kingsbury()
        return "dtcwt", fs, None
    if spec == "dtcwt-hybrid6":
        return "dtcwt", dtcwt.DtFilterSet.kingsbury(), filters.tensor_bank_2d(filters.ctf_bank(6, grid))
    raise ValueError(f"--bank must be a bank JSON file or one of {', '.join(_NAMED)}")


def _rescale(x: np.ndarray) -> np.ndarray:
    lo, hi = float(x.min()), float(x.max())
    if hi - lo < 1e-300:
        return np.full(x.shape, 128.0)
    return (x - lo) * (255.0 / (hi - lo))


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_build(args) -> int:
    if args.c1 is None and args.eps1 is None and args.eps0 is None:
        params = filters.default_params(args.n, m=args.m, as_printed=args.as_printed)
    else:
        base = None
        if args.n in (3, 4, 6):
            base = filters.default_params(args.n, m=args.m, as_printed=args.as_printed)
        c1 = args.c1 if args.c1 is not None else (base.c[0] if base else None)
        eps1 = args.eps1 if args.eps1 is not None else (base.eps[0] if base else None)
        eps0 = args.eps0 if args.eps0 is not None else (base.eps0 if base else None)
        if c1 is None or eps1 is None:
            raise ValueError(f"n={args.n} has no reference parameters; pass --c1 and --eps1")
        m = args.m if args.m is not None else (base.m if base else filters.DEFAULT_M)
        params = filters.special_params(args.n, c1, eps1, eps0, m)
    bank = filters.build_ctf(params, args.grid)
    for w in bank.warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = filters.bank_to_json(bank)
    if args.out == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {bank.name} ({len(bank.analysis_filters())} filters, grid {bank.grid_size}) "
              f"to {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    with open(args.bank) as fh:
        bank = filters.bank_from_json(fh.read())
    rep = analysis.bank_report(bank, args.tol)
    ok = rep["tight_frame_1d"]["pass"] and rep.get("tight_frame_2d", {"pass": True})["pass"]
    rep["result"] = "pass" if ok else "fail"
    print(json.dumps(rep, indent=1))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_transform(args) -> int:
    if args.inverse:
        with open(os.path.join(args.input, "manifest.json")) as fh:
            variant = json.load(fh).get("tree_variant")
        if variant is None:
            p = transform.load_pyramid(args.input)
            shape = tuple(s << p.levels for s in np.atleast_2d(p.lowpass).shape)[-p.ndim:]
            kind, bank, _ = _resolve_bank(args.bank, shape)
            if kind != "framelet":
                raise ValueError("coefficients were not produced by a framelet bank")
            out = transform.reconstruct(p, bank)
        else:
            c = dtcwt.load_dtcoeffs(args.input)
            h, w = next(iter(c.lowpass.values())).shape
            shape = (h << c.levels, w << c.levels)
            kind, fs, first = _resolve_bank(args.bank, shape)
            if kind != "dtcwt":
                raise ValueError("coefficients were not produced by a dual-tree transform")
            out = dtcwt.dtcwt_reconstruct(c, fs, first)
        img = imgio.from_signal(out)
        os.makedirs(args.out_dir, exist_ok=True)
        if img.ndim == 1:
            img = img[None, :]
        imgio.write_pgm(img, os.path.join(args.out_dir, "reconstruction.pgm"))
        imgio.write_raw(img, os.path.join(args.out_dir, "reconstruction.raw"))
        print(f"wrote reconstruction to {args.out_dir}")
        return EXIT_OK
    img = imgio.to_signal(imgio.read_image(args.input))
    kind, bank, first = _resolve_bank(args.bank, img.shape)
    if kind == "framelet":
        p = transform.decompose(img, bank, args.levels)
        transform.save_pyramid(p, args.out_dir)
        count = sum(len(b) for b in p.highpass) + 1
    else:
        c = dtcwt.dtcwt_decompose(img, bank, args.levels, first)
        dtcwt.save_dtcoeffs(c, args.out_dir)
        count = sum(len(b) for b in c.highpass) + len(c.lowpass)
    print(f"wrote {count} subbands to {args.out_dir}")
    return EXIT_OK


def _generator_images(args):
    shape = (args.grid, args.grid)
    kind, bank, first = _resolve_bank(args.bank, shape)
    if not 1 <= args.level <= args.levels:
        raise ValueError("--level must lie in 1..--levels")
    out = []
    if kind == "framelet":
        b2 = filters.tensor_bank_2d(bank)
        labels = [f.label for f in b2.highpass]
        if args.level == args.levels:
            labels = [b2.lowpass.label] + labels
        for lab in labels:
            g = transform.multilevel_filter(b2, args.level, lab, args.grid)
            out.append((lab, g.direction, g.freq))
    elif first is not None and args.level == 1:
        for u in first.highpass:
            out.append((u.label, u.direction,
                        np.multiply.outer(u.rows.resample(args.grid), u.cols.resample(args.grid))))
    else:
        lead = (first.lowpass.rows, None) if first is not None else None
        for lab in dtcwt.HIGHPASS_LABELS:
            out.append((lab, dtcwt.label_angle(lab),
                        dtcwt.subband_filter(bank, args.level, lab, shape, lead)))
    return out


def cmd_generators(args) -> int:
    gens = _generator_images(args)
    os.makedirs(args.out_dir, exist_ok=True)
    index = []
    for lab, direction, freq in gens:
        t = np.fft.fftshift(np.fft.ifft2(freq))
        stem = f"L{args.level}_{lab}"
        imgio.write_pgm(_rescale(t.real), os.path.join(args.out_dir, stem + "_re.pgm"))
        imgio.write_pgm(_rescale(t.imag), os.path.join(args.out_dir, stem + "_im.pgm"))
        index.append({"label": lab, "direction": direction, "files": [stem + "_re.pgm", stem + "_im.pgm"]})
    with open(os.path.join(args.out_dir, "generators.json"), "w") as fh:
        json.dump({"bank": args.bank, "level": args.level, "levels": args.levels,
                   "grid": args.grid, "generators": index}, fh, indent=1)
    dirs = sorted({d for _, d, _ in gens if d is not None})
    print(f"wrote {len(gens)} generators ({len(dirs)} distinct directions) to {args.out_dir}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    seeds = tuple(args.seeds) if args.seeds else tuple(range(1, args.trials + 1))
    if args.seeds and args.trials is not None and args.trials != len(seeds):
        raise ValueError("--trials disagrees with the number of --seeds")
    path = args.image
    if not os.path.exists(path):
        path = imgio.find_image(os.path.basename(path)) or path
    cfg = denoise.ExperimentConfig(
        image=path, transform=args.transform, levels=args.levels,
        sigmas=tuple(args.sigma or [25.0]), seeds=seeds, window=args.window,
        threads=args.threads, backend=args.backend, save_images=args.save_images)
    img = imgio.read_image(path)
    rows = denoise.run_experiment(cfg, img)
    text = denoise.format_table(rows, args.out_table, args.timing)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_psnr(args) -> int:
    a = imgio.read_image(args.a)
    b = imgio.read_image(args.b)
    v = denoise.psnr(a, b)
    print("inf" if math.isinf(v) else f"{v:.4f}")
    return EXIT_OK


def cmd_factors(args) -> int:
    curves = analysis.factor_curves(args.points)
    energies = {k: analysis.factor_energy(k, args.points) for k in analysis.FACTOR_KINDS}
    kinds = list(analysis.FACTOR_KINDS)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        if args.format == "json":
            json.dump({"xi": curves["xi"].tolist(), **{k: curves[k].tolist() for k in kinds},
                       "squared_integrals": energies}, fh)
            fh.write("\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["xi"] + kinds)
            for i in range(args.points):
                w.writerow([repr(float(curves["xi"][i]))] + [repr(float(curves[k][i])) for k in kinds])
    finally:
        if fh is not sys.stdout:
            fh.close()
    for k, e in energies.items():
        print(f"{k}: integral of squared factor = {e:.10f} (2 pi = {2 * math.pi:.10f})",
              file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tpctf", description="Directional complex tight framelets and dual-tree "
                                          "complex wavelets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a complex tight framelet bank")
    b.add_argument("--n", type=_positive_int, required=True, help="number of filters")
    b.add_argument("--c1", type=_number, help="first breakpoint (rational allowed, e.g. 33/32)")
    b.add_argument("--eps1", type=_number, help="edge half-width")
    b.add_argument("--eps0", type=_number, help="edge half-width at the origin (even n)")
    b.add_argument("--m", type=_positive_int, help="blend polynomial order")
    b.add_argument("--grid", type=_positive_int, default=1024, help="DFT grid size")
    b.add_argument("--as-printed", action="store_true",
                   help="for n=4 use c1=291/128 instead of 291/256 (not a tight frame)")
    b.add_argument("--out", required=True, help="output JSON path, or - for stdout")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="verify a bank and report its properties")
    a.add_argument("bank", help="bank JSON from 'build'")
    a.add_argument("--tol", type=_number, default=1e-8)
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("transform", help="forward or inverse multilevel transform")
    t.add_argument("--bank", required=True, help=f"bank JSON or one of {', '.join(_NAMED)}")
    t.add_argument("--levels", type=_positive_int, default=1)
    t.add_argument("--in", dest="input", required=True,
                   help="image (forward) or coefficient directory (inverse)")
    t.add_argument("--out-dir", required=True)
    t.add_argument("--inverse", action="store_true")
    t.set_defaults(func=cmd_transform)

    g = sub.add_parser("generators", help="export multilevel generators as PGM images")
    g.add_argument("--bank", required=True, help=f"bank JSON or one of {', '.join(_NAMED)}")
    g.add_argument("--levels", type=_positive_int, required=True)
    g.add_argument("--level", type=_positive_int, required=True)
    g.add_argument("--grid", type=_positive_int, default=256)
    g.add_argument("--out-dir", required=True)
    g.set_defaults(func=cmd_generators)

    d = sub.add_parser("denoise", help="bivariate shrinkage denoising experiment")
    d.add_argument("--image", required=True,
                   help="PGM path, or a stem such as lena512 looked up in $TPCTF_IMAGES and data/")
    d.add_argument("--transform", choices=denoise.TRANSFORMS, default="tpctf6")
    d.add_argument("--sigma", type=_number, action="append", help="noise deviation (repeatable)")
    d.add_argument("--levels", type=_positive_int)
    d.add_argument("--trials", type=_positive_int)
    d.add_argument("--seeds", type=_seed_list, help="comma-separated seeds (default 1..trials)")
    d.add_argument("--window", type=_positive_int, default=denoise.DEFAULT_WINDOW)
    d.add_argument("--threads", type=_positive_int, default=1)
    d.add_argument("--backend", choices=("cython", "python"))
    d.add_argument("--out-table", choices=("text", "csv", "json"), default="text")
    d.add_argument("--output", help="write the table here instead of stdout")
    d.add_argument("--save-images", metavar="DIR")
    d.add_argument("--timing", action="store_true", help="include runtimes in the table")
    d.set_defaults(func=cmd_denoise, trials=None)

    s = sub.add_parser("psnr", help="PSNR of b against reference a")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_psnr)

    f = sub.add_parser("factors", help="sample the frequency-separation factors")
    f.add_argument("--out", default="-", help="output path, or - for stdout")
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--points", type=_positive_int, default=4096)
    f.set_defaults(func=cmd_factors)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "denoise" and args.trials is None and not args.seeds:
            args.trials = len(denoise.DEFAULT_SEEDS)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except imgio.PGMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
