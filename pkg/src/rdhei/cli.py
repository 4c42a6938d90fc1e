"""Command-line front end.

Each subcommand only accepts the key its role is entitled to: ``embed`` and
``extract`` take the data key, ``reconstruct`` and ``decrypt`` the image
key. Passing the other key is a usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from rdhei.bench import PayloadMismatch, evaluate_image, parse_grid, render_reports, render_sweep, sweep
from rdhei.codec import CapacityError, capacity, embed, extract
from rdhei.crypto import KeyFormatError, KeyMaterial, bits_to_bytes, bytes_to_bits, parse_key, read_key_file, xor_image
from rdhei.fileio import atomic_write
from rdhei.image import PGMError, format_psnr, histogram, load_pgm, save_pgm
from rdhei.lattice import DEFAULT_SEED
from rdhei.predictors import ERROR_RANGE, PREDICTORS, error_histogram, failure_probability
from rdhei.reconstruct import reconstruct

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAPACITY = 4
EXIT_KEY = 5
EXIT_CHECK = 6

SEED_ENV = "RDHEI_SEED"
# fixed demo keys so `roundtrip`/`bench` are reproducible without arguments
DEMO_KE = "000102030405060708090a0b0c0d0e0f"
DEMO_KD = "f0e1d2c3b4a5968778695a4b3c2d1e0f"


class UsageError(Exception):
    pass


def _add_key(p, name, required=True, default=None):
    g = p.add_mutually_exclusive_group(required=required and default is None)
    g.add_argument(f"--{name}", metavar="HEX", default=default, help="128-bit key as 32 hex characters")
    g.add_argument(f"--{name}-file", metavar="PATH", help="file holding the 16 raw key bytes")


def _add_params(p):
    p.add_argument("--nw", type=int, default=1, help="white integration parameter N_W")
    p.add_argument("--nb", type=int, default=1, help="black integration parameter N_B")
    p.add_argument("--seed", metavar="HEX", help=f"public scramble seed (hex); env {SEED_ENV} also honoured")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdhei", description="Separable reversible data hiding in encrypted images")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encrypt", help="XOR an image with the K_e keystream")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_key(p, "ke")

    p = sub.add_parser("decrypt", help="inverse of encrypt (no MSB recovery)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_key(p, "ke")

    p = sub.add_parser("embed", help="hide a payload in an encrypted image (data hider, K_d only)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--payload", required=True, help="raw payload bytes, expanded MSB-first")
    p.add_argument("--payload-len-file", help="write the payload length in bits here")
    _add_key(p, "kd")
    _add_params(p)

    p = sub.add_parser("extract", help="recover the payload (K_d only)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--payload-len", type=int, help="payload length in bits (default: full capacity)")
    g.add_argument("--payload-len-file")
    _add_key(p, "kd")
    _add_params(p)

    p = sub.add_parser("reconstruct", help="recover the original image (K_e only)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="risk report path (.json or .csv)")
    _add_key(p, "ke")
    _add_params(p)

    p = sub.add_parser("roundtrip", help="encrypt, embed, extract and reconstruct one image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--require-lossless", action="store_true")
    p.add_argument("--report", help="write the image report (.csv or .json)")
    _add_key(p, "ke", default=DEMO_KE)
    _add_key(p, "kd", default=DEMO_KD)
    _add_params(p)

    p = sub.add_parser("analyze", help="prediction-error histograms and failure probabilities")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--hist-out", help="CSV predictor,e,count")
    p.add_argument("--f-out", help="CSV predictor,f (default stdout)")
    p.add_argument("--intensity-out", help="CSV value,count of the intensity histogram")
    p.add_argument("--predictors", default=",".join(PREDICTORS))

    p = sub.add_parser("bench", help="failure-rate sweep over a PGM corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--grid", default="1,1;2,3;3,6", help='e.g. "1,1;2,3;3,6"')
    p.add_argument("--out", required=True, help="sweep CSV")
    p.add_argument("--json", help="full JSON with per-image reports")
    p.add_argument("--seed", metavar="HEX")
    p.add_argument("--workers", type=int, default=1)
    _add_key(p, "ke", default=DEMO_KE)
    _add_key(p, "kd", default=DEMO_KD)
    return parser


def _key(args, name) -> bytes:
    path = getattr(args, f"{name}_file")
    if path:
        return read_key_file(path)
    return parse_key(getattr(args, name))


def _seed(args) -> bytes:
    text = args.seed if args.seed is not None else os.environ.get(SEED_ENV)
    if text is None:
        return DEFAULT_SEED
    try:
        return bytes.fromhex(text)
    except ValueError as exc:
        raise UsageError(f"seed is not valid hex: {text!r}") from exc


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def cmd_encrypt(args):
    save_pgm(xor_image(load_pgm(args.input), _key(args, "ke")), args.out)


cmd_decrypt = cmd_encrypt


def cmd_embed(args):
    img = load_pgm(args.input)
    with open(args.payload, "rb") as fh:
        bits = bytes_to_bits(fh.read())
    marked = embed(img, bits, _key(args, "kd"), args.nw, args.nb, _seed(args))
    save_pgm(marked, args.out)
    if args.payload_len_file:
        atomic_write(args.payload_len_file, f"{bits.size}\n")
    print(f"EC={capacity(img.height, img.width, args.nw, args.nb)} payload_bits={bits.size}")


def cmd_extract(args):
    img = load_pgm(args.input)
    n = args.payload_len
    if args.payload_len_file:
        with open(args.payload_len_file) as fh:
            n = int(fh.read().strip())
    bits = extract(img, _key(args, "kd"), args.nw, args.nb, _seed(args), n)
    atomic_write(args.out, bits_to_bytes(bits))
    print(f"payload_bits={bits.size}")


def cmd_reconstruct(args):
    img = load_pgm(args.input)
    recovered, report = reconstruct(img, _key(args, "ke"), args.nw, args.nb, _seed(args))
    save_pgm(recovered, args.out)
    if args.report:
        _write_text(args.report, report.to_csv() if args.report.endswith(".csv") else report.to_json())
    sys.stdout.write(report.summary_csv())


def cmd_roundtrip(args):
    img = load_pgm(args.input)
    keys = KeyMaterial(_key(args, "ke"), _key(args, "kd"))
    try:
        rep = evaluate_image(img, keys, args.nw, args.nb, _seed(args), image_id=os.path.basename(args.input))
    except PayloadMismatch as exc:
        print(f"payload MISMATCH: {exc}")
        return EXIT_CHECK
    print(f"EC={rep.ec_bits}")
    print("payload OK")
    print(f"PSNR={format_psnr(rep.psnr)}")
    print(f"deformed_msbs={rep.deformed_msbs}")
    print(f"white HiR={rep.white_hir} MeR={rep.white_mer}; black HiR={rep.black_hir} MeR={rep.black_mer}")
    if args.report:
        csv_text, json_text = render_reports([rep])
        _write_text(args.report, json_text if args.report.endswith(".json") else csv_text)
    if args.require_lossless and not math.isinf(rep.psnr):
        return EXIT_CHECK
    return EXIT_OK


def cmd_analyze(args):
    img = load_pgm(args.input)
    names = [n.strip() for n in args.predictors.split(",") if n.strip()]
    for n in names:
        if n not in PREDICTORS:
            raise UsageError(f"unknown predictor {n!r}")
    if args.hist_out:
        lines = ["predictor,e,count"]
        for n in names:
            counts = error_histogram(img, n)
            lines += [f"{n},{k - ERROR_RANGE},{c}" for k, c in enumerate(counts.tolist())]
        _write_text(args.hist_out, "\n".join(lines) + "\n")
    if args.intensity_out:
        lines = ["value,count"] + [f"{v},{c}" for v, c in enumerate(histogram(img).tolist())]
        _write_text(args.intensity_out, "\n".join(lines) + "\n")
    lines = ["predictor,f"] + [f"{n},{failure_probability(img, n):.6f}" for n in names]
    _write_text(args.f_out, "\n".join(lines) + "\n")


def cmd_bench(args):
    keys = KeyMaterial(_key(args, "ke"), _key(args, "kd"))
    try:
        grid = parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(f"bad --grid: {exc}") from exc
    result = sweep(args.corpus, grid, keys, _seed(args), workers=args.workers)
    csv_text, json_text = render_sweep(result)
    atomic_write(args.out, csv_text)
    if args.json:
        atomic_write(args.json, json_text)
    sys.stdout.write(csv_text)
    if result.skipped:
        print(f"skipped {len(result.skipped)} unreadable file(s)", file=sys.stderr)


COMMANDS = {
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "embed": cmd_embed,
    "extract": cmd_extract,
    "reconstruct": cmd_reconstruct,
    "roundtrip": cmd_roundtrip,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except UsageError as exc:
        print(f"rdhei: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PGMError as exc:
        print(f"rdhei: cannot parse image: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"rdhei: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except KeyFormatError as exc:
        print(f"rdhei: bad key: {exc}", file=sys.stderr)
        return EXIT_KEY
    except (ValueError, OSError) as exc:
        print(f"rdhei: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
