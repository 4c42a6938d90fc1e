"""Failure rate F_r across integration parameters on a PGM corpus.

Without --corpus the built-in natural-photo crops are used.

    python3 scripts/failure_rate_sweep.py --grid "1,1;1,2;2,3;2,6;3,6;4,6" --out sweep.csv
"""

import argparse
import sys
import time
from pathlib import Path

from rdhei.bench import load_corpus, parse_grid, render_sweep, sweep_images
from rdhei.crypto import KeyMaterial


def main():
    ap = argparse.ArgumentParser(description="F_r sweep")
    ap.add_argument("--corpus", type=Path, help="directory of PGM images")
    ap.add_argument("--size", type=int, default=256, help="crop side for the built-in corpus")
    ap.add_argument("--grid", default="1,1;1,2;2,3;2,6;3,6;4,6")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="CSV output")
    ap.add_argument("--json", type=Path, help="JSON output with per-image reports")
    args = ap.parse_args()

    if args.corpus:
        images, skipped = load_corpus(args.corpus)
        if skipped:
            print(f"skipped: {', '.join(skipped)}", file=sys.stderr)
    else:
        sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
        from conftest import natural_corpus

        images = natural_corpus(args.size)

    t0 = time.perf_counter()
    result = sweep_images(images, parse_grid(args.grid), KeyMaterial.random(), workers=args.workers)
    csv_text, json_text = render_sweep(result)
    sys.stdout.write(csv_text)
    print(f"# {len(images)} images in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    if args.out:
        args.out.write_text(csv_text)
    if args.json:
        args.json.write_text(json_text)


if __name__ == "__main__":
    main()
