"""Write the 50-crop natural-photo corpus used by the failure-rate trend check as PGM files.

Sources are the photographs bundled with scikit-image and scikit-learn, so no
download is needed. Run from the repository root:

    python3 scripts/make_natural_corpus.py --out corpus/natural --size 256
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from conftest import natural_corpus  # noqa: E402

from rdhei.image import save_pgm  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("corpus/natural"))
    ap.add_argument("--size", type=int, default=256, help="side of each square crop")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    images = natural_corpus(args.size)
    for name, img in images.items():
        save_pgm(img, args.out / f"{name}.pgm")
    print(f"wrote {len(images)} crops to {args.out}")


if __name__ == "__main__":
    main()
