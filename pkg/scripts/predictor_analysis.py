"""Failure probability f and exact-prediction share for each predictor.

    python3 scripts/predictor_analysis.py image1.pgm image2.pgm
    python3 scripts/predictor_analysis.py --builtin
"""

import argparse
from pathlib import Path

import numpy as np

from rdhei.image import GrayImage, load_pgm
from rdhei.predictors import ERROR_RANGE, PREDICTORS, error_histogram, failure_probability


def _builtin():
    from skimage import data
    from skimage.color import rgb2gray

    for name in ("camera", "astronaut", "coffee", "grass", "gravel"):
        a = getattr(data, name)()
        if a.ndim == 3:
            a = np.round(rgb2gray(a[..., :3]) * 255).astype(np.uint8)
        yield name, a


def main():
    ap = argparse.ArgumentParser(description="predictor comparison")
    ap.add_argument("images", nargs="*", type=Path)
    ap.add_argument("--builtin", action="store_true", help="use scikit-image sample photos")
    args = ap.parse_args()
    items = [(p.stem, load_pgm(p)) for p in args.images]
    if args.builtin:
        items += [(n, GrayImage(a)) for n, a in _builtin()]
    if not items:
        ap.error("give PGM paths or --builtin")
    print("image," + ",".join(f"f_{n}" for n in PREDICTORS) + "," + ",".join(f"exact_{n}" for n in PREDICTORS))
    for name, img in items:
        f = [failure_probability(img, n) for n in PREDICTORS]
        exact = []
        for n in PREDICTORS:
            h = error_histogram(img, n)
            exact.append(h[ERROR_RANGE] / max(h.sum(), 1))
        print(name + "," + ",".join(f"{v:.5f}" for v in f) + "," + ",".join(f"{v:.4f}" for v in exact))


if __name__ == "__main__":
    main()
