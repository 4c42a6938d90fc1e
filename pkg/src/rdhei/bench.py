"""Evaluation harness: per-image reports and failure-rate sweeps over a corpus."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rdhei.codec import capacity, embed, extract
from rdhei.crypto import KeyMaterial, bytes_to_bits, keystream, xor_image
from rdhei.image import GrayImage, PGMError, format_psnr, load_pgm, psnr
from rdhei.lattice import DEFAULT_SEED, Phase
from rdhei.reconstruct import Risk, reconstruct

log = logging.getLogger(__name__)

PAYLOAD_TAG = "bench/payload"


class PayloadMismatch(AssertionError):
    pass


@dataclass
class ImageReport:
    image_id: str
    n_white: int
    n_black: int
    ec_bits: int
    psnr: float
    white_hir: int
    white_mer: int
    black_hir: int
    black_mer: int
    deformed_msbs: int

    @property
    def lossless(self) -> bool:
        return math.isinf(self.psnr)


REPORT_FIELDS = [f.name for f in dataclasses.fields(ImageReport)]


def default_payload(k_d: bytes, nbits: int) -> np.ndarray:
    return bytes_to_bits(keystream(k_d, PAYLOAD_TAG, (nbits + 7) // 8))[:nbits]


def deformed_msbs(original: GrayImage, recovered: GrayImage) -> int:
    return int(np.count_nonzero((original.pixels ^ recovered.pixels) & 0x80))


def run_pipeline(img, keys: KeyMaterial, n_white, n_black, seed=DEFAULT_SEED, payload=None):
    """encrypt -> embed -> extract -> reconstruct; returns (payload, extracted, recovered, risk)."""
    ec = capacity(img.height, img.width, n_white, n_black)
    if payload is None:
        payload = default_payload(keys.k_d, ec)
    payload = np.asarray(payload, dtype=np.uint8)
    encrypted = xor_image(img, keys.k_e)
    marked = embed(encrypted, payload, keys.k_d, n_white, n_black, seed)
    extracted = extract(marked, keys.k_d, n_white, n_black, seed, payload.size)
    recovered, risk = reconstruct(marked, keys.k_e, n_white, n_black, seed)
    return payload, extracted, recovered, risk


def evaluate_image(
    img: GrayImage,
    keys: KeyMaterial,
    n_white: int,
    n_black: int,
    seed: bytes = DEFAULT_SEED,
    payload=None,
    image_id: str = "image",
) -> ImageReport:
    payload, extracted, recovered, risk = run_pipeline(img, keys, n_white, n_black, seed, payload)
    if not np.array_equal(payload, extracted):
        raise PayloadMismatch(f"{image_id}: extracted payload differs at N=({n_white},{n_black})")
    return ImageReport(
        image_id=image_id,
        n_white=n_white,
        n_black=n_black,
        ec_bits=capacity(img.height, img.width, n_white, n_black),
        psnr=psnr(img, recovered),
        white_hir=risk.count(Phase.WHITE, Risk.HIR),
        white_mer=risk.count(Phase.WHITE, Risk.MER),
        black_hir=risk.count(Phase.BLACK, Risk.HIR),
        black_mer=risk.count(Phase.BLACK, Risk.MER),
        deformed_msbs=deformed_msbs(img, recovered),
    )


@dataclass
class SweepPoint:
    n_white: int
    n_black: int
    mean_ec: float
    failures: int
    corpus_size: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.corpus_size if self.corpus_size else 0.0


@dataclass
class SweepResult:
    points: list[SweepPoint]
    reports: list[ImageReport] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def rate(self, n_white: int, n_black: int) -> float:
        for p in self.points:
            if (p.n_white, p.n_black) == (n_white, n_black):
                return p.failure_rate
        raise KeyError((n_white, n_black))


def _evaluate_job(args):
    image_id, pixels, keys, nw, nb, seed = args
    return evaluate_image(GrayImage(pixels), keys, nw, nb, seed, image_id=image_id)


def sweep_images(images: dict, grid, keys: KeyMaterial, seed: bytes = DEFAULT_SEED, workers: int = 1) -> SweepResult:
    """Evaluate every image at every (N_W, N_B); aggregation is ordered by image id."""
    ids = sorted(images)
    grid = [tuple(g) for g in grid]
    jobs = [(i, images[i].pixels, keys, nw, nb, seed) for nw, nb in grid for i in ids]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_evaluate_job, jobs, chunksize=4))
    else:
        reports = [_evaluate_job(j) for j in jobs]

    points = []
    for nw, nb in grid:
        rs = [r for r in reports if (r.n_white, r.n_black) == (nw, nb)]
        points.append(
            SweepPoint(
                n_white=nw,
                n_black=nb,
                mean_ec=float(np.mean([r.ec_bits for r in rs])) if rs else 0.0,
                failures=sum(not r.lossless for r in rs),
                corpus_size=len(rs),
            )
        )
    return SweepResult(points=points, reports=reports)


def load_corpus(corpus_dir) -> tuple[dict, list[str]]:
    images, skipped = {}, []
    for path in sorted(Path(corpus_dir).iterdir()):
        if path.suffix.lower() not in (".pgm", ".pnm") or not path.is_file():
            continue
        try:
            images[path.name] = load_pgm(path)
        except (PGMError, ValueError, OSError) as exc:
            log.warning("skipping %s: %s", path, exc)
            skipped.append(path.name)
    return images, skipped


def sweep(corpus_dir, grid, keys: KeyMaterial, seed: bytes = DEFAULT_SEED, workers: int = 1) -> SweepResult:
    images, skipped = load_corpus(corpus_dir)
    result = sweep_images(images, grid, keys, seed, workers)
    result.skipped = skipped
    return result


def _report_row(r: ImageReport) -> dict:
    row = dataclasses.asdict(r)
    row["psnr"] = format_psnr(r.psnr)
    return row


def render_reports(reports) -> tuple[str, str]:
    """CSV and JSON renderings of image reports; infinite PSNR is written as "inf"."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    rows = [_report_row(r) for r in reports]
    writer.writerows(rows)
    return buf.getvalue(), json.dumps(rows, indent=2)


def parse_report_row(row: dict) -> ImageReport:
    """Inverse of the CSV/JSON row encoding."""
    kwargs = {}
    for f in dataclasses.fields(ImageReport):
        v = row[f.name]
        if f.name == "image_id":
            kwargs[f.name] = str(v)
        elif f.name == "psnr":
            kwargs[f.name] = float(v)
        else:
            kwargs[f.name] = int(v)
    return ImageReport(**kwargs)


SWEEP_FIELDS = ["n_white", "n_black", "mean_ec", "failures", "corpus_size", "failure_rate"]


def render_sweep(result: SweepResult) -> tuple[str, str]:
    rows = [{**dataclasses.asdict(p), "failure_rate": p.failure_rate} for p in result.points]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    doc = {"points": rows, "skipped": result.skipped, "reports": [_report_row(r) for r in result.reports]}
    return buf.getvalue(), json.dumps(doc, indent=2)


def parse_grid(text: str) -> list[tuple[int, int]]:
    """Parse ``"1,1;2,3"`` into [(1, 1), (2, 3)]."""
    grid = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        nw, nb = (int(x) for x in item.split(","))
        grid.append((nw, nb))
    if not grid:
        raise ValueError("empty grid")
    return grid
