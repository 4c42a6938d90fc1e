import os
import warnings
from pathlib import Path

import numpy as np
import pytest

from rdhei.image import GrayImage, load_pgm

SIPI_ENV = "RDHEI_SIPI_DIR"
CRITERIA: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)


def gradient(h, w, a=1, b=1, c0=0):
    r, c = np.mgrid[0:h, 0:w]
    return GrayImage(a * r + b * c + c0)


def constant(h, w, v):
    return GrayImage(np.full((h, w), v))


def noise(h, w, seed=0):
    return GrayImage(np.random.default_rng(seed).integers(0, 256, (h, w)))


@pytest.fixture(scope="session")
def sipi_dir():
    """Directory with USC-SIPI test images as PGM (lena.pgm, f16.pgm, ...), or None."""
    path = os.environ.get(SIPI_ENV)
    if not path or not Path(path).is_dir():
        warnings.warn(f"USC-SIPI corpus not found; set {SIPI_ENV} to a directory of PGMs")
        return None
    return Path(path)


def sipi_image(directory: Path, name: str) -> GrayImage:
    for candidate in directory.iterdir():
        if candidate.stem.lower() == name.lower() and candidate.suffix.lower() in (".pgm", ".pnm"):
            return load_pgm(candidate)
    pytest.skip(f"{name} not in {directory}")


NATURAL_SOURCES = [
    "astronaut.png",
    "camera.png",
    "chelsea.png",
    "coffee.png",
    "coins.png",
    "grass.png",
    "gravel.png",
    "motorcycle_left.png",
    "rocket.jpg",
]


def natural_corpus(size=256):
    """50 grayscale crops (5 per photo) from photographs shipped with scikit-image/scikit-learn."""
    skdata = pytest.importorskip("skimage.data")
    io = pytest.importorskip("skimage.io")
    from skimage.color import rgb2gray
    import sklearn.datasets

    root = Path(skdata.__file__).parent
    paths = [root / n for n in NATURAL_SOURCES]
    paths.append(Path(sklearn.datasets.__file__).parent / "images" / "china.jpg")
    images = {}
    for path in paths:
        a = io.imread(path)
        if a.ndim == 3:
            a = np.round(rgb2gray(a[..., :3]) * 255).astype(np.uint8)
        H, W = a.shape
        ys = np.linspace(0, H - size, 3).astype(int)
        xs = np.linspace(0, W - size, 3).astype(int)
        corners = [(ys[0], xs[0]), (ys[0], xs[2]), (ys[1], xs[1]), (ys[2], xs[0]), (ys[2], xs[2])]
        for k, (y, x) in enumerate(corners):
            images[f"{path.stem}_{k}"] = GrayImage(a[y : y + size, x : x + size])
    return images
