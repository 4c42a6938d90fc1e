"""Separable reversible data hiding in encrypted grayscale images via MSB integration."""

from rdhei.codec import CapacityError, capacity, embed, extract
from rdhei.crypto import KeyMaterial, xor_image, xor_payload
from rdhei.image import GrayImage, histogram, psnr, read_pgm, write_pgm
from rdhei.lattice import DEFAULT_SEED, LatticePlan, Phase, Role, build_plan
from rdhei.reconstruct import Risk, RiskReport, reconstruct

__all__ = [
    "CapacityError",
    "DEFAULT_SEED",
    "GrayImage",
    "KeyMaterial",
    "LatticePlan",
    "Phase",
    "Risk",
    "RiskReport",
    "Role",
    "build_plan",
    "capacity",
    "embed",
    "extract",
    "histogram",
    "psnr",
    "read_pgm",
    "reconstruct",
    "write_pgm",
    "xor_image",
    "xor_payload",
]
