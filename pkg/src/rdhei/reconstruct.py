"""Recipient-side image recovery using only the image key.

After decryption every target subset holds either its original MSBs or all
of them complemented. Both candidates are scored by the summed absolute
prediction error of their pixels; the lower score wins (ties keep the
decrypted candidate). Black targets are resolved first from the untouched
reference pixels with the cross predictor, then white targets with the plus
predictor over their recovered black neighbours.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field

import numpy as np

from rdhei.crypto import xor_image
from rdhei.image import GrayImage
from rdhei.lattice import DEFAULT_SEED, Phase, build_plan, subsets
from rdhei.predictors import predict

MSB = 0x80
PHASE_PREDICTOR = {Phase.BLACK: "bcp", Phase.WHITE: "wpp"}


class Risk(str, enum.Enum):
    HIR = "HiR"
    MER = "MeR"
    LOR = "LoR"
    VLOR = "VLoR"


def integrate_errors(pixels, predictions) -> int:
    p = np.asarray(pixels, dtype=np.int64)
    return int(np.abs(p - np.asarray(predictions, dtype=np.int64)).sum())


def decide(errors_as_is: int, errors_flipped: int) -> tuple[bool, int]:
    """Return (take_flipped, margin). Equal scores keep the as-is candidate."""
    return errors_flipped < errors_as_is, abs(errors_as_is - errors_flipped)


def risk_class(margin: int, n: int) -> Risk:
    if margin < 16 * n:
        return Risk.HIR
    if margin < 32 * n:
        return Risk.MER
    if margin < 64 * n:
        return Risk.LOR
    return Risk.VLOR


def _risk_codes(margins: np.ndarray, n: int) -> np.ndarray:
    # 0..3 index into list(Risk)
    return np.searchsorted(np.array([16 * n, 32 * n, 64 * n]), margins, side="right")


@dataclass
class PhaseRisk:
    phase: Phase
    n: int
    margins: np.ndarray
    flipped: np.ndarray

    @property
    def classes(self) -> list[Risk]:
        members = list(Risk)
        return [members[k] for k in _risk_codes(self.margins, self.n)]

    def counts(self) -> dict[str, int]:
        tally = np.bincount(_risk_codes(self.margins, self.n), minlength=4)
        return {r.value: int(k) for r, k in zip(Risk, tally)}


@dataclass
class RiskReport:
    phases: dict[Phase, PhaseRisk] = field(default_factory=dict)

    def count(self, phase: Phase, risk: Risk) -> int:
        return self.phases[Phase(phase)].counts()[Risk(risk).value]

    def summary(self) -> dict:
        return {p.value: self.phases[p].counts() for p in (Phase.WHITE, Phase.BLACK) if p in self.phases}

    def rows(self):
        for phase in (Phase.BLACK, Phase.WHITE):
            if phase not in self.phases:
                continue
            pr = self.phases[phase]
            for j, (margin, cls, flip) in enumerate(zip(pr.margins.tolist(), pr.classes, pr.flipped.tolist())):
                yield {"phase": phase.value, "subset": j, "margin": margin, "risk": cls.value, "flipped": int(flip)}

    def to_json(self) -> str:
        return json.dumps({"summary": self.summary(), "subsets": list(self.rows())}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["phase", "subset", "margin", "risk", "flipped"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["phase", *(r.value for r in Risk)])
        for phase, counts in self.summary().items():
            writer.writerow([phase, *counts.values()])
        return buf.getvalue()


def _resolve_phase(flat: np.ndarray, shape, groups: np.ndarray, phase: Phase) -> PhaseRisk:
    n = groups.shape[1]
    pred = predict(flat.reshape(shape), groups.ravel(), PHASE_PREDICTOR[phase]).reshape(groups.shape)
    as_is = flat[groups].astype(np.int64)
    err_as_is = np.abs(as_is - pred).sum(axis=1)
    err_flipped = np.abs((as_is ^ MSB) - pred).sum(axis=1)
    take_flipped = err_flipped < err_as_is
    flat[groups[take_flipped]] ^= MSB
    return PhaseRisk(phase, n, np.abs(err_as_is - err_flipped), take_flipped)


def reconstruct(
    marked: GrayImage,
    k_e: bytes,
    n_white: int,
    n_black: int,
    seed: bytes = DEFAULT_SEED,
) -> tuple[GrayImage, RiskReport]:
    """Decrypt and undo the MSB flips. Wrong N_W/N_B/seed give garbage, not an error."""
    plan = build_plan(marked.shape, n_white, n_black, seed)
    flat = xor_image(marked, k_e).pixels.ravel().copy()
    report = RiskReport()
    # black subsets only read reference pixels; white subsets need recovered blacks
    for phase in (Phase.BLACK, Phase.WHITE):
        groups, _ = subsets(plan, phase)
        report.phases[phase] = _resolve_phase(flat, marked.shape, groups, phase)
    return GrayImage(flat.reshape(marked.shape)), report
