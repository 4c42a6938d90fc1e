"""Chess-board pixel roles and scrambled subset groupings of target pixels.

Rows/columns 0, 1, P-2, P-1 (and likewise for columns) form the border. In
the interior, white targets sit where r + c is odd, black references where r
and c are both even, black targets where both are odd. Each white target's
4-connected neighbours are therefore black, and each black target's diagonal
neighbours are black references.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from rdhei.crypto import keyed_permutation

BORDER = 2
MIN_SIDE = 2 * BORDER + 1
MAX_N = 16
DEFAULT_SEED = b"rdhei/scramble/v1"


class Role(enum.IntEnum):
    WHITE_TARGET = 0
    BLACK_TARGET = 1
    BLACK_REFERENCE = 2
    BORDER = 3


class Phase(str, enum.Enum):
    WHITE = "white"
    BLACK = "black"


def role_of(r: int, c: int, dims: tuple[int, int]) -> Role:
    P, Q = dims
    if not (0 <= r < P and 0 <= c < Q):
        raise IndexError(f"pixel ({r}, {c}) outside {P}x{Q}")
    if r < BORDER or r > P - 1 - BORDER or c < BORDER or c > Q - 1 - BORDER:
        return Role.BORDER
    if (r + c) % 2 == 1:
        return Role.WHITE_TARGET
    if r % 2 == 0:
        return Role.BLACK_REFERENCE
    return Role.BLACK_TARGET


def role_map(dims: tuple[int, int]) -> np.ndarray:
    """Vectorised ``role_of`` over the whole raster, as a (P, Q) int8 array."""
    P, Q = dims
    r = np.arange(P)[:, None]
    c = np.arange(Q)[None, :]
    roles = np.full((P, Q), Role.BLACK_TARGET, dtype=np.int8)
    roles[(r + c) % 2 == 1] = Role.WHITE_TARGET
    roles[(r % 2 == 0) & (c % 2 == 0)] = Role.BLACK_REFERENCE
    border = (r < BORDER) | (r > P - 1 - BORDER) | (c < BORDER) | (c > Q - 1 - BORDER)
    roles[border] = Role.BORDER
    return roles


def target_indices(dims: tuple[int, int], phase: Phase) -> np.ndarray:
    """Raster-order flat indices of the interior targets of one phase."""
    role = Role.WHITE_TARGET if Phase(phase) is Phase.WHITE else Role.BLACK_TARGET
    return np.flatnonzero(role_map(dims) == role)


def _check_dims(dims):
    P, Q = dims
    if P < MIN_SIDE or Q < MIN_SIDE:
        raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {P}x{Q}")


def check_n(name, n):
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_N):
        raise ValueError(f"{name} must be an integer in [1, {MAX_N}], got {n!r}")


def class_seed(seed: bytes, dims: tuple[int, int], phase: Phase) -> bytes:
    P, Q = dims
    tag = "W" if Phase(phase) is Phase.WHITE else "B"
    return bytes(seed) + f"/{P}x{Q}/scramble/{tag}".encode("ascii")


@lru_cache(maxsize=64)
def _scrambled(dims: tuple[int, int], phase: Phase, seed: bytes) -> np.ndarray:
    idx = target_indices(dims, phase)
    order = idx[keyed_permutation(idx.size, class_seed(seed, dims, phase))]
    order.setflags(write=False)
    return order


@dataclass(frozen=True, eq=False)
class LatticePlan:
    dims: tuple[int, int]
    white_order: np.ndarray
    black_order: np.ndarray
    n_white: int
    n_black: int

    def order(self, phase: Phase) -> np.ndarray:
        return self.white_order if Phase(phase) is Phase.WHITE else self.black_order

    def n(self, phase: Phase) -> int:
        return self.n_white if Phase(phase) is Phase.WHITE else self.n_black

    def subset_count(self, phase: Phase) -> int:
        return self.order(phase).size // self.n(phase)

    @property
    def j_white(self) -> int:
        return self.subset_count(Phase.WHITE)

    @property
    def j_black(self) -> int:
        return self.subset_count(Phase.BLACK)

    @property
    def capacity(self) -> int:
        return self.j_white + self.j_black


def build_plan(dims, n_white: int, n_black: int, seed: bytes = DEFAULT_SEED) -> LatticePlan:
    dims = (int(dims[0]), int(dims[1]))
    _check_dims(dims)
    check_n("N_W", n_white)
    check_n("N_B", n_black)
    seed = bytes(seed)
    return LatticePlan(
        dims=dims,
        white_order=_scrambled(dims, Phase.WHITE, seed),
        black_order=_scrambled(dims, Phase.BLACK, seed),
        n_white=int(n_white),
        n_black=int(n_black),
    )


def subsets(plan: LatticePlan, phase: Phase) -> tuple[np.ndarray, np.ndarray]:
    """Split a phase's scrambled order into a (J, N) index array and the leftover tail."""
    order = plan.order(phase)
    n = plan.n(phase)
    j = order.size // n
    return order[: j * n].reshape(j, n), order[j * n :]
