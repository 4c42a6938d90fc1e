import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdhei.lattice import (
    DEFAULT_SEED,
    Phase,
    Role,
    build_plan,
    role_map,
    role_of,
    subsets,
    target_indices,
)


def test_role_examples():
    dims = (512, 512)
    assert role_of(0, 5, dims) is Role.BORDER
    assert role_of(510, 300, dims) is Role.BORDER
    assert role_of(300, 510, dims) is Role.BORDER
    assert role_of(3, 3, dims) is Role.BLACK_TARGET
    assert role_of(2, 2, dims) is Role.BLACK_REFERENCE
    assert role_of(2, 3, dims) is Role.WHITE_TARGET
    assert role_of(509, 509, dims) is Role.BLACK_TARGET


def test_role_out_of_bounds():
    with pytest.raises(IndexError):
        role_of(5, 0, (5, 5))
    with pytest.raises(IndexError):
        role_of(0, -1, (5, 5))


def _enumerate_roles(P, Q):
    counts = dict.fromkeys(Role, 0)
    for r in range(P):
        for c in range(Q):
            counts[role_of(r, c, (P, Q))] += 1
    return counts


def test_counts_512_by_enumeration():
    counts = _enumerate_roles(512, 512)
    assert counts[Role.WHITE_TARGET] == 129032
    assert counts[Role.BLACK_TARGET] == 64516
    assert counts[Role.BLACK_REFERENCE] == 64516
    assert counts[Role.BORDER] == 512 * 512 - 508 * 508


@pytest.mark.parametrize("dims", [(5, 5), (8, 9), (13, 7), (64, 64), (31, 40)])
def test_role_map_matches_scalar(dims):
    rm = role_map(dims)
    for r in range(dims[0]):
        for c in range(dims[1]):
            assert rm[r, c] == role_of(r, c, dims)


@pytest.mark.parametrize("dims", [(8, 9), (13, 7), (31, 40), (6, 6)])
def test_role_count_relation(dims):
    c = _enumerate_roles(*dims)
    interior = (dims[0] - 4) * (dims[1] - 4)
    assert c[Role.WHITE_TARGET] + c[Role.BLACK_TARGET] + c[Role.BLACK_REFERENCE] == interior
    assert abs(c[Role.WHITE_TARGET] - c[Role.BLACK_TARGET] - c[Role.BLACK_REFERENCE]) <= 1


def test_neighbourhood_geometry():
    dims = (12, 11)
    rm = role_map(dims)
    for idx in target_indices(dims, Phase.WHITE):
        r, c = divmod(int(idx), dims[1])
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            assert rm[r + dr, c + dc] != Role.WHITE_TARGET
    for idx in target_indices(dims, Phase.BLACK):
        r, c = divmod(int(idx), dims[1])
        for dr, dc in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
            # at the interior edge the diagonal partner may be a border pixel
            assert rm[r + dr, c + dc] in (Role.BLACK_REFERENCE, Role.BORDER)
            assert (r + dr) % 2 == 0 and (c + dc) % 2 == 0


def test_degenerate_5x5():
    plan = build_plan((5, 5), 1, 1)
    assert role_of(2, 2, (5, 5)) is Role.BLACK_REFERENCE
    assert plan.white_order.size == 0 and plan.black_order.size == 0
    assert plan.j_white == plan.j_black == 0


def test_plan_errors():
    with pytest.raises(ValueError):
        build_plan((4, 10), 1, 1)
    with pytest.raises(ValueError):
        build_plan((10, 10), 0, 1)
    with pytest.raises(ValueError):
        build_plan((10, 10), 1, 17)


def test_plan_deterministic():
    a = build_plan((40, 33), 2, 3, b"seed")
    b = build_plan((40, 33), 2, 3, b"seed")
    assert np.array_equal(a.white_order, b.white_order)
    assert np.array_equal(a.black_order, b.black_order)
    c = build_plan((40, 33), 2, 3, b"other")
    assert not np.array_equal(a.white_order, c.white_order)


def test_plan_512_subset_counts():
    plan = build_plan((512, 512), 1, 2)
    assert (plan.j_white, plan.j_black, plan.capacity) == (129032, 32258, 161290)
    groups, left = subsets(build_plan((512, 512), 3, 5), Phase.BLACK)
    assert groups.shape == (12903, 5) and left.size == 1


def test_plan_order_is_scrambled():
    plan = build_plan((64, 64), 1, 1)
    raster = target_indices((64, 64), Phase.WHITE)
    assert not np.array_equal(plan.white_order, raster)


@settings(max_examples=25, deadline=None)
@given(st.integers(5, 40), st.integers(5, 40), st.binary(max_size=8))
def test_scramble_is_bijection(P, Q, seed):
    plan = build_plan((P, Q), 1, 1, seed)
    for phase in Phase:
        assert np.array_equal(np.sort(plan.order(phase)), target_indices((P, Q), phase))


def test_subsets_floor_division():
    plan = build_plan((9, 8), 3, 1, DEFAULT_SEED)
    # interior 5x4: 10 white targets -> 3 groups of 3 + 1 leftover
    groups, left = subsets(plan, Phase.WHITE)
    assert plan.white_order.size == 10
    assert groups.shape == (3, 3) and left.size == 1
    assert np.array_equal(np.concatenate([groups.ravel(), left]), plan.white_order)


def test_subsets_seven_targets_n3():
    # interior 3x5 has 7 white targets
    plan = build_plan((7, 9), 3, 1)
    groups, left = subsets(plan, Phase.WHITE)
    assert plan.white_order.size == 7
    assert groups.shape == (2, 3) and left.size == 1


def test_subsets_n1():
    plan = build_plan((20, 20), 1, 1)
    groups, left = subsets(plan, Phase.BLACK)
    assert groups.shape == (plan.black_order.size, 1) and left.size == 0
