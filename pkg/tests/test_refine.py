import types

import numpy as np

from projcanon import linalg, preprocess, refine
from projcanon.field import GF
from projcanon.inner import SearchState, semicanonical
from projcanon.model import RawFamily, Subspace, normalize
from projcanon.partition import Partition


def three_planes():
    f = GF(3)
    e = linalg.identity(4)
    U1 = Subspace(f, e[:, [0, 1]])
    U2 = Subspace(f, e[:, [2, 3]])
    U3 = Subspace(f, e[:, [0, 2]])
    return f, normalize(RawFamily(f, 4, [[U1, U2, U3]]))


def pinned_frame_state():
    f, inst = three_planes()
    ext = preprocess.extend_instance(f, inst)
    part, _ = Partition.initial(ext.n, ext.cell_bounds)
    state = SearchState(ext, part)
    part2, dest, singles = part.individualize((11, 13), 11)
    state.part = part2
    state.apply_perm(dest)
    semicanonical(state, singles)
    return f, ext, state


def test_subset_keys_follow_the_pinned_span():
    f, ext, state = pinned_frame_state()
    keys = refine.theta_subset_keys(state)
    for pos in range(3, 13):
        orig = ext.normals[:, pos - 3]
        in_span = orig[0] == 0 and orig[2] == 0  # lies in <v9, v10>
        assert keys[pos] == ((1,) if in_span else (0,))


def test_predicted_normal_keys_merge_pinnable_equals():
    f, ext, state = pinned_frame_state()
    keys = refine.theta_min_h_keys(state)
    in_span = [
        pos
        for pos in range(3, 11)
        if ext.normals[0, pos - 3] == 0 and ext.normals[2, pos - 3] == 0
    ]
    assert len(in_span) == 2
    a, b = in_span
    assert keys[a] == keys[b]
    # both would pin to the vector with 1 on each pinned frame row
    assert keys[a] == (1, (0, 0, 1, 1))
    assert keys[11] == (1, (0, 0, 0, 1)) and keys[12] == (1, (0, 0, 1, 0))


def test_predicted_block_keys_order_matches_echelon_data():
    f, ext, state = pinned_frame_state()
    keys = refine.theta_min_c_keys(state)
    one = np.array([[1], [0]], dtype=np.int64)
    two = np.array([[0], [1]], dtype=np.int64)
    assert keys[0] == (1, (0,), linalg.matrix_key(f, one))
    assert keys[1] == (0, (), ())
    assert keys[2] == (1, (1,), linalg.matrix_key(f, two))
    assert keys[1] < keys[0] < keys[2]


def test_orbit_min_distinguishes_tied_rows_only():
    f = GF(2, 2)
    xi = f.xi
    xi2 = f.mul(xi, xi)
    # independent column scalars: both products reach (1, 1)
    free = refine._orbit_min(f, (1, xi2), (0, 1), (False, False), 2)
    assert free == (1, 1)
    assert refine._orbit_min(f, (1, xi), (0, 1), (False, False), 2) == free
    # a common scalar keeps the ratio: the two products now differ
    o1 = refine._orbit_min(f, (1, xi2), (0, 0), (False, False), 2)
    o2 = refine._orbit_min(f, (1, xi), (0, 0), (False, False), 2)
    assert o1 == (1, 3) and o2 == (1, 2)


def test_root_graph_pairs_reproduce_containment_splits():
    f, inst = three_planes()
    ext = preprocess.extend_instance(f, inst)
    part, _ = Partition.initial(ext.n, ext.cell_bounds)
    state = SearchState(ext, part)
    memo = {}
    pairs = refine.pair_schedule(state.part, state.n)
    assert pairs[0] == ((0, 3), (11, 13))
    ckeys, hkeys = refine.pair_keys(state, *pairs[0], memo)
    assert ckeys[0] == (1, (("u",),)) and ckeys[2] == (1, (("u",),))
    assert ckeys[1] == (2, ())
    assert hkeys[11] == hkeys[12] == (2, (("u",),))
    part2, dest, _, singles = state.part.refine(ckeys)
    state.part = part2
    state.apply_perm(dest)
    assert part2.starts == (0, 2, 3, 11)
    assert singles == [2]
    part3, dest, _, _ = state.part.refine(hkeys)
    assert dest is None
    # next round: the crossing plane splits the big hyperplane cell 6 + 2
    pairs = refine.pair_schedule(state.part, state.n)
    assert pairs[0] == ((2, 3), (11, 13))
    ckeys, hkeys = refine.pair_keys(state, *pairs[0], memo)
    p, dest, _, _ = state.part.refine(hkeys)
    assert dest is None  # both pinned-cell normals contain the crossing plane
    ckeys, hkeys = refine.pair_keys(state, *pairs[1], memo)
    assert pairs[1] == ((2, 3), (3, 11))
    part4, dest, _, singles = state.part.refine(hkeys)
    state.part = part4
    state.apply_perm(dest)
    assert part4.starts == (0, 2, 3, 9, 11)
    assert singles == []
    for j in range(3, 9):
        assert linalg.matmul(f, state.normals[:, j - 3][None, :], state.subs[2]).any()
    for j in range(9, 11):
        assert not linalg.matmul(
            f, state.normals[:, j - 3][None, :], state.subs[2]
        ).any()


def test_edge_color_fallback_and_memoization():
    f = GF(2, 4)
    ext = types.SimpleNamespace(
        field=f,
        k=5,
        n=1,
        h=2,
        subs=[linalg.identity(5)],
        normals=np.ones((5, 2), dtype=np.int64),
    )
    part, _ = Partition.initial(1, [(0, 1), (1, 3)])
    state = SearchState(ext, part)
    state.t = 5
    state.tcols = [5]
    state.anchors = [[0, 1, 2, 3, 4]]
    memo = {}
    color = refine.edge_color(state, 0, 1, memo)
    assert color[0] == "s"  # 15**5 orbits exceed the enumeration cap
    assert refine.edge_color(state, 0, 2, memo) is color  # memo hit
    # tying all rows together makes the orbit enumerable again
    for r in range(1, 5):
        state.blocks.union(0, r)
    state.stamp += 1
    color2 = refine.edge_color(state, 0, 1, {})
    assert color2 == ("o", 1, 1, 1, 1, 1)
