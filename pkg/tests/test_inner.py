import types

import numpy as np

from projcanon import linalg, preprocess
from projcanon.field import GF
from projcanon.inner import SearchState, pin_normal, pin_subspace, semicanonical
from projcanon.model import RawFamily, Subspace, normalize
from projcanon.partition import Partition


def three_planes():
    """Two disjoint planes and one crossing plane in F_3^4."""
    f = GF(3)
    e = linalg.identity(4)
    U1 = Subspace(f, e[:, [0, 1]])
    U2 = Subspace(f, e[:, [2, 3]])
    U3 = Subspace(f, e[:, [0, 2]])
    return f, normalize(RawFamily(f, 4, [[U1, U2, U3]]))


def _proj(f, v):
    nz = np.nonzero(v)[0]
    return tuple(f.ascale(v, f.inv(int(v[nz[0]]))))


def assert_tracks_original(state, ext):
    """Current content must equal acc applied to the original content."""
    f = state.f
    g = state.acc
    for p in range(state.n):
        orig = ext.subs[int(state.origin[p])]
        assert Subspace(f, g.apply_mat(orig)) == Subspace(f, state.subs[p])
    cg = g.contragredient()
    for pos in range(state.n, state.n + state.h):
        ov = ext.normals[:, int(state.origin[pos]) - state.n]
        assert _proj(f, cg.apply_vec(ov)) == _proj(f, state.normals[:, pos - state.n])


def pinned_frame_state():
    """The worked instance after pinning the two-normal cell: t = 2."""
    f, inst = three_planes()
    ext = preprocess.extend_instance(f, inst)
    part, singles = Partition.initial(ext.n, ext.cell_bounds)
    assert singles == []
    state = SearchState(ext, part)
    part2, dest, singles = part.individualize((11, 13), 11)
    state.part = part2
    state.apply_perm(dest)
    events, grew = semicanonical(state, singles)
    return f, ext, state, events, grew


def test_frame_pins_and_reechelonization_on_worked_instance():
    f, ext, state, events, grew = pinned_frame_state()
    # the double-count normals entered in enumeration order
    assert tuple(ext.normals[:, 8]) == (0, 1, 0, 0)
    assert grew and state.t == 2 and state.e == 1
    assert tuple(state.normals[:, 8]) == (1, 0, 0, 0)
    assert tuple(state.normals[:, 9]) == (0, 1, 0, 0)
    # frame rows stay separate scaling blocks until something ties them
    assert state.blocks.block_tuples(2) == ((0,), (1,))
    # every member was re-echelonized against the two pinned rows
    # (member positions follow the normalized in-set order)
    assert state.tcols == [1, 0, 1]
    assert state.anchors[0] == [0] and state.anchors[2] == [1]
    expect = np.array(
        [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 0],
        ],
        dtype=np.int64,
    )
    assert (np.concatenate(state.subs, axis=1) == expect).all()
    assert [ev[0] for ev in events] == [1, 1, 3]
    assert events[0] == (1, 1, 1, (0, 0, 0, 1))
    assert events[1] == (1, 2, 1, (0, 0, 1, 0))
    # re-echelonization reports the pinned widths as sorted per-cell groups
    assert events[2] == (3, 2, ((0, 1, 1),))
    assert_tracks_original(state, ext)


def test_in_span_pin_scales_blocks_and_merges():
    f, ext, state, _, _ = pinned_frame_state()
    part3, dest, singles = state.part.individualize((3, 11), 3)
    state.part = part3
    state.apply_perm(dest)
    assert singles == [3]
    # plant a normal supported on both pinned rows and pin it
    state.normals[:, 0] = np.array([2, 1, 0, 0], dtype=np.int64)
    ev = pin_normal(state, 3)
    assert tuple(state.normals[:, 0]) == (1, 1, 0, 0)
    assert ev == (1, 2, 1, (0, 0, 1, 1))
    # the two frame rows are now tied to a common scale factor
    assert state.blocks.block_tuples(2) == ((0, 1),)
    # everything pinned before is untouched
    assert tuple(state.normals[:, 8]) == (1, 0, 0, 0)
    assert tuple(state.normals[:, 9]) == (0, 1, 0, 0)
    assert state.subs[0][0, 0] == 1 and state.subs[2][1, 0] == 1
    # the applied row scaling is recorded in the accumulated transporter
    M1 = linalg.identity(4)[[1, 0, 2, 3]]
    M2 = linalg.identity(4)[[0, 3, 2, 1]]
    D = np.diag(np.array([2, 1, 1, 1], dtype=np.int64))
    expect = linalg.matmul(f, D, linalg.matmul(f, M2, M1))
    assert (state.acc.mat == expect).all() and state.acc.frob == 0


def test_block_minimization_over_scalings_and_frobenius():
    f = GF(2, 4)
    xp = lambda j: f.pow(f.xi, j)
    cols = [
        [xp(8), 0, 0, xp(12), xp(1)],
        [0, xp(10), xp(8), xp(4), xp(7)],
        [0, 0, 0, 0, xp(2)],
    ]
    M0 = np.array(cols, dtype=np.int64).T
    ext = types.SimpleNamespace(
        field=f, k=5, n=1, h=0, subs=[M0], normals=linalg.zeros(5, 0)
    )
    part, singles = Partition.initial(1, [(0, 1)])
    assert singles == [0]
    state = SearchState(ext, part)
    state.t = 4
    state.blocks.union(0, 1)
    state.e = 1
    state.tcols = [2]
    state.anchors = [[0, 1]]
    ev = pin_subspace(state, 0)
    expect_top = np.array(
        [
            [1, 0, 0],
            [0, xp(5), 0],
            [0, 1, 0],
            [1, 1, 0],
        ],
        dtype=np.int64,
    )
    assert (state.subs[0][:4, :] == expect_top).all()
    # all four frame rows merged into one scaling block; frob step doubled
    assert state.blocks.block_tuples(4) == ((0, 1, 2, 3),)
    assert state.e == 2
    assert ev[:5] == (2, 0, 2, 2, (0, 0))
    # as a subspace this equals the expected completed matrix
    printed = np.array(
        [
            [1, 0, 0, 1, xp(2)],
            [0, xp(5), 1, 1, xp(14)],
            [0, 0, 0, 0, xp(4)],
        ],
        dtype=np.int64,
    ).T
    assert Subspace(f, state.subs[0]) == Subspace(f, printed)
    assert_tracks_original(state, ext)


def test_repin_preserves_previously_pinned_rows():
    f = GF(2, 2)
    xp = lambda j: f.pow(f.xi, j)
    # one pinned column over t=1, then the frame grows to t=3
    M0 = np.array([[xp(1), 0], [xp(2), xp(1)], [0, xp(2)], [xp(1), xp(1)]]).T
    M0 = np.ascontiguousarray(M0.T)  # 4 x 2
    ext = types.SimpleNamespace(
        field=f, k=4, n=1, h=0, subs=[M0], normals=linalg.zeros(4, 0)
    )
    part, _ = Partition.initial(1, [(0, 1)])
    state = SearchState(ext, part)
    state.t = 1
    state.e = f.r
    state.tcols = [1]
    state.anchors = [[0]]
    pin_subspace(state, 0)
    first = state.subs[0][:1, :1].copy()
    assert first[0, 0] == 1  # the single-row column is normalized
    # frame grows by two rows; re-echelonize and re-pin
    state.t = 3
    from projcanon.inner import recolumnize

    recolumnize(state, 1)
    assert state.tcols[0] == 2
    pin_subspace(state, 0)
    # the previously pinned row of the old column is intact
    assert state.subs[0][0, 0] == 1
    # the re-pin normalized the new rows of the old column
    X = state.subs[0][:3, :2]
    assert X[np.nonzero(X[:, 0])[0].max(), 0] == 1
    assert_tracks_original(state, ext)


def test_clone_is_independent():
    _, ext, state, _, _ = pinned_frame_state()
    twin = state.clone()
    twin.subs[0][0, 0] = 0
    twin.tcols[0] = 9
    twin.blocks.union(0, 1)
    assert state.subs[0][0, 0] == 1
    assert state.tcols[0] == 1
    assert state.blocks.find(1) == 1
