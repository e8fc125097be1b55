import numpy as np

from projcanon.partition import Partition


def test_initial_partition_and_cells():
    part, singles = Partition.initial(3, [(0, 3), (3, 11), (11, 13)])
    assert part.cells() == [(0, 3), (3, 11), (11, 13)]
    assert part.n == 13 and part.n_c == 3
    assert singles == [] and part.fixed_seq == ()
    part2, singles2 = Partition.initial(1, [(0, 1), (1, 4)])
    assert singles2 == [0] and part2.fixed_seq == (0,)


def test_cell_of_and_target_cell():
    part, _ = Partition.initial(3, [(0, 3), (3, 11), (11, 13)])
    assert part.cell_of(0) == (0, 3)
    assert part.cell_of(7) == (3, 11)
    assert part.cell_of(12) == (11, 13)
    # hyperplane cells are preferred, smallest first
    assert part.target_cell() == (11, 13)
    only_c = Partition(5, 5, (0, 2))
    assert only_c.target_cell() == (0, 2)  # smallest C cell, leftmost on ties
    mixed = Partition(6, 3, (0, 3, 4))  # C cell of 3, H singleton, H cell of 2
    assert mixed.target_cell() == (4, 6)  # non-singleton H cell wins over C
    assert Partition(2, 1, (0, 1)).target_cell() is None


def test_refine_splits_and_orders_by_key():
    part, _ = Partition.initial(2, [(0, 2), (2, 6)])
    keys = {2: (1,), 3: (0,), 4: (1,), 5: (0,)}
    new, dest, fp, singles = part.refine(keys)
    assert new.cells() == [(0, 2), (2, 4), (4, 6)]
    # positions 3,5 (key 0) come first, stable within equal keys
    assert dest.tolist() == [0, 1, 4, 2, 5, 3]
    assert singles == []
    assert fp == ((2, 4, ((2, 2, (0,)), (4, 2, (1,)))),)


def test_refine_stability_and_singletons():
    part, _ = Partition.initial(0, [(0, 3)])
    keys = {0: (5,), 1: (3,), 2: (4,)}
    new, dest, fp, singles = part.refine(keys)
    assert new.cells() == [(0, 1), (1, 2), (2, 3)]
    assert sorted(singles) == [0, 1, 2]
    assert new.fixed_seq == (0, 1, 2)
    assert dest.tolist() == [2, 0, 1]


def test_refine_no_change_returns_none_dest():
    part, _ = Partition.initial(0, [(0, 3)])
    keys = {0: (1,), 1: (1,), 2: (1,)}
    new, dest, fp, singles = part.refine(keys)
    assert dest is None and singles == []
    assert new.cells() == [(0, 3)]
    # fingerprint still records the keys for pruning
    assert fp == ((0, 3, ((0, 3, (1,)),)),)


def test_refine_skips_unkeyed_cells_and_keys_singletons():
    part, _ = Partition.initial(2, [(0, 2), (2, 3), (3, 5)])
    keys = {2: (7,)}
    new, dest, fp, singles = part.refine(keys)
    assert dest is None
    assert fp == ((2, 1, ((2, 1, (7,)),)),)
    assert new.cells() == part.cells()


def test_individualize():
    part, _ = Partition.initial(0, [(0, 4)])
    new, dest, singles = part.individualize((0, 4), 2)
    assert dest.tolist() == [2, 1, 0, 3]
    assert new.cells() == [(0, 1), (1, 4)]
    assert singles == [0]
    assert new.fixed_seq == (0,)
    pair = Partition(2, 0, (0,))
    new2, dest2, singles2 = pair.individualize((0, 2), 1)
    assert new2.cells() == [(0, 1), (1, 2)]
    assert singles2 == [0, 1]
    assert dest2.tolist() == [1, 0]


def test_is_fixed_and_discrete():
    part = Partition(3, 1, (0, 1, 2), fixed_seq=(0, 1, 2))
    assert part.is_discrete()
    assert all(part.is_fixed(p) for p in range(3))
    part2 = Partition(3, 1, (0, 1))
    assert not part2.is_discrete()
    assert part2.is_fixed(0) and not part2.is_fixed(1)
