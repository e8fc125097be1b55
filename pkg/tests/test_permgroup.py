import itertools
import random

import numpy as np

from projcanon.permgroup import PermGroup, StabChain, compose, group_order, inverse


def closure(deg, gens):
    """Brute-force group closure as a set of tuples."""
    idt = tuple(range(deg))
    seen = {idt}
    frontier = [idt]
    gens = [tuple(int(x) for x in g) for g in gens]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                prod = tuple(s[g[i]] for i in range(deg))
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def test_symmetric_group_orders_and_stabilizers():
    deg = 4
    swap = np.array([1, 0, 2, 3])
    cyc = np.array([1, 2, 3, 0])
    chain = StabChain(deg, [swap, cyc])
    assert chain.order() == 24
    assert chain.contains(np.array([3, 2, 1, 0]))
    pinned = StabChain(deg, [swap, cyc], base_hint=(0,))
    assert pinned.order() == 24
    assert pinned.stab_order(1) == 6
    assert list(pinned.orbit_labels()) == [0, 1, 1, 1]
    two = StabChain(deg, [swap, cyc], base_hint=(0, 1))
    assert two.stab_order(2) == 2
    assert list(two.orbit_labels()) == [0, 1, 2, 2]


def test_chain_matches_brute_closure_on_random_groups():
    rng = random.Random(11)
    deg = 6
    for _ in range(12):
        gens = []
        for _ in range(rng.randrange(1, 4)):
            p = list(range(deg))
            rng.shuffle(p)
            gens.append(np.array(p, dtype=np.int64))
        elems = closure(deg, gens)
        chain = StabChain(deg, gens)
        assert chain.order() == len(elems)
        some = rng.sample(sorted(elems), min(5, len(elems)))
        for el in some:
            assert chain.contains(np.array(el))
        for el in itertools.islice(itertools.permutations(range(deg)), 50):
            assert chain.contains(np.array(el)) == (el in elems)


def test_prefix_stabilizer_matches_brute_filter():
    rng = random.Random(7)
    deg = 7
    for _ in range(8):
        gens = []
        for _ in range(2):
            p = list(range(deg))
            rng.shuffle(p)
            gens.append(np.array(p, dtype=np.int64))
        elems = closure(deg, gens)
        prefix = tuple(rng.sample(range(deg), 2))
        chain = StabChain(deg, gens, base_hint=prefix)
        fixed = [el for el in elems if all(el[p] == p for p in prefix)]
        assert chain.stab_order(chain.hint_len) == len(fixed)
        labels = chain.orbit_labels()
        for el in fixed:
            for p in range(deg):
                assert labels[p] == labels[el[p]]
        # labels are least orbit members
        for p in range(deg):
            orbit = {q for q in range(deg) if labels[q] == labels[p]}
            assert labels[p] == min(orbit)


def test_incremental_adds_and_membership():
    deg = 5
    g = PermGroup(deg)
    assert g.order() == 1
    assert g.add(np.array([1, 0, 2, 3, 4]))
    assert not g.add(np.array([1, 0, 2, 3, 4]))
    assert g.version == 1
    assert g.add(np.array([0, 2, 1, 3, 4]))
    assert g.order() == 6  # symmetric group on {0,1,2}
    assert not g.add(np.array([2, 0, 1, 3, 4]))  # product of the two
    labels = g.stab_orbit_labels((0,))
    assert list(labels) == [0, 1, 1, 3, 4]
    assert list(g.stab_orbit_labels(())) == [0, 0, 0, 3, 4]


def test_compose_inverse_and_order_helper():
    g = np.array([2, 0, 1])
    h = np.array([1, 0, 2])
    gh = compose(g, h)
    assert list(gh) == [0, 2, 1]  # h then g
    assert list(compose(g, inverse(g))) == [0, 1, 2]
    assert group_order(3, [g]) == 3
