import random

import numpy as np
import pytest

from projcanon.errors import CapacityExceeded, ShapeError
from projcanon.field import GF


def test_prime_field_basics():
    f = GF(2)
    assert f.q == 2 and f.modulus == (0, 1)
    assert f.add(1, 1) == 0
    assert f.mul(1, 1) == 1
    f3 = GF(3)
    assert f3.xi == 2  # least primitive root mod 3
    assert f3.add(2, 2) == 1
    assert f3.mul(2, 2) == 1
    f5 = GF(5)
    assert f5.xi == 2
    assert sorted(f5.pow(2, j) for j in range(4)) == [1, 2, 3, 4]


def test_default_moduli_are_the_smallest_primitive_ones():
    assert GF(2, 2).modulus == (1, 1, 1)  # x^2 + x + 1
    assert GF(2, 3).modulus == (1, 1, 0, 1)  # x^3 + x + 1
    assert GF(2, 4).modulus == (1, 1, 0, 0, 1)  # x^4 + x + 1
    assert GF(3, 2).modulus == (2, 1, 1)  # x^2 + x + 2
    # sanity: x must generate the full multiplicative group
    for f in (GF(2, 2), GF(2, 3), GF(2, 4), GF(3, 2), GF(5, 2)):
        seen = {1}
        a = f.xi
        while a != 1:
            seen.add(a)
            a = f.mul(a, f.xi)
        assert len(seen) == f.q - 1


def test_gf16_structure():
    f = GF(2, 4)
    xi = f.xi
    assert xi == 2
    # with modulus x^4 + x + 1: xi^4 = xi + 1
    assert f.pow(xi, 4) == f.add(xi, 1)
    # squaring is the Frobenius
    a = f.pow(xi, 10)
    assert f.mul(a, a) == f.pow(xi, 5)
    assert f.frob(a) == f.pow(xi, 5)


def test_gf4_structure():
    f = GF(2, 2)
    x = f.xi
    assert f.mul(x, x) == f.add(x, 1)  # x^2 = x + 1
    assert f.pow(x, 3) == 1


def test_element_order_is_zero_then_dlog():
    f = GF(2, 2)
    assert [f.rank(a) for a in range(4)] == [0, 1, 2, 3]
    f9 = GF(3, 2)
    ranks = sorted(f9.rank(a) for a in f9.elements())
    assert ranks == list(range(9))
    assert f9.rank(0) == 0 and f9.rank(1) == 1 and f9.rank(f9.xi) == 2
    assert f9.cmp(0, 1) == -1 and f9.cmp(f9.xi, 1) == 1 and f9.cmp(2, 2) == 0


def test_field_axioms_sampled():
    rng = random.Random(7)
    for f in (GF(2, 4), GF(3, 2), GF(5), GF(7, 2), GF(2, 8)):
        for _ in range(60):
            a, b, c = (rng.randrange(f.q) for _ in range(3))
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            assert f.add(a, f.neg(a)) == 0
            assert f.sub(f.add(a, b), b) == a


def test_inverses_full_scan():
    for f in (GF(2, 4), GF(3, 3), GF(13)):
        for a in f.units():
            assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        GF(3).inv(0)


def test_frobenius_is_additive_and_has_order_r():
    rng = random.Random(11)
    for f in (GF(2, 4), GF(3, 2), GF(2, 6)):
        for _ in range(40):
            a, b = rng.randrange(f.q), rng.randrange(f.q)
            assert f.frob(f.add(a, b)) == f.add(f.frob(a), f.frob(b))
            assert f.frob(f.mul(a, b)) == f.mul(f.frob(a), f.frob(b))
            x = a
            for _ in range(f.r):
                x = f.frob(x)
            assert x == a
        assert all(f.frob(c) == c for c in range(f.p))


def test_vectorized_ops_match_scalar():
    rng = random.Random(3)
    for f in (GF(2, 4), GF(3, 2), GF(5)):
        A = np.array([[rng.randrange(f.q) for _ in range(5)] for _ in range(4)])
        B = np.array([[rng.randrange(f.q) for _ in range(5)] for _ in range(4)])
        assert (f.aadd(A, B) == np.vectorize(f.add)(A, B)).all()
        assert (f.amul(A, B) == np.vectorize(f.mul)(A, B)).all()
        assert (f.asub(A, B) == np.vectorize(f.sub)(A, B)).all()
        assert (f.afrob(A) == np.vectorize(f.frob)(A)).all()
        assert (f.arank(A) == np.vectorize(f.rank)(A)).all()
        c = rng.randrange(1, f.q)
        assert (f.ascale(A, c) == np.vectorize(lambda a: f.mul(a, c))(A)).all()


def test_user_modulus():
    # the default GF(4) modulus, passed explicitly, gives the same field
    f = GF(2, 2, modulus=(1, 1, 1))
    assert f == GF(2, 2)
    # x^2 + 1 is reducible over GF(2): (x+1)^2
    with pytest.raises(ShapeError):
        GF(2, 2, modulus=(1, 0, 1))
    # x^2 + 1 is irreducible over GF(3) but x is not primitive (order 4)
    f9 = GF(3, 2, modulus=(1, 0, 1))
    assert f9.q == 9
    for a in f9.units():
        assert f9.mul(a, f9.inv(a)) == 1
    seen = {1}
    a = f9.xi
    while a != 1:
        seen.add(a)
        a = f9.mul(a, f9.xi)
    assert len(seen) == 8
    with pytest.raises(ShapeError):
        GF(2, 3, modulus=(1, 1, 1))  # wrong degree


def test_limits():
    with pytest.raises(CapacityExceeded):
        GF(2, 17)
    with pytest.raises(ShapeError):
        GF(4)  # not prime
    f = GF(2, 16)  # largest supported size
    assert f.q == 65536
    a = f.pow(f.xi, 12345)
    assert f.mul(a, f.inv(a)) == 1


def test_field_identity_cache():
    assert GF(2, 4) is GF(2, 4)
    assert GF(3) is GF(3)
