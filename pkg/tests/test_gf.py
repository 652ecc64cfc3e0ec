import itertools

import numpy as np
import pytest

from meanking.errors import DegreeTooLarge, DivisionByZero, NotPrime
from meanking.gf import field_create, field_of_order, is_irreducible, prime_power

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (2, 4),
                (5, 2), (3, 3), (2, 5), (7, 2), (2, 6)]


def reducible_by_products(m, p):
    """Oracle: is monic m a product of two monic polynomials of lower degree?"""
    n = len(m) - 1
    target = tuple(m)
    for k in range(1, n // 2 + 1):
        for a_low in itertools.product(range(p), repeat=k):
            for b_low in itertools.product(range(p), repeat=n - k):
                a, b = list(a_low) + [1], list(b_low) + [1]
                prod = [0] * (n + 1)
                for i, x in enumerate(a):
                    for j, y in enumerate(b):
                        prod[i + j] = (prod[i + j] + x * y) % p
                if tuple(prod) == target:
                    return True
    return False


def oracle_mul(x, y, p, modulus):
    """Schoolbook product then rewrite x^n -> -(lower part of modulus) until degree < n."""
    n = len(modulus) - 1
    xc = [(x // p**k) % p for k in range(n)]
    yc = [(y // p**k) % p for k in range(n)]
    prod = [0] * (2 * n)
    for i in range(n):
        for j in range(n):
            prod[i + j] += xc[i] * yc[j]
    for deg in range(2 * n - 1, n - 1, -1):
        c = prod[deg]
        prod[deg] = 0
        for k in range(n):
            prod[deg - n + k] -= c * modulus[k]
    return sum((prod[k] % p) * p**k for k in range(n))


def test_prime_field_modulus_is_x():
    F = field_create(3, 1)
    assert F.order == 3
    assert F.modulus == (0, 1)


def test_gf4_modulus():
    # the four monic quadratics over GF(2): x^2, x^2+1, x^2+x, x^2+x+1
    quadratics = [(c0, c1, 1) for c0 in range(2) for c1 in range(2)]
    irreducible = [q for q in quadratics if not reducible_by_products(q, 2)]
    assert irreducible == [(1, 1, 1)]
    assert field_create(2, 2).modulus == (1, 1, 1)


def test_not_prime():
    with pytest.raises(NotPrime):
        field_create(4, 1)


def test_size_bound():
    with pytest.raises(DegreeTooLarge):
        field_create(2, 17)
    assert field_create(2, 16).order == 2**16


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_modulus_is_smallest_irreducible(p, n):
    F = field_create(p, n)
    if n == 1:
        return
    assert not reducible_by_products(list(F.modulus), p)
    for low in itertools.product(range(p), repeat=n):
        if tuple(low) == F.modulus[:-1]:
            break
        assert reducible_by_products(list(low) + [1], p)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)])
def test_irreducibility_matches_product_oracle(p, n):
    for low in itertools.product(range(p), repeat=n):
        m = list(low) + [1]
        assert is_irreducible(m, p) == (not reducible_by_products(m, p))


def test_examples():
    assert field_create(3, 1).add(1, 2) == 0
    F4 = field_create(2, 2)
    assert F4.mul(2, 2) == 3  # x * x = x + 1
    assert field_create(5, 1).mul(2, 3) == 1
    assert field_create(5, 1).inv(2) == 3
    assert F4.inv(2) == 3
    with pytest.raises(DivisionByZero):
        field_create(3, 1).inv(0)


def test_trace_examples():
    assert field_create(3, 1).trace(2) == 2
    F4 = field_create(2, 2)
    # Frobenius sum x + x^2 = x + (x + 1) = 1
    assert F4.add(2, F4.mul(2, 2)) == 1
    assert F4.trace(2) == 1
    assert F4.trace(0) == 0


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_mul_matches_oracle(p, n):
    F = field_create(p, n)
    q = F.order
    for x in range(q):
        for y in range(q):
            assert F.mul_table[x, y] == oracle_mul(x, y, p, F.modulus)


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_field_axioms(p, n):
    F = field_create(p, n)
    q = F.order
    add, mul = F.add_table, F.mul_table
    a = np.arange(q)
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    assert np.array_equal(add, add.T)
    assert np.array_equal(mul, mul.T)
    assert np.array_equal(add[add[A, B], C], add[A, add[B, C]])
    assert np.array_equal(mul[mul[A, B], C], mul[A, mul[B, C]])
    assert np.array_equal(mul[A, add[B, C]], add[mul[A, B], mul[A, C]])
    assert np.array_equal(add[0], a)
    assert np.array_equal(mul[1], a)
    assert np.all(mul[0] == 0)
    # every row of the addition table and every nonzero row of the product table is a permutation
    assert all(sorted(row) == list(range(q)) for row in add)
    assert all(sorted(row) == list(range(q)) for row in mul[1:])
    for x in range(q):
        assert add[x, F.neg(x)] == 0
        assert F.sub(x, x) == 0
        if x:
            assert mul[x, F.inv(x)] == 1


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_multiplicative_group_is_cyclic(p, n):
    F = field_create(p, n)
    q = F.order

    def order(g):
        k, y = 1, g
        while y != 1:
            y = F.mul(y, g)
            k += 1
        return k

    assert max(order(g) for g in range(1, q)) == q - 1


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_trace_fibers(p, n):
    F = field_create(p, n)
    tr = F.trace_table
    assert set(tr.tolist()) == set(range(p))
    assert all(np.sum(tr == c) == p ** (n - 1) for c in range(p))
    q = F.order
    for x in range(q):
        for y in range(0, q, max(1, q // 8)):
            assert tr[F.add(x, y)] == (tr[x] + tr[y]) % p


def test_element_encoding_roundtrip():
    F = field_create(3, 2)
    for x in range(9):
        assert F.element(F.coeffs(x)) == x
    assert F.coeffs(5) == [2, 1]


@pytest.mark.parametrize("d,expected", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (6, None), (1, None), (12, None), (49, (7, 2))])
def test_prime_power(d, expected):
    assert prime_power(d) == expected


def test_field_of_order():
    assert field_of_order(9).modulus == (1, 0, 1)  # x^2 + 1
    assert field_of_order(8).modulus == (1, 0, 1, 1)  # x^3 + x^2 + 1
