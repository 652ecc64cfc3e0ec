"""Arithmetic in GF(p^n).

Elements are plain integers ``0 .. p^n - 1``; the integer ``x`` stands for the
polynomial whose k-th coefficient is the k-th base-p digit of ``x``.  This
keeps striation tables pure integer data.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegreeTooLarge, DivisionByZero, NotPrime

MAX_ORDER = 2**16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def prime_power(d: int) -> tuple[int, int] | None:
    """Return ``(p, n)`` with ``d == p**n``, or None if d is not a prime power."""
    if d < 2:
        return None
    for p in range(2, d + 1):
        if d % p == 0:
            if not is_prime(p):
                return None
            n = 0
            while d % p == 0:
                d //= p
                n += 1
            return (p, n) if d == 1 else None
    return None


# -- polynomials over GF(p), coefficient lists with constant term first --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_mod(a, m, p):
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        shift = len(a) - 1 - dm
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - c * mk) % p
        _trim(a)
    return a


def is_irreducible(m, p) -> bool:
    """Trial division of the monic ``m`` by every monic polynomial of degree <= deg/2."""
    n = len(m) - 1
    if n < 1:
        return False
    for k in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not poly_mod(m, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n (low-degree coefficient compared first)."""
    for low in itertools.product(range(p), repeat=n):
        m = list(low) + [1]
        if is_irreducible(m, p):
            return tuple(m)
    raise AssertionError(f"no irreducible polynomial of degree {n} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^n) with a fixed irreducible modulus."""

    p: int
    n: int
    modulus: tuple[int, ...]
    order: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "order", self.p**self.n)

    def __repr__(self):
        return f"FieldSpec(p={self.p}, n={self.n}, modulus={self.modulus})"

    # element encoding
    def coeffs(self, x: int) -> list[int]:
        self._check(x)
        out = []
        for _ in range(self.n):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def element(self, coeffs) -> int:
        if len(coeffs) > self.n:
            raise ValueError(f"expected at most {self.n} coefficients")
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def _check(self, x):
        if not 0 <= x < self.order:
            raise ValueError(f"{x} is not an element of GF({self.order})")

    # arithmetic
    def add(self, x: int, y: int) -> int:
        return self.element([(a + b) % self.p for a, b in zip(self.coeffs(x), self.coeffs(y))])

    def sub(self, x: int, y: int) -> int:
        return self.element([(a - b) % self.p for a, b in zip(self.coeffs(x), self.coeffs(y))])

    def neg(self, x: int) -> int:
        return self.element([-a % self.p for a in self.coeffs(x)])

    def mul(self, x: int, y: int) -> int:
        prod = poly_mul(_trim(self.coeffs(x)), _trim(self.coeffs(y)), self.p)
        return self.element(poly_mod(prod, list(self.modulus), self.p))

    def pow(self, x: int, e: int) -> int:
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x: int) -> int:
        self._check(x)
        if x == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self.pow(x, self.order - 2)

    def trace(self, x: int) -> int:
        """Sum of the Frobenius conjugates x, x^p, ..., x^(p^(n-1)); lands in GF(p)."""
        total, y = 0, x
        for _ in range(self.n):
            total = self.add(total, y)
            y = self.pow(y, self.p)
        if total >= self.p:
            raise AssertionError("trace left the prime subfield")
        return total

    # whole-field tables, used by the vectorised constructions
    @cached_property
    def add_table(self) -> np.ndarray:
        return self._table(self.add)

    @cached_property
    def mul_table(self) -> np.ndarray:
        return self._table(self.mul)

    @cached_property
    def trace_table(self) -> np.ndarray:
        t = np.array([self.trace(x) for x in range(self.order)], dtype=np.int64)
        t.setflags(write=False)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        t = np.array([self.neg(x) for x in range(self.order)], dtype=np.int64)
        t.setflags(write=False)
        return t

    def _table(self, op):
        q = self.order
        t = np.array([[op(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
        t.setflags(write=False)
        return t


def field_create(p: int, n: int = 1, max_order: int = MAX_ORDER) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(p)
    if n < 1:
        raise ValueError("degree must be at least 1")
    if p**n > max_order:
        raise DegreeTooLarge(f"GF({p}^{n}) exceeds the size bound {max_order}")
    modulus = (0, 1) if n == 1 else smallest_irreducible(p, n)
    return FieldSpec(p, n, modulus)


def field_of_order(d: int) -> FieldSpec:
    from .errors import UnsupportedDimension

    pn = prime_power(d)
    if pn is None:
        raise UnsupportedDimension(d, "not a prime power")
    return field_create(*pn)
