"""
Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are rational coefficient vectors reduced modulo the n-th cyclotomic
polynomial. Values of different conductors meet in Q(zeta_lcm).
"""
from functools import lru_cache
from math import gcd
from typing import Dict, Optional, Tuple, Union

import numpy as np
from sympy import QQ, Poly, Rational, cyclotomic_poly, symbols, totient
from sympy.functions.combinatorial.numbers import mobius

from .config import get_settings
from .exceptions import DomainError

_X = symbols("x")

Scalar = Union[int, Rational]


@lru_cache(maxsize=None)
def cyclotomic_modulus(n: int) -> Poly:
    return Poly(cyclotomic_poly(n, _X), _X, domain=QQ)


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return int(totient(n))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _check_conductor(n: int):
    if n < 1:
        raise DomainError(f"conductor must be positive, got {n}")
    cap = get_settings().max_conductor
    if n > cap:
        raise DomainError(f"conductor {n} exceeds the configured maximum {cap}")


class CyclotomicNumber:
    """An element sum_j c_j zeta_n^j of Q(zeta_n), 0 <= j < phi(n)."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Tuple[Rational, ...]):
        self.conductor = conductor
        self.coeffs = coeffs

    # ----- construction -----

    @classmethod
    def _from_poly(cls, n: int, poly: Poly) -> "CyclotomicNumber":
        reduced = poly.rem(cyclotomic_modulus(n))
        low_first = [Rational(c) for c in reversed(reduced.all_coeffs())]
        d = _degree(n)
        low_first = (low_first + [Rational(0)] * d)[:d]
        return cls(n, tuple(low_first))

    @classmethod
    def from_rational(cls, value: Scalar, n: int = 1) -> "CyclotomicNumber":
        _check_conductor(n)
        coeffs = [Rational(0)] * _degree(n)
        coeffs[0] = Rational(value)
        return cls(n, tuple(coeffs))

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "CyclotomicNumber":
        """zeta_n^k with zeta_n = exp(2 pi i / n) under the standard embedding."""
        _check_conductor(n)
        return cls._from_poly(n, Poly(_X ** (k % n), _X, domain=QQ))

    def _poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), _X, domain=QQ)

    def _coerce(self, other) -> Optional["CyclotomicNumber"]:
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Rational)):
            return CyclotomicNumber.from_rational(other, 1)
        try:
            return CyclotomicNumber.from_rational(Rational(other), 1)
        except (TypeError, ValueError):
            return None

    def push(self, n: int) -> "CyclotomicNumber":
        """The same number viewed in Q(zeta_n); n must be a multiple of the conductor."""
        if n == self.conductor:
            return self
        if n % self.conductor:
            raise DomainError(f"Q(zeta_{self.conductor}) is not contained in Q(zeta_{n})")
        _check_conductor(n)
        step = n // self.conductor
        return CyclotomicNumber._from_poly(n, self._poly().compose(Poly(_X ** step, _X, domain=QQ)))

    def _common(self, other: "CyclotomicNumber") -> Tuple["CyclotomicNumber", "CyclotomicNumber"]:
        n = _lcm(self.conductor, other.conductor)
        return self.push(n), other.push(n)

    # ----- arithmetic -----

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return CyclotomicNumber(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return CyclotomicNumber._from_poly(a.conductor, a._poly() * b._poly())

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise DomainError("inverse of zero")
        return CyclotomicNumber._from_poly(self.conductor, self._poly().invert(cyclotomic_modulus(self.conductor)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "CyclotomicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ----- comparison -----

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Rational:
        """Tr(x) / phi(n): independent of the conductor x is written in."""
        n = self.conductor
        total = Rational(0)
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            m = n // gcd(n, j)
            total += c * Rational(int(mobius(m)), _degree(m))
        return total

    # ----- Galois action and embeddings -----

    def galois(self, j: int) -> "CyclotomicNumber":
        """The automorphism zeta_n -> zeta_n^j, gcd(j, n) = 1."""
        n = self.conductor
        if gcd(j, n) != 1:
            raise DomainError(f"{j} is not a unit modulo {n}")
        return CyclotomicNumber._from_poly(n, self._poly().compose(Poly(_X ** (j % n), _X, domain=QQ)))

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def embed(self, k: int = 1) -> complex:
        """Image under zeta_n -> exp(2 pi i k / n)."""
        n = self.conductor
        powers = np.exp(2j * np.pi * k * np.arange(len(self.coeffs)) / n)
        return complex(np.dot(np.array([float(c) for c in self.coeffs]), powers))

    def root_exponent(self) -> Optional[int]:
        """k with self = zeta_N^k, N = lcm(2, n), or None if not a root of unity."""
        return _root_table(self.conductor).get(self.coeffs)

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if j == 0 else f"{c}*z{self.conductor}^{j}")
        return " + ".join(terms) if terms else "0"


def unit_group_order(n: int) -> int:
    """Order of the roots of unity in Q(zeta_n)."""
    return n if n % 2 == 0 else 2 * n


@lru_cache(maxsize=None)
def _root_table(n: int) -> Dict[Tuple[Rational, ...], int]:
    N = unit_group_order(n)
    if N == n:
        gen = CyclotomicNumber.root_of_unity(n, 1)
    else:
        # zeta_2n = -zeta_n^((n+1)/2) for odd n
        gen = -CyclotomicNumber.root_of_unity(n, (n + 1) // 2)
    table = {}
    value = CyclotomicNumber.from_rational(1, n)
    for k in range(N):
        table[value.coeffs] = k
        value = value * gen
    return table


def zeta(n: int, k: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.root_of_unity(n, k)


def embeddings(n: int):
    """One embedding index k per conjugate pair: 1 <= k <= n/2, gcd(k, n) = 1."""
    if n <= 2:
        return [1]
    return [k for k in range(1, n // 2 + 1) if gcd(k, n) == 1]
