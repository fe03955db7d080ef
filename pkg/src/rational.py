"""
Rational functions on P^1 in factored form c * u^m * prod (u - z_i)^{n_i}.

Coefficients may be p-adic elements or exact cyclotomic numbers; anything with
field arithmetic and == works. Points are values, or the markers ZERO and INFINITY.
"""
from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

from .exceptions import DomainError


class _Point:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


ZERO = _Point("0")
INFINITY = _Point("oo")


@dataclass(frozen=True)
class RationalFunction:
    """c * u^u_power * prod_i (u - root_i)^mult_i with distinct nonzero roots."""

    constant: Any
    u_power: int = 0
    roots: Tuple[Tuple[Any, int], ...] = ()

    __hash__ = None

    @classmethod
    def build(cls, constant, u_power: int = 0, pairs: Sequence[Tuple[Any, int]] = ()) -> "RationalFunction":
        """Merge equal roots and drop zero multiplicities."""
        merged: List[List] = []
        for z, n in pairs:
            if n == 0:
                continue
            if _is_zero(z):
                u_power += n
                continue
            for entry in merged:
                if entry[0] == z:
                    entry[1] += n
                    break
            else:
                merged.append([z, n])
        roots = tuple((z, n) for z, n in merged if n != 0)
        return cls(constant, u_power, roots)

    @classmethod
    def coordinate(cls, one) -> "RationalFunction":
        """The function u; `one` fixes the coefficient ring."""
        return cls(one, 1, ())

    @classmethod
    def constant_function(cls, c) -> "RationalFunction":
        return cls(c, 0, ())

    @property
    def degree(self) -> int:
        return self.u_power + sum(n for _, n in self.roots)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.build(self.constant * other.constant, self.u_power + other.u_power,
                                      list(self.roots) + list(other.roots))

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def inverse(self) -> "RationalFunction":
        return RationalFunction(1 / self.constant, -self.u_power, tuple((z, -n) for z, n in self.roots))

    def __pow__(self, k: int) -> "RationalFunction":
        return RationalFunction(self.constant ** k, self.u_power * k, tuple((z, n * k) for z, n in self.roots))

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(self.constant * c, self.u_power, self.roots)

    def order_at(self, x) -> int:
        if x is ZERO:
            return self.u_power
        if x is INFINITY:
            return -self.degree
        for z, n in self.roots:
            if z == x:
                return n
        return 0

    def leading_at(self, x):
        """Leading coefficient of the expansion at x in the standard uniformizer."""
        c = self.constant
        if x is INFINITY:
            return c
        if x is ZERO:
            for z, n in self.roots:
                c = c * (-z) ** n
            return c
        c = c * x ** self.u_power
        for z, n in self.roots:
            if z == x:
                continue
            c = c * (x - z) ** n
        return c

    def evaluate(self, x):
        if self.order_at(x) != 0:
            raise DomainError(f"{x!r} is a zero or pole")
        return self.leading_at(x)

    def support(self) -> List:
        pts: List = []
        if self.u_power:
            pts.append(ZERO)
        pts.extend(z for z, _ in self.roots)
        if self.degree:
            pts.append(INFINITY)
        return pts


def _is_zero(z) -> bool:
    if hasattr(z, "is_zero") and callable(z.is_zero):
        return z.is_zero()
    return z == 0


def tame_symbol_rational(f: RationalFunction, g: RationalFunction, x):
    """(-1)^{ab} f~(x)^b / g~(x)^a with a = ord_x f, b = ord_x g."""
    a, b = f.order_at(x), g.order_at(x)
    value = f.leading_at(x) ** b / g.leading_at(x) ** a
    if (a * b) % 2:
        value = -value
    return value


def union_support(*functions: RationalFunction) -> List:
    points: List = []
    for fn in functions:
        for x in fn.support():
            if x is ZERO or x is INFINITY:
                if not any(y is x for y in points):
                    points.append(x)
            elif not any((y is not ZERO and y is not INFINITY) and y == x for y in points):
                points.append(x)
    return points


def weil_reciprocity_product(f: RationalFunction, g: RationalFunction):
    """Product of tame symbols of {f, g} over all points of P^1 (it must be 1)."""
    value = None
    for x in union_support(f, g):
        t = tame_symbol_rational(f, g, x)
        value = t if value is None else value * t
    if value is None:
        value = f.constant / f.constant
    return value
