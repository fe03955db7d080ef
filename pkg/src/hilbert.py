"""
Tame Hilbert symbols and the torsion of K_1 of a Tate curve over a p-adic field.
"""
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Set

from sympy import multiplicity

from .exceptions import UnsupportedCaseError
from .padic import (
    FieldSpec,
    PAdicElement,
    root_order,
    roots_of_unity,
    teichmuller,
)
from .utils import logger


def hilbert_symbol_tame(a: PAdicElement, b: PAdicElement, n: int) -> PAdicElement:
    """
    The tame symbol (a, b)_n = omega((-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)})^{(q_res-1)/n}.

    Args:
        a, b: nonzero elements of K
        n: order of the target group of roots of unity, dividing q_res - 1

    Returns:
        PAdicElement: an n-th root of unity
    """
    fld = a.field
    q_res = fld.residue_cardinality
    if (q_res - 1) % n != 0:
        raise UnsupportedCaseError(f"n={n} does not divide q_res - 1 = {q_res - 1}")
    va, vb = a.ord(), b.ord()
    c = (a ** vb) * (b ** (-va))
    if (va * vb) % 2:
        c = -c
    return teichmuller(c) ** ((q_res - 1) // n)


def torsion_generators(fld: FieldSpec) -> Dict[str, PAdicElement]:
    """Named generators of K* modulo n-th powers for tame n (1-units are n-divisible)."""
    mu, n = roots_of_unity(fld)
    q1 = fld.residue_cardinality - 1
    gens = {"pi": fld.uniformizer()}
    if q1 > 1:
        gens["omega"] = next(z for z in mu if root_order(z, n) == q1)
    gens["1+pi"] = fld.one() + fld.uniformizer()
    if fld.f > 1:
        gens["1+t*pi"] = fld.one() + fld.generator() * fld.uniformizer()
    return gens


@dataclass
class TorsionResult:
    """Torsion of K_1(E_q): Z/n x Z/n x (mu_n / image of (q, .)_n)."""

    n: int
    orders: List[int]
    symbol_orders: Dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> Dict:
        return {"n": self.n, "orders": list(self.orders), "symbol_orders": dict(self.symbol_orders)}


def torsion_of_K1(fld: FieldSpec, q: PAdicElement) -> TorsionResult:
    """
    Compute the invariants [n, n, n / #image] of the torsion subgroup of K_1(E_q).

    Args:
        fld: the base field K
        q: Tate parameter, ord(q) > 0

    Returns:
        TorsionResult: n = #mu(K) and the cyclic orders
    """
    _, n = roots_of_unity(fld)
    if n % fld.p == 0:
        raise UnsupportedCaseError(f"mu(K) has order {n} divisible by p={fld.p}: wild part unsupported")
    if q.ord() <= 0:
        raise UnsupportedCaseError("Tate parameter must have positive valuation")
    symbol_orders = {}
    image = 1
    for name, g in torsion_generators(fld).items():
        value = hilbert_symbol_tame(q, g, n)
        k = root_order(value, n)
        symbol_orders[name] = k
        image = image * k // gcd(image, k)
    orders = [n, n, n // image]
    logger.info(f"🧮 torsion of K_1: n={n}, image of (q,.)_n has order {image} -> {orders}")
    return TorsionResult(n=n, orders=orders, symbol_orders=symbol_orders)


def kummer_order(p: int, q: int, n: int, depth: int = 3) -> int:
    """
    Order of the class of q in Q_p* / (Q_p*)^n.

    The unit part is tested against every n-th power of a unit modulo p^depth, so no
    roots of unity or symbols are involved.
    """
    if (p - 1) % n:
        raise UnsupportedCaseError(f"n={n} does not divide p - 1")
    k = multiplicity(p, abs(q))
    w = q // p ** k
    modulus = p ** depth
    powers = {pow(u, n, modulus) for u in range(1, modulus) if u % p}
    for m in range(1, n):
        if (k * m) % n == 0 and pow(w, m, modulus) in powers:
            return m
    return n


def power_residue_image(p: int, q: int, n: int, depth: int = 3) -> Set[int]:
    """
    Residues mod p of the image of c -> (q, c)_n on Q_p*.

    The pairing is nondegenerate, so the image is the subgroup of mu_n whose order is
    the order of q modulo n-th powers.
    """
    order = kummer_order(p, q, n, depth)
    return {x for x in range(1, p) if pow(x, order, p) == 1}


def symbol_residue(value: PAdicElement) -> int:
    """The residue in F_p of a root of unity of Q_p, as an integer."""
    return value.residue()[0]
