"""
Arithmetic in finite extensions K of Q_p.

A field is either Q_p, an unramified extension Q_p[t]/T(t), a totally ramified
extension given by an Eisenstein polynomial, or an Eisenstein extension on top of
an unramified base. Integers of K are stored as flat tuples of d = e*f residues
modulo p^M: index j*f + i holds the coefficient of pi^j t^i.

Elements use a capped-relative model: pi^v * unit with a relative precision
(number of known pi-adic digits of the unit) never exceeding the field cap N.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, cyclotomic_poly, isprime, multiplicity, primefactors, symbols, totient

from .exceptions import (
    DomainError,
    FieldMismatchError,
    PrecisionError,
    UnsupportedCaseError,
)
from .utils import logger

Raw = Tuple[int, ...]
Number = Union[int, Fraction, "PAdicElement"]

_X = symbols("x")

# Candidate cap for the digit search in polynomial root finding.
_ROOT_SEARCH_LIMIT = 50000


@dataclass(frozen=True)
class FieldSpec:
    """
    A p-adic field of degree d = e*f over Q_p, with pi-adic precision cap N.

    Args:
        p: the residue characteristic
        poly: top defining polynomial, coefficients in descending order. Over a
            base, each coefficient is an int or a sequence (ascending in t).
        base_poly: monic polynomial irreducible mod p defining the unramified
            level, descending order; None for no unramified level.
        precision: relative pi-adic precision cap N
    """

    p: int
    poly: Optional[Tuple] = None
    base_poly: Optional[Tuple[int, ...]] = None
    precision: int = 40

    e: int = dc_field(init=False, compare=False, repr=False)
    f: int = dc_field(init=False, compare=False, repr=False)
    d: int = dc_field(init=False, compare=False, repr=False)
    M: int = dc_field(init=False, compare=False, repr=False)
    mod: int = dc_field(init=False, compare=False, repr=False)
    _cache: dict = dc_field(init=False, compare=False, repr=False, default_factory=dict)

    def __post_init__(self):
        p = self.p
        if not isprime(p):
            raise DomainError(f"p={p} is not prime")
        if self.precision < 1:
            raise DomainError("precision must be positive")
        poly = self.poly if self.poly is not None else (1, -p)
        poly = tuple(tuple(c) if isinstance(c, (list, tuple)) else int(c) for c in poly)
        object.__setattr__(self, "poly", poly)
        if self.base_poly is not None:
            object.__setattr__(self, "base_poly", tuple(int(c) for c in self.base_poly))

        base = self.base_poly
        if base is None and self._is_eisenstein_int(poly, p):
            f = 1
            top = [(int(c),) for c in reversed(poly)]
        elif base is None:
            # single polynomial, not Eisenstein: must define an unramified extension
            ints = [int(c) for c in poly]
            if ints[0] != 1 or not Poly(ints, _X, modulus=p).is_irreducible:
                raise DomainError("defining polynomial is neither Eisenstein nor irreducible mod p")
            # canonical form: unramified base under the trivial top polynomial u - p
            base = tuple(ints)
            object.__setattr__(self, "base_poly", base)
            object.__setattr__(self, "poly", (1, -p))
            f = len(ints) - 1
            top = [tuple([-p] + [0] * (f - 1)), tuple([1] + [0] * (f - 1))]
        else:
            if base[0] != 1 or not Poly(list(base), _X, modulus=p).is_irreducible:
                raise DomainError("base polynomial must be monic and irreducible mod p")
            f = len(base) - 1
            top = []
            for c in reversed(poly):
                vec = list(c) if isinstance(c, tuple) else [int(c)]
                vec = (vec + [0] * f)[:f]
                top.append(tuple(vec))
        e = len(top) - 1
        if e < 1:
            raise DomainError("defining polynomial must have degree >= 1")
        d = e * f
        M = -(-self.precision // e) + 2
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "mod", p ** M)

        mod = p ** M
        # t^f = -sum T_i t^i
        if base is not None:
            t_low = [(-c) % mod for c in reversed(base[1:])]
        else:
            t_low = []
        self._cache["t_low"] = t_low
        self._cache["t_red"] = self._build_t_reductions(t_low, f, mod)

        if tuple(top[-1]) != tuple([1] + [0] * (f - 1)):
            raise DomainError("top polynomial must be monic")
        if not all(all(x % p == 0 for x in c) for c in top[:-1]):
            raise DomainError("top polynomial is not Eisenstein")
        if all((x // p) % p == 0 for x in top[0]):
            raise DomainError("top polynomial is not Eisenstein: constant term not p*unit")
        self._cache["e_low"] = [tuple((-x) % mod for x in c) for c in top[:-1]]

    @staticmethod
    def _is_eisenstein_int(poly, p: int) -> bool:
        if any(isinstance(c, tuple) for c in poly):
            return False
        ints = [int(c) for c in poly]
        if ints[0] != 1 or len(ints) < 2:
            return False
        low = ints[1:]
        return all(c % p == 0 for c in low) and low[-1] % (p * p) != 0

    @staticmethod
    def _build_t_reductions(t_low, f, mod):
        """Reduced vectors of t^k for f <= k <= 2f-2."""
        red = {}
        if f == 1:
            return red
        cur = list(t_low)
        red[f] = tuple(cur)
        for k in range(f + 1, 2 * f - 1):
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [(nxt[i] + top * t_low[i]) % mod for i in range(f)]
            red[k] = tuple(cur)
        return red

    # ===== CONSTRUCTORS =====

    @classmethod
    def qp(cls, p: int, precision: int = 40) -> "FieldSpec":
        return cls(p=p, poly=(1, -p), precision=precision)

    @classmethod
    def from_description(cls, p: int, poly: Optional[Sequence] = None,
                         base_poly: Optional[Sequence[int]] = None,
                         precision: int = 40) -> "FieldSpec":
        """Build a field from the textual scenario description."""
        if poly is None:
            poly = (1, -p)
        return cls(p=p, poly=tuple(tuple(c) if isinstance(c, list) else c for c in poly),
                   base_poly=tuple(base_poly) if base_poly else None,
                   precision=precision)

    def with_precision(self, precision: int) -> "FieldSpec":
        return FieldSpec(p=self.p, poly=self.poly, base_poly=self.base_poly, precision=precision)

    def describe(self) -> str:
        base = f", base={list(self.base_poly)}" if self.base_poly and self.e > 1 else ""
        kind = "unramified" if self.e == 1 and self.f > 1 else ("ramified" if self.e > 1 else "Q_p")
        return f"{kind} p={self.p} e={self.e} f={self.f}{base} N={self.precision}"

    # ===== DERIVED QUANTITIES =====

    @property
    def residue_cardinality(self) -> int:
        return self.p ** self.f

    @property
    def cap(self) -> int:
        return self.e * self.M

    def power_threshold(self, nu: int) -> int:
        """ord above which 1 + x is certified to be a p^nu-th power."""
        return nu * self.e + -(-self.e // (self.p - 1)) + 1

    # ===== RAW ARITHMETIC ON INTEGERS OF K =====

    def zero_raw(self) -> Raw:
        return (0,) * self.d

    def int_raw(self, n: int) -> Raw:
        r = [0] * self.d
        r[0] = n % self.mod
        return tuple(r)

    def add_raw(self, a: Raw, b: Raw) -> Raw:
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub_raw(self, a: Raw, b: Raw) -> Raw:
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg_raw(self, a: Raw) -> Raw:
        m = self.mod
        return tuple((-x) % m for x in a)

    def _fmul(self, a, b, mod):
        f = self.f
        if f == 1:
            return ((a[0] * b[0]) % mod,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = prod[:f]
        red = self._cache["t_red"]
        for k in range(f, 2 * f - 1):
            c = prod[k]
            if c:
                vec = red[k]
                for i in range(f):
                    out[i] += c * vec[i]
        return tuple(x % mod for x in out)

    def mul_raw(self, a: Raw, b: Raw) -> Raw:
        if self.d == 1:
            return ((a[0] * b[0]) % self.mod,)
        e, f, mod = self.e, self.f, self.mod
        ac = [a[j * f:(j + 1) * f] for j in range(e)]
        bc = [b[j * f:(j + 1) * f] for j in range(e)]
        prod = [[0] * f for _ in range(2 * e - 1)]
        for i in range(e):
            if not any(ac[i]):
                continue
            for j in range(e):
                if not any(bc[j]):
                    continue
                c = self._fmul(ac[i], bc[j], mod)
                row = prod[i + j]
                for s in range(f):
                    row[s] += c[s]
        e_low = self._cache["e_low"]
        for k in range(2 * e - 2, e - 1, -1):
            c = tuple(x % mod for x in prod[k])
            if not any(c):
                continue
            for j in range(e):
                term = self._fmul(c, e_low[j], mod)
                row = prod[k - e + j]
                for s in range(f):
                    row[s] += term[s]
        out = []
        for j in range(e):
            out.extend(x % mod for x in prod[j])
        return tuple(out)

    def valuation_raw(self, a: Raw, cap: Optional[int] = None) -> int:
        """pi-adic valuation of an integer of K (cap if zero)."""
        cap = self.cap if cap is None else cap
        e, f, p, M = self.e, self.f, self.p, self.M
        best = cap
        for j in range(e):
            chunk = a[j * f:(j + 1) * f]
            vp = min((min(multiplicity(p, abs(x)), M) for x in chunk if x), default=M)
            if vp >= M:
                continue
            best = min(best, e * vp + j)
        return best

    def pi_power_raw(self, k: int) -> Raw:
        cache = self._cache.setdefault("pi_pow", {})
        if k in cache:
            return cache[k]
        if k >= self.cap:
            result = self.zero_raw()
        elif self.e == 1:
            result = self.int_raw(self.p ** k)
        else:
            result = self.int_raw(1)
            pi = self.uniformizer_raw()
            for _ in range(k):
                result = self.mul_raw(result, pi)
        cache[k] = result
        return result

    def uniformizer_raw(self) -> Raw:
        if self.e == 1:
            return self.int_raw(self.p)
        r = [0] * self.d
        r[self.f] = 1
        return tuple(r)

    def _w_inverse_raw(self) -> Raw:
        """Inverse of the unit w = pi^e / p."""
        if "w_inv" in self._cache:
            return self._cache["w_inv"]
        if self.e == 1:
            w_inv = self.int_raw(1)
        else:
            # w = -sum (E_j / p) pi^j; the top p-adic digit is lost in the division
            p, mod = self.p, self.mod
            w = []
            for c in self._cache["e_low"]:
                w.extend((x // p) % mod for x in c)
            w_inv = self.unit_inverse_raw(tuple(w))
        self._cache["w_inv"] = w_inv
        return w_inv

    def divide_pi_power_raw(self, a: Raw, v: int) -> Raw:
        """Exact division by pi^v of an integer with valuation >= v."""
        if v <= 0:
            return a
        e, p = self.e, self.p
        s, t = divmod(v, e)
        if e == 1:
            q = p ** v
            return tuple((x // q) % self.mod for x in a)
        shifted = self.mul_raw(a, self.pi_power_raw(e - t))
        q = p ** (s + 1)
        divided = tuple((x // q) % self.mod for x in shifted)
        w_inv = self._w_inverse_raw()
        for _ in range(s + 1):
            divided = self.mul_raw(divided, w_inv)
        return divided

    def residue_of_raw(self, a: Raw) -> Tuple[int, ...]:
        """Image in the residue field F_q as a vector over F_p."""
        return tuple(x % self.p for x in a[:self.f])

    def _residue_inverse(self, r: Tuple[int, ...]) -> Tuple[int, ...]:
        p = self.p
        if self.f == 1:
            return (pow(r[0], -1, p),)
        result = (1,) + (0,) * (self.f - 1)
        base = r
        k = self.residue_cardinality - 2
        while k:
            if k & 1:
                result = self._fmul(result, base, p)
            base = self._fmul(base, base, p)
            k >>= 1
        return result

    def unit_inverse_raw(self, a: Raw) -> Raw:
        if self.d == 1:
            return (pow(a[0], -1, self.mod),)
        r = self.residue_of_raw(a)
        if not any(r):
            raise DomainError("not a unit")
        y = list(self._residue_inverse(r)) + [0] * (self.d - self.f)
        y = tuple(y)
        two = self.int_raw(2)
        steps = max(1, math.ceil(math.log2(self.cap + 1)) + 1)
        for _ in range(steps):
            y = self.mul_raw(y, self.sub_raw(two, self.mul_raw(a, y)))
        return y

    def pow_raw(self, a: Raw, k: int) -> Raw:
        result = self.int_raw(1)
        base = a
        while k:
            if k & 1:
                result = self.mul_raw(result, base)
            base = self.mul_raw(base, base)
            k >>= 1
        return result

    def truncate_raw(self, a: Raw, level: int) -> Raw:
        """Reduce an integer of K modulo pi^level (digit truncation)."""
        e, f, p = self.e, self.f, self.p
        out = []
        for j in range(e):
            k = max(0, -(-(level - j) // e))
            m = p ** k
            out.extend(x % m for x in a[j * f:(j + 1) * f])
        return tuple(out)

    # ===== ELEMENT CONSTRUCTORS =====

    def element_from_raw(self, raw: Raw, abs_precision: int, base_valuation: int = 0) -> "PAdicElement":
        """Normalize pi^base_valuation * raw, known modulo pi^abs_precision."""
        known = abs_precision - base_valuation
        w = self.valuation_raw(raw, cap=max(known, 0))
        if w >= known:
            return PAdicElement(self, abs_precision, None, 0)
        unit = self.divide_pi_power_raw(raw, w)
        rel = min(known - w, self.precision)
        return PAdicElement(self, base_valuation + w, unit, rel)

    def zero(self) -> "PAdicElement":
        return PAdicElement(self, math.inf, None, 0)

    def one(self) -> "PAdicElement":
        return PAdicElement(self, 0, self.int_raw(1), self.precision)

    def uniformizer(self) -> "PAdicElement":
        return PAdicElement(self, 1, self.int_raw(1), self.precision)

    def generator(self) -> "PAdicElement":
        """The generator t of the unramified level (1 if f = 1)."""
        if self.f == 1:
            return self.one()
        r = [0] * self.d
        r[1] = 1
        return PAdicElement(self, 0, tuple(r), self.precision)

    def from_int(self, n: int) -> "PAdicElement":
        if n == 0:
            return self.zero()
        a = multiplicity(self.p, abs(n))
        m = n // self.p ** a
        unit = self.int_raw(m)
        if a and self.e > 1:
            w_inv = self._w_inverse_raw()
            # p = pi^e * w^{-1}
            unit = self.mul_raw(unit, self.pow_raw(w_inv, a))
        return PAdicElement(self, self.e * a, unit, self.precision)

    def from_fraction(self, x: Fraction) -> "PAdicElement":
        x = Fraction(x)
        num = self.from_int(x.numerator)
        if x.denominator == 1:
            return num
        return num / self.from_int(x.denominator)

    def element(self, x: Number) -> "PAdicElement":
        if isinstance(x, PAdicElement):
            if x.field != self:
                raise FieldMismatchError("element belongs to another field")
            return x
        if isinstance(x, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.describe()}")

    def omega(self, k: Number) -> "PAdicElement":
        """Teichmüller lift of k."""
        return teichmuller(self.element(k))


class PAdicElement:
    """
    pi^valuation * unit with relative precision rel.

    An exact zero has valuation math.inf; an inexact zero has unit None and
    records in valuation the absolute precision to which it is known to vanish.
    """

    __slots__ = ("field", "valuation", "unit", "rel")
    __hash__ = None

    def __init__(self, field: FieldSpec, valuation, unit: Optional[Raw], rel: int):
        self.field = field
        self.valuation = valuation
        self.unit = unit
        self.rel = rel

    # ----- predicates -----

    def is_exact_zero(self) -> bool:
        return self.unit is None and self.valuation == math.inf

    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def absolute_precision(self):
        if self.unit is None:
            return self.valuation
        return self.valuation + self.rel

    def ord(self) -> int:
        if self.is_exact_zero():
            raise DomainError("ord of exact zero")
        if self.unit is None:
            raise PrecisionError(f"no significant digits (zero mod pi^{self.valuation})")
        return self.valuation

    def is_unit(self) -> bool:
        return self.unit is not None and self.valuation == 0

    def is_one(self) -> bool:
        return (self - 1).is_zero()

    def residue(self) -> Tuple[int, ...]:
        if not self.is_unit():
            raise DomainError("residue of a non-unit")
        return self.field.residue_of_raw(self.unit)

    def unit_part(self) -> "PAdicElement":
        if self.unit is None:
            raise PrecisionError("unit part of a zero")
        return PAdicElement(self.field, 0, self.unit, self.rel)

    def to_raw(self) -> Raw:
        """Integer of K representing self (valuation must be >= 0)."""
        if self.unit is None:
            return self.field.zero_raw()
        if self.valuation < 0:
            raise DomainError("element is not integral")
        return self.field.mul_raw(self.unit, self.field.pi_power_raw(self.valuation))

    def as_integer(self) -> int:
        """The rational integer equal to self to its precision."""
        fld = self.field
        if self.unit is None:
            return 0
        if self.valuation < 0:
            raise PrecisionError("element is not integral")
        raw = self.to_raw()
        known = self.absolute_precision
        trunc = fld.truncate_raw(raw, known)
        if any(trunc[1:]):
            raise PrecisionError("element is not a rational integer")
        digits = known // fld.e
        if digits < 1:
            raise PrecisionError("not enough digits to identify an integer")
        m = fld.p ** digits
        n = trunc[0] % m
        return n - m if n > m // 2 else n

    # ----- arithmetic -----

    def _coerce(self, other) -> "PAdicElement":
        if isinstance(other, PAdicElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"mixed fields: {self.field.describe()} vs {other.field.describe()}")
            return other
        return self.field.element(other)

    def __add__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        fld = a.field
        if a.is_exact_zero():
            return b
        if b.is_exact_zero():
            return a
        prec = min(a.absolute_precision, b.absolute_precision)
        if a.unit is None or b.unit is None:
            live = b if a.unit is None else a
            if live.unit is None or live.valuation >= prec:
                return PAdicElement(fld, prec, None, 0)
            return PAdicElement(fld, live.valuation, live.unit, prec - live.valuation)
        vm = min(a.valuation, b.valuation)
        ra = a.unit if a.valuation == vm else fld.mul_raw(a.unit, fld.pi_power_raw(a.valuation - vm))
        rb = b.unit if b.valuation == vm else fld.mul_raw(b.unit, fld.pi_power_raw(b.valuation - vm))
        return fld.element_from_raw(fld.add_raw(ra, rb), prec, vm)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None:
            return self
        return PAdicElement(self.field, self.valuation, self.field.neg_raw(self.unit), self.rel)

    def __sub__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        a = self
        fld = a.field
        if a.is_exact_zero() or b.is_exact_zero():
            return fld.zero()
        if a.unit is None or b.unit is None:
            if a.unit is None and b.unit is None:
                return PAdicElement(fld, a.valuation + b.valuation, None, 0)
            zero, live = (a, b) if a.unit is None else (b, a)
            return PAdicElement(fld, zero.valuation + live.valuation, None, 0)
        return PAdicElement(fld, a.valuation + b.valuation,
                            fld.mul_raw(a.unit, b.unit), min(a.rel, b.rel))

    __rmul__ = __mul__

    def inverse(self) -> "PAdicElement":
        if self.is_exact_zero():
            raise DomainError("division by exact zero")
        if self.unit is None:
            raise PrecisionError("division by a zero known only to precision")
        fld = self.field
        return PAdicElement(fld, -self.valuation, fld.unit_inverse_raw(self.unit), self.rel)

    def __truediv__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * b.inverse()

    def __rtruediv__(self, other):
        try:
            b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return b * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        fld = self.field
        if k == 0:
            return fld.one()
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_exact_zero():
            return fld.zero()
        if self.unit is None:
            return PAdicElement(fld, self.valuation * k, None, 0)
        return PAdicElement(fld, self.valuation * k, fld.pow_raw(self.unit, k), self.rel)

    def __eq__(self, other):
        if not isinstance(other, (PAdicElement, int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        try:
            b = self._coerce(other)
        except FieldMismatchError:
            return False
        if self.is_exact_zero() and b.is_exact_zero():
            return True
        return (self - b).is_zero()

    def lift_to(self, target: FieldSpec) -> "PAdicElement":
        """Move to the same field at another precision cap."""
        fld = self.field
        if (fld.p, fld.poly, fld.base_poly) != (target.p, target.poly, target.base_poly):
            raise FieldMismatchError("lift_to requires the same defining data")
        if self.unit is None:
            return PAdicElement(target, self.valuation, None, 0)
        unit = tuple(x % target.mod for x in self.unit)
        return PAdicElement(target, self.valuation, unit, min(self.rel, target.precision))

    def digits(self) -> List:
        """Little-endian pi-adic digits of the unit (residue vectors for f > 1)."""
        if self.unit is None:
            return []
        fld = self.field
        out = []
        cur = self.unit
        for _ in range(self.rel):
            r = fld.residue_of_raw(cur)
            out.append(r[0] if fld.f == 1 else list(r))
            lifted = tuple(list(r) + [0] * (fld.d - fld.f))
            cur = fld.divide_pi_power_raw(fld.sub_raw(cur, lifted), 1)
        return out

    def __repr__(self):
        return render(self)


def render(x: PAdicElement) -> str:
    """Report rendering: valuation, little-endian digits and the O(pi^N) suffix."""
    if x.is_exact_zero():
        return "0"
    if x.unit is None:
        return f"O(pi^{x.valuation})"
    digits = x.digits()
    body = " ".join(str(d) for d in digits)
    return f"pi^{x.valuation} * [{body}] + O(pi^{x.absolute_precision})"


# ===== OPERATIONS =====

def field_arith(x: PAdicElement, y: Optional[PAdicElement], op: str, k: int = 1) -> PAdicElement:
    """Dispatch one of add, sub, mul, div, pow."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** k
    raise ValueError(f"unknown operation {op!r}")


def teichmuller(x: PAdicElement) -> PAdicElement:
    """The (q_res - 1)-th root of unity congruent to the unit x modulo pi."""
    if x.is_zero() or x.valuation != 0:
        raise DomainError("Teichmüller lift needs a unit")
    fld = x.field
    r = x.residue()
    cache = fld._cache.setdefault("teich", {})
    if r not in cache:
        y = tuple(list(r) + [0] * (fld.d - fld.f))
        q = fld.residue_cardinality
        for _ in range(fld.M + 1):
            y = fld.pow_raw(y, q)
        cache[r] = y
    return PAdicElement(fld, 0, cache[r], fld.precision)


def _residue_elements(fld: FieldSpec) -> List[Tuple[int, ...]]:
    return [tuple(v) for v in product(range(fld.p), repeat=fld.f)]


def _residue_generator(fld: FieldSpec) -> Tuple[int, ...]:
    q1 = fld.residue_cardinality - 1
    primes = primefactors(q1)
    for r in _residue_elements(fld):
        if not any(r):
            continue
        ok = True
        for s in primes:
            k = q1 // s
            pw = (1,) + (0,) * (fld.f - 1)
            base = r
            while k:
                if k & 1:
                    pw = fld._fmul(pw, base, fld.p)
                base = fld._fmul(base, base, fld.p)
                k >>= 1
            if pw == (1,) + (0,) * (fld.f - 1):
                ok = False
                break
        if ok:
            return r
    raise DomainError("no generator of the residue field found")


def _eval_int_poly(fld: FieldSpec, coeffs: Sequence[int], x: Raw) -> Raw:
    acc = fld.zero_raw()
    for c in coeffs:
        acc = fld.add_raw(fld.mul_raw(acc, x), fld.int_raw(c))
    return acc


def integer_poly_roots(fld: FieldSpec, coeffs: Sequence[int]) -> List[PAdicElement]:
    """
    Roots in the integers of K of an integer polynomial (descending coefficients).

    Digit-by-digit search with pruning on ord P(x) >= level; a branch stops as soon as
    the Newton certificate ord P(x) > 2 ord P'(x) holds, and is then lifted by Newton.
    """
    # Newton divides by P'(x); the extra digits absorb the different
    work = fld.with_precision(fld.precision + 4 * fld.e + 8)
    deriv = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    digits = [tuple(list(r) + [0] * (work.d - work.f)) for r in _residue_elements(work)]
    roots: List[PAdicElement] = []
    frontier = [(work.zero_raw(), 0)]
    limit = work.cap - work.e
    while frontier:
        nxt = []
        for x, level in frontier:
            pj = work.pi_power_raw(level)
            for dgt in digits:
                cand = work.add_raw(x, work.mul_raw(dgt, pj))
                v_p = work.valuation_raw(_eval_int_poly(work, coeffs, cand))
                if v_p < level + 1:
                    continue
                v_d = work.valuation_raw(_eval_int_poly(work, deriv, cand))
                if v_p >= work.cap or v_p > 2 * v_d:
                    roots.append(_newton_root(work, coeffs, deriv, cand).lift_to(fld))
                    continue
                if level + 1 >= limit:
                    raise PrecisionError("root search exhausted the working precision")
                nxt.append((cand, level + 1))
        if len(nxt) > _ROOT_SEARCH_LIMIT:
            raise UnsupportedCaseError("root search branching too large for this field")
        frontier = nxt
    unique: List[PAdicElement] = []
    for r in roots:
        if not any(r == u for u in unique):
            unique.append(r)
    return unique


def _newton_root(work: FieldSpec, coeffs, deriv, z: Raw) -> PAdicElement:
    """Newton iteration on raw integers; P'(z) keeps a constant valuation v_d."""
    v_d = 0
    for _ in range(2 * int(math.log2(work.cap + 1)) + 4):
        num = _eval_int_poly(work, coeffs, z)
        v_p = work.valuation_raw(num)
        if v_p >= work.cap - work.e:
            break
        den = _eval_int_poly(work, deriv, z)
        v_d = work.valuation_raw(den)
        if v_p <= v_d:
            raise PrecisionError("Newton iteration lost its certificate")
        step = work.mul_raw(work.divide_pi_power_raw(num, v_d),
                            work.unit_inverse_raw(work.divide_pi_power_raw(den, v_d)))
        z = work.sub_raw(z, step)
    return work.element_from_raw(z, work.precision - v_d)


def roots_of_unity(fld: FieldSpec) -> Tuple[List[PAdicElement], int]:
    """All roots of unity of K, as (list, cardinality)."""
    cache = fld._cache
    if "mu" in cache:
        return cache["mu"]
    q1 = fld.residue_cardinality - 1
    g = _residue_generator(fld) if q1 > 1 else (1,) + (0,) * (fld.f - 1)
    gen = teichmuller(PAdicElement(fld, 0, tuple(list(g) + [0] * (fld.d - fld.f)), fld.precision))
    tame = [fld.one()]
    for _ in range(q1 - 1):
        tame.append(tame[-1] * gen)

    wild = [fld.one()]
    k = 1
    while True:
        pk = fld.p ** k
        if fld.e % int(totient(pk)) != 0:
            break
        coeffs = [int(c) for c in Poly(cyclotomic_poly(pk, _X), _X).all_coeffs()]
        prim = integer_poly_roots(fld, coeffs)
        if not prim:
            break
        wild = wild + prim
        k += 1
    mu = [a * b for a in tame for b in wild]
    n = len(mu)
    logger.debug(f"roots_of_unity: {fld.describe()} -> n={n}")
    cache["mu"] = (mu, n)
    return mu, n


def root_order(z: PAdicElement, n: int) -> int:
    """Multiplicative order of a root of unity z whose order divides n."""
    for k in sorted(d for d in range(1, n + 1) if n % d == 0):
        if (z ** k).is_one():
            return k
    raise DomainError("element is not an n-th root of unity")


# ===== p^nu-TH POWER CERTIFICATES =====

@dataclass(frozen=True)
class PowerCertificate:
    """Outcome of testing x in (K*)^{p^nu}."""

    passed: bool
    nu: int
    threshold: int
    valuation: Optional[int]
    margin: Optional[int]

    def as_dict(self) -> Dict:
        return {"passed": self.passed, "nu": self.nu, "threshold": self.threshold,
                "valuation": self.valuation, "margin": self.margin}


def certify_power(x: PAdicElement, nu: int) -> PowerCertificate:
    """
    Certify that x is a p^nu-th power: p^nu | ord(x) and x / (pi^v omega) = 1 + y with
    ord(y) above the threshold. Roots of unity of order prime to p are p^nu-th powers.
    """
    fld = x.field
    T = fld.power_threshold(nu)
    if x.is_zero():
        raise DomainError("zero is not in K*")
    v = x.ord()
    if v % (fld.p ** nu) != 0:
        return PowerCertificate(False, nu, T, v, None)
    unit = x.unit_part()
    y = unit / teichmuller(unit) - 1
    if y.is_zero():
        margin = y.valuation
        if margin <= T:
            raise PrecisionError(f"only {margin} digits available, certificate needs > {T}")
    else:
        margin = y.ord()
    return PowerCertificate(margin > T, nu, T, v, margin)


def congruent_mod_powers(x: PAdicElement, y: PAdicElement, nu: int) -> PowerCertificate:
    return certify_power(x / y, nu)


def binomial_root(x: PAdicElement, nu: int) -> PAdicElement:
    """p^nu-th root of a 1-unit 1 + y with ord(y) above the certificate threshold."""
    fld = x.field
    T = fld.power_threshold(nu)
    y = x - 1
    if y.is_zero():
        return fld.one()
    if y.ord() <= T:
        raise DomainError(f"ord(x - 1) = {y.ord()} does not exceed the threshold {T}")
    exponent = Fraction(1, fld.p ** nu)
    total = fld.one()
    coeff = Fraction(1)
    power = fld.one()
    k = 0
    while True:
        k += 1
        coeff = coeff * (exponent - (k - 1)) / k
        power = power * y
        term = fld.from_fraction(coeff) * power
        if term.is_zero() or term.ord() >= x.absolute_precision:
            break
        total = total + term
    return total


# ===== SCENARIO ELEMENT GRAMMAR =====

_FACTOR = re.compile(r"^\s*(?P<base>-?\d+/\d+|-?\d+|pi|t|omega\((?P<om>-?\d+)\))\s*(\^\s*(?P<exp>-?\d+))?\s*$")


def parse_element(fld: FieldSpec, text: str) -> PAdicElement:
    """
    Parse '*'-separated factors base[^exp]; base is an integer, a fraction a/b,
    pi, t or omega(k). A leading '-' negates the product.
    """
    text = str(text).strip()
    sign = 1
    if text.startswith("-") and not re.match(r"^-\d", text):
        sign, text = -1, text[1:]
    value = fld.one()
    for part in text.split("*"):
        m = _FACTOR.match(part)
        if not m:
            raise ValueError(f"cannot parse factor {part!r}")
        base = m.group("base")
        if base == "pi":
            b = fld.uniformizer()
        elif base == "t":
            b = fld.generator()
        elif m.group("om") is not None:
            b = fld.omega(int(m.group("om")))
        elif "/" in base:
            b = fld.from_fraction(Fraction(base))
        else:
            b = fld.from_int(int(base))
        value = value * (b ** int(m.group("exp") or 1))
    return -value if sign < 0 else value
