"""
Laurent series over the integers R of a p-adic field, converging on the annulus |u| = 1.

A series keeps an exponent window [lo, hi] of coefficients known modulo pi^P (one
uniform absolute precision P) and, on each side, either nothing (the coefficients
beyond the window are exactly zero) or a linear lower bound on their valuations.
Arithmetic only ever reports coefficients it can certify to precision P.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .exceptions import DomainError, FieldMismatchError, PrecisionError
from .padic import FieldSpec, Number, PAdicElement, Raw

INF = math.inf


@dataclass(frozen=True)
class Tail:
    """Lower bound base + slope*(d-1) on ord of the coefficient at distance d >= 1 from the window."""

    base: int
    slope: int = 0

    def at(self, distance: int) -> int:
        return self.base + self.slope * (distance - 1)

    def as_dict(self) -> Dict:
        return {"base": self.base, "slope": self.slope}


def _tail_min(a: Optional[Tail], b: Optional[Tail]) -> Optional[Tail]:
    if a is None:
        return b
    if b is None:
        return a
    return Tail(min(a.base, b.base), min(a.slope, b.slope))


def _flat_tail(bound) -> Optional[Tail]:
    if bound == INF:
        return None
    return Tail(int(max(bound, 0)), 0)


class LaurentSeries:
    """A truncated element of R<u> = R[[u, u^{-1}]] with certified window."""

    def __init__(self, field: FieldSpec, lo: int, coeffs: List[Raw], precision: int,
                 low_tail: Optional[Tail] = None, high_tail: Optional[Tail] = None,
                 certificate: Optional[int] = None):
        if not coeffs:
            raise DomainError("a Laurent series needs a non-empty window")
        self.field = field
        self.lo = lo
        self.coeffs_raw = list(coeffs)
        self.precision = min(precision, field.precision)
        self.low_tail = low_tail
        self.high_tail = high_tail
        self.certificate = certificate
        self._vals: Optional[List[int]] = None
        self._prefix: Optional[List[int]] = None
        self._suffix: Optional[List[int]] = None

    # ===== CONSTRUCTORS =====

    @classmethod
    def from_elements(cls, field: FieldSpec, mapping: Dict[int, Number],
                      precision: Optional[int] = None,
                      low_tail: Optional[Tail] = None,
                      high_tail: Optional[Tail] = None) -> "LaurentSeries":
        """Build from {exponent: coefficient}; coefficients must be integral."""
        if not mapping:
            mapping = {0: 0}
        P = field.precision if precision is None else precision
        lo, hi = min(mapping), max(mapping)
        coeffs = []
        for k in range(lo, hi + 1):
            c = field.element(mapping.get(k, 0))
            if not c.is_zero() and c.valuation < 0:
                raise DomainError(f"coefficient of u^{k} is not integral")
            if not c.is_exact_zero():
                P = min(P, c.absolute_precision)
            coeffs.append(c.to_raw())
        return cls(field, lo, coeffs, P, low_tail, high_tail)

    @classmethod
    def polynomial(cls, field: FieldSpec, mapping: Dict[int, Number]) -> "LaurentSeries":
        return cls.from_elements(field, mapping)

    @classmethod
    def monomial(cls, field: FieldSpec, k: int, c: Number = 1) -> "LaurentSeries":
        return cls.from_elements(field, {k: c})

    # ===== ACCESSORS =====

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs_raw) - 1

    @property
    def window(self) -> Tuple[int, int]:
        return self.lo, self.hi

    @property
    def vals(self) -> List[int]:
        """ord of each window coefficient, capped at the precision."""
        if self._vals is None:
            fld, P = self.field, self.precision
            self._vals = [fld.valuation_raw(c, cap=max(P, 0)) for c in self.coeffs_raw]
        return self._vals

    def coefficient(self, k: int) -> PAdicElement:
        if self.lo <= k <= self.hi:
            return self.field.element_from_raw(self.coeffs_raw[k - self.lo], self.precision)
        tail = self.low_tail if k < self.lo else self.high_tail
        if tail is None:
            return self.field.zero()
        raise PrecisionError(f"coefficient of u^{k} lies in an uncertified tail")

    @property
    def coeffs(self) -> Dict[int, PAdicElement]:
        return {k: self.coefficient(k) for k in range(self.lo, self.hi + 1)}

    def bound(self, k: int):
        """Lower bound for ord of the true coefficient of u^k."""
        if self.lo <= k <= self.hi:
            return self.vals[k - self.lo]
        if k < self.lo:
            return INF if self.low_tail is None else self.low_tail.at(self.lo - k)
        return INF if self.high_tail is None else self.high_tail.at(k - self.hi)

    def _prefix_mins(self) -> List[int]:
        if self._prefix is None:
            out, m = [], (INF if self.low_tail is None else self.low_tail.base)
            for v in self.vals:
                m = min(m, v)
                out.append(m)
            self._prefix = out
        return self._prefix

    def _suffix_mins(self) -> List[int]:
        if self._suffix is None:
            out, m = [], (INF if self.high_tail is None else self.high_tail.base)
            for v in reversed(self.vals):
                m = min(m, v)
                out.append(m)
            self._suffix = list(reversed(out))
        return self._suffix

    def min_bound_upto(self, x: int):
        """min of bound(j) over j <= x."""
        if x < self.lo:
            return self.bound(x)
        pre = self._prefix_mins()
        if x <= self.hi:
            return pre[x - self.lo]
        return min(pre[-1], INF if self.high_tail is None else self.high_tail.base)

    def min_bound_from(self, x: int):
        """min of bound(j) over j >= x."""
        if x > self.hi:
            return self.bound(x)
        suf = self._suffix_mins()
        if x >= self.lo:
            return suf[x - self.lo]
        return min(suf[0], INF if self.low_tail is None else self.low_tail.base)

    def global_min_bound(self):
        m = min(self.vals)
        for tail in (self.low_tail, self.high_tail):
            if tail is not None:
                m = min(m, tail.base)
        return m

    def is_certified_zero_on(self, lo: int, hi: int, target: int) -> bool:
        """True if every coefficient of u^k, lo <= k <= hi, has ord >= target."""
        if target > self.precision and any(self.lo <= k <= self.hi for k in range(lo, hi + 1)):
            return False
        return all(self.bound(k) >= target for k in range(lo, hi + 1))

    def is_unit_flagged(self) -> bool:
        """c_0 is a unit and every other coefficient (and both tails) lies in pi*R."""
        if not (self.lo <= 0 <= self.hi) or self.precision < 1:
            return False
        if self.vals[-self.lo] != 0:
            return False
        for k, v in enumerate(self.vals):
            if k + self.lo != 0 and v < 1:
                return False
        return all(t is None or t.base >= 1 for t in (self.low_tail, self.high_tail)) and \
            all(t is None or t.slope >= 0 for t in (self.low_tail, self.high_tail))

    def is_power_series_unit(self) -> bool:
        return self.low_tail is None and self.lo == 0 and self.vals[0] == 0 and self.precision >= 1

    def _check(self, other: "LaurentSeries"):
        if other.field != self.field:
            raise FieldMismatchError("Laurent series over different fields")

    def as_dict(self) -> Dict:
        return {
            "window": [self.lo, self.hi],
            "precision": self.precision,
            "low_tail": self.low_tail.as_dict() if self.low_tail else None,
            "high_tail": self.high_tail.as_dict() if self.high_tail else None,
        }

    def __repr__(self):
        return f"LaurentSeries(window=[{self.lo}, {self.hi}], P={self.precision})"

    # ===== ARITHMETIC =====

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, other)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return add(self, -other)

    def __neg__(self) -> "LaurentSeries":
        fld = self.field
        return LaurentSeries(fld, self.lo, [fld.neg_raw(c) for c in self.coeffs_raw],
                             self.precision, self.low_tail, self.high_tail)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return mul(self, other)

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return invert_unit(self) ** (-k)
        result = LaurentSeries.monomial(self.field, 0)
        for _ in range(k):
            result = mul(result, self)
        return result

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u^k."""
        return LaurentSeries(self.field, self.lo + k, self.coeffs_raw, self.precision,
                             self.low_tail, self.high_tail)

    def scale(self, c: Number) -> "LaurentSeries":
        """Multiply by an integral constant."""
        fld = self.field
        c = fld.element(c)
        if c.is_exact_zero():
            return LaurentSeries(fld, 0, [fld.zero_raw()], fld.precision)
        v = c.ord()
        if v < 0:
            raise DomainError("scale factor is not integral")
        craw = c.to_raw()
        P = min(self.precision + v, c.absolute_precision + min(self.vals))
        shift_tail = (lambda t: None if t is None else Tail(t.base + v, t.slope))
        return LaurentSeries(fld, self.lo, [fld.mul_raw(x, craw) for x in self.coeffs_raw], P,
                             shift_tail(self.low_tail), shift_tail(self.high_tail))

    def reflect(self) -> "LaurentSeries":
        """Substitute u -> u^{-1}."""
        return LaurentSeries(self.field, -self.hi, list(reversed(self.coeffs_raw)), self.precision,
                             self.high_tail, self.low_tail)

    def derivative(self) -> "LaurentSeries":
        """d/du, termwise; tails keep their bounds since ord(k c_k) >= ord(c_k)."""
        fld = self.field
        out = [fld.mul_raw(fld.int_raw(k), c) for k, c in zip(range(self.lo, self.hi + 1), self.coeffs_raw)]
        return LaurentSeries(fld, self.lo - 1, out, self.precision, self.low_tail, self.high_tail)

    def restrict(self, lo: int, hi: int) -> "LaurentSeries":
        """Narrow the window to [lo, hi]; dropped coefficients fold into flat tails."""
        if lo < self.lo or hi > self.hi or lo > hi:
            raise DomainError(f"[{lo}, {hi}] is not inside the window [{self.lo}, {self.hi}]")
        low = self.low_tail if lo == self.lo else _flat_tail(self.min_bound_upto(lo - 1))
        high = self.high_tail if hi == self.hi else _flat_tail(self.min_bound_from(hi + 1))
        return LaurentSeries(self.field, lo, self.coeffs_raw[lo - self.lo:hi - self.lo + 1],
                             self.precision, low, high)

    def compact(self) -> "LaurentSeries":
        """Fold outer window coefficients that are zero to precision into flat tails."""
        P = self.precision
        keep = [i for i, v in enumerate(self.vals) if v < P]
        if not keep:
            keep = [0]
        a, b = self.lo + keep[0], self.lo + keep[-1]
        if (a, b) == self.window:
            return self
        return self.restrict(a, b)

    def substitute_scale(self, a: PAdicElement) -> "LaurentSeries":
        """Substitute u -> a*u; every coefficient must stay integral."""
        fld = self.field
        a = fld.element(a)
        s = a.ord()
        P = fld.precision
        for k in range(self.lo, self.hi + 1):
            P = min(P, self.precision + k * s, k * s + a.rel)
        if P <= 0:
            raise PrecisionError("substitution leaves no certified digits on the window")
        out = []
        power = a ** self.lo
        for k, raw in zip(range(self.lo, self.hi + 1), self.coeffs_raw):
            c = fld.element_from_raw(raw, self.precision) * power
            power = power * a
            if c.is_zero() or c.valuation >= P:
                out.append(fld.zero_raw())
                continue
            if c.valuation < 0:
                raise DomainError(f"coefficient of u^{k} leaves R<u> under u -> a*u")
            out.append(c.to_raw())
        low = high = None
        if self.low_tail is not None:
            slope = self.low_tail.slope - s
            if slope < 0:
                raise PrecisionError("low tail is not certifiable after u -> a*u")
            low = Tail(self.low_tail.base + (self.lo - 1) * s, slope)
        if self.high_tail is not None:
            slope = self.high_tail.slope + s
            if slope < 0:
                raise PrecisionError("high tail is not certifiable after u -> a*u")
            high = Tail(self.high_tail.base + (self.hi + 1) * s, slope)
        return LaurentSeries(fld, self.lo, out, P, low, high)


# ===== OPERATIONS =====

def _convolve(fld: FieldSpec, a: List[Raw], b: List[Raw]) -> List[Raw]:
    n = len(a) + len(b) - 1
    if fld.d == 1:
        mod = fld.mod
        ai = [x[0] for x in a]
        bi = [y[0] for y in b]
        acc = [0] * n
        for i, x in enumerate(ai):
            if x:
                for j, y in enumerate(bi):
                    acc[i + j] += x * y
        return [(v % mod,) for v in acc]
    acc = [fld.zero_raw()] * n
    for i, x in enumerate(a):
        if not any(x):
            continue
        for j, y in enumerate(b):
            if any(y):
                acc[i + j] = fld.add_raw(acc[i + j], fld.mul_raw(x, y))
    return acc


def _longest_run(flags: List[bool]) -> Optional[Tuple[int, int]]:
    best, start = None, None
    for i, ok in enumerate(flags + [False]):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if best is None or i - start > best[1] - best[0] + 1:
                best = (start, i - 1)
            start = None
    return best


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    """
    Product on the longest contiguous run of coefficients whose contribution from
    unknown coefficients (tails) is certified to be below the precision.
    """
    f._check(g)
    fld = f.field
    P = min(f.precision + min(g.vals), g.precision + min(f.vals), fld.precision)
    prod = _convolve(fld, f.coeffs_raw, g.coeffs_raw)
    lo_c = f.lo + g.lo
    exact = all(t is None for t in (f.low_tail, f.high_tail, g.low_tail, g.high_tail))
    flags = []
    for idx in range(len(prod)):
        i = lo_c + idx
        if exact:
            flags.append(True)
            continue
        err = INF
        jmin = min(f.lo, i - g.hi) - 1
        jmax = max(f.hi, i - g.lo) + 1
        for j in range(jmin, jmax + 1):
            l = i - j
            if f.lo <= j <= f.hi and g.lo <= l <= g.hi:
                continue
            bj = f.bound(j)
            if bj == INF:
                continue
            bl = g.bound(l)
            if bl == INF:
                continue
            err = min(err, bj + bl)
            if err < P:
                break
        flags.append(err >= P)
    run = _longest_run(flags)
    if run is None:
        raise PrecisionError("window underflow: no coefficient of the product is certified")
    a_idx, b_idx = run
    a, b = lo_c + a_idx, lo_c + b_idx

    # valuation bounds of true coefficients with index < a (resp. > b)
    low = INF
    if f.low_tail is not None:
        low = min(low, f.low_tail.base + g.global_min_bound())
    for j, v in zip(range(f.lo, f.hi + 1), f.vals):
        low = min(low, v + g.min_bound_upto(a - 1 - j))
    if f.high_tail is not None:
        low = min(low, f.high_tail.base + g.min_bound_upto(a - 2 - f.hi))
    high = INF
    if f.high_tail is not None:
        high = min(high, f.high_tail.base + g.global_min_bound())
    for j, v in zip(range(f.lo, f.hi + 1), f.vals):
        high = min(high, v + g.min_bound_from(b + 1 - j))
    if f.low_tail is not None:
        high = min(high, f.low_tail.base + g.min_bound_from(b + 2 - f.lo))
    return LaurentSeries(fld, a, prod[a_idx:b_idx + 1], P, _flat_tail(low), _flat_tail(high))


def add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    f._check(g)
    fld = f.field
    P = min(f.precision, g.precision)
    lo_c, hi_c = min(f.lo, g.lo), max(f.hi, g.hi)
    out, flags = [], []
    for k in range(lo_c, hi_c + 1):
        in_f = f.lo <= k <= f.hi
        in_g = g.lo <= k <= g.hi
        x = f.coeffs_raw[k - f.lo] if in_f else fld.zero_raw()
        y = g.coeffs_raw[k - g.lo] if in_g else fld.zero_raw()
        out.append(fld.add_raw(x, y))
        flags.append((in_f or f.bound(k) >= P) and (in_g or g.bound(k) >= P))
    run = _longest_run(flags)
    if run is None:
        raise PrecisionError("window underflow: no coefficient of the sum is certified")
    a, b = lo_c + run[0], lo_c + run[1]
    if a == f.lo == g.lo:
        low = _tail_min(f.low_tail, g.low_tail)
    else:
        low = _flat_tail(min(f.min_bound_upto(a - 1), g.min_bound_upto(a - 1)))
    if b == f.hi == g.hi:
        high = _tail_min(f.high_tail, g.high_tail)
    else:
        high = _flat_tail(min(f.min_bound_from(b + 1), g.min_bound_from(b + 1)))
    return LaurentSeries(fld, a, out[run[0]:run[1] + 1], P, low, high)


def invert_unit(f: LaurentSeries) -> LaurentSeries:
    """
    Inverse of a unit of R<u>.

    A unit-flagged series (c_0 a unit, everything else in pi*R) is inverted through
    the geometric series of h = c_0^{-1} f - 1; a power series with unit constant term
    through the usual recursion.
    """
    fld = f.field
    if f.is_unit_flagged():
        c0_inv = f.coefficient(0).inverse()
        h = add(f.scale(c0_inv), LaurentSeries.monomial(fld, 0, -1))
        mh = max(1, min(h.global_min_bound(), h.precision))
        P = h.precision
        terms = max(1, -(-P // mh) - 1)
        neg_h = -h
        total = LaurentSeries.monomial(fld, 0, 1)
        power = total
        for _ in range(terms):
            power = mul(power, neg_h).compact()
            total = add(total, power)
        dropped = (terms + 1) * mh
        result = total.scale(c0_inv)
        low = Tail(min(result.low_tail.base, dropped), 0) if result.low_tail else Tail(dropped, 0)
        high = Tail(min(result.high_tail.base, dropped), 0) if result.high_tail else Tail(dropped, 0)
        return LaurentSeries(fld, result.lo, result.coeffs_raw, min(result.precision, dropped), low, high)
    if f.is_power_series_unit():
        c0_inv = fld.unit_inverse_raw(f.coeffs_raw[0])
        out = [c0_inv]
        for k in range(1, len(f.coeffs_raw)):
            acc = fld.zero_raw()
            for j in range(1, k + 1):
                acc = fld.add_raw(acc, fld.mul_raw(f.coeffs_raw[j], out[k - j]))
            out.append(fld.neg_raw(fld.mul_raw(c0_inv, acc)))
        return LaurentSeries(fld, 0, out, f.precision, None, Tail(0, 0))
    raise DomainError("series is not a recognised unit of R<u>")


def residue_dlog(f: LaurentSeries, n: int, e: int = 0) -> int:
    """(e + coefficient of u^{-1} in f'/f) mod n, for a unit f of R<u>."""
    ratio = mul(f.derivative(), invert_unit(f))
    if ratio.lo <= -1 <= ratio.hi:
        r = ratio.coefficient(-1).as_integer()
    elif (-1 < ratio.lo and ratio.low_tail is None) or (-1 > ratio.hi and ratio.high_tail is None):
        r = 0
    else:
        raise PrecisionError("uncertifiable tail: the residue lies outside the window")
    return (e + r) % n


def reduce_mod_power(f: LaurentSeries, nu: int) -> LaurentSeries:
    """
    A Laurent polynomial g with f = g * (1 + x), ord(x) above the p^nu threshold,
    obtained by truncating coefficients modulo pi^(T+1).
    """
    fld = f.field
    T = fld.power_threshold(nu)
    if f.precision < T + 1:
        raise PrecisionError(f"precision {f.precision} does not reach the threshold {T + 1}")
    for tail in (f.low_tail, f.high_tail):
        if tail is not None and tail.base < T + 1:
            raise PrecisionError("uncertifiable tail below the reduction threshold")
    trunc = [fld.truncate_raw(c, T + 1) for c in f.coeffs_raw]
    nonzero = [i for i, c in enumerate(trunc) if any(c)]
    if not nonzero:
        raise DomainError("series vanishes modulo the threshold")
    a, b = nonzero[0], nonzero[-1]
    return LaurentSeries(fld, f.lo + a, trunc[a:b + 1], fld.precision, None, None, certificate=T)


def laurent_arith(f: LaurentSeries, g: Optional[LaurentSeries], op: str) -> LaurentSeries:
    """Dispatch add, sub, mul or invert_unit."""
    if op == "add":
        return add(f, g)
    if op == "sub":
        return add(f, -g)
    if op == "mul":
        return mul(f, g)
    if op == "invert_unit":
        return invert_unit(f)
    raise ValueError(f"unknown operation {op!r}")
