"""
The Tate curve E_q = G_m / q^Z over a p-adic field.

Functions on E_q are written with the theta function
    theta(u) = (1 - u) prod_{k>=1} (1 - q^k u)(1 - q^k u^{-1}),
which satisfies theta(q u) = -u^{-1} theta(u) and theta(u^{-1}) = -u^{-1} theta(u).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import DomainError, PeriodicityError, PrecisionError
from .laurent import LaurentSeries, Tail, add, mul, residue_dlog as laurent_residue_dlog
from .padic import FieldSpec, Number, PAdicElement, parse_element
from .rational import RationalFunction
from .utils import logger

QInput = Union[str, int, PAdicElement]


class TateCurve:
    """
    A Tate curve over `field` with parameter q, ord(q) > 0.

    Args:
        field: the base field K
        q: the Tate parameter, as an element or in scenario notation
    """

    def __init__(self, field: FieldSpec, q: QInput):
        self.field = field
        self._q_source = q if not isinstance(q, PAdicElement) else None
        self.q = parse_element(field, q) if isinstance(q, str) else field.element(q)
        if self.q.is_zero() or self.q.ord() <= 0:
            raise DomainError("the Tate parameter needs positive valuation")
        self.period = self.q.ord()
        self._theta_star: Optional[PAdicElement] = None
        self._coefficients: Optional[Dict[str, PAdicElement]] = None

    def with_precision(self, precision: int) -> "TateCurve":
        """The same curve over the field at another precision cap."""
        fld = self.field.with_precision(precision)
        if self._q_source is not None:
            return TateCurve(fld, self._q_source)
        return TateCurve(fld, self.q.lift_to(fld))

    def element(self, x: QInput) -> PAdicElement:
        return parse_element(self.field, x) if isinstance(x, str) else self.field.element(x)

    # ===== LATTICE q^Z =====

    def normalize(self, alpha: PAdicElement) -> Tuple[int, PAdicElement]:
        """Write alpha = q^m * alpha0 with 0 <= ord(alpha0) < ord(q)."""
        m = alpha.ord() // self.period
        return m, (alpha / self.q ** m if m else alpha)

    def in_lattice(self, alpha: PAdicElement) -> bool:
        """alpha in q^Z, decided by ord modulo ord(q) and a unit comparison."""
        if alpha.ord() % self.period:
            return False
        _, alpha0 = self.normalize(alpha)
        return alpha0.is_one()

    def lattice_exponent(self, alpha: PAdicElement) -> Optional[int]:
        m, alpha0 = self.normalize(alpha)
        return m if alpha0.is_one() else None

    def truncation_order(self, alpha_ord: int, nu: int) -> int:
        """Smallest N with (N+1) ord(q) - |alpha_ord| above the p^nu threshold."""
        T = self.field.power_threshold(nu)
        return max(0, -(-(T + 1 + abs(alpha_ord)) // self.period) - 1)

    # ===== THETA VALUES =====

    def _theta_reduced(self, alpha0: PAdicElement) -> PAdicElement:
        q = self.q
        K = -(-(self.field.precision + alpha0.ord()) // self.period) + 1
        inv = alpha0.inverse()
        value = 1 - alpha0
        qk = q
        for _ in range(K):
            value = value * (1 - qk * alpha0) * (1 - qk * inv)
            qk = qk * q
        return value

    def theta_star(self) -> PAdicElement:
        """prod_{k>=1} (1 - q^k)^2, the leading coefficient of theta(u) / (1 - u) at u = 1."""
        if self._theta_star is None:
            K = -(-self.field.precision // self.period) + 1
            value = self.field.one()
            qk = self.q
            for _ in range(K):
                value = value * (1 - qk) ** 2
                qk = qk * self.q
            self._theta_star = value
        return self._theta_star

    def leading_factor(self, m: int, x: PAdicElement) -> PAdicElement:
        """Leading coefficient at u = x of theta(alpha u) when alpha x = q^m."""
        sign = -1 if m % 2 else 1
        return sign * self.q ** (-(m * (m - 1) // 2)) * (-1 / x) * self.theta_star()

    def a_coefficients(self) -> Dict[str, PAdicElement]:
        """s1, a4 and a6 of y^2 + xy = x^3 + a4 x + a6."""
        if self._coefficients is None:
            fld, q = self.field, self.q
            K = -(-fld.precision // self.period) + 2
            s1, s3, a6 = fld.zero(), fld.zero(), fld.zero()
            qn = q
            for n in range(1, K + 1):
                ratio = qn / (1 - qn)
                s1 = s1 + n * ratio
                s3 = s3 + n ** 3 * ratio
                # (5 n^3 + 7 n^5) / 12 is an integer
                a6 = a6 + ((5 * n ** 3 + 7 * n ** 5) // 12) * ratio
                qn = qn * q
            self._coefficients = {"s1": s1, "a4": -5 * s3, "a6": -a6}
        return self._coefficients


def curve_coefficients(curve: TateCurve) -> Tuple[PAdicElement, PAdicElement]:
    """(a4, a6) of the Tate curve; a6 = -q mod q^2."""
    c = curve.a_coefficients()
    return c["a4"], c["a6"]


def theta_eval(curve: TateCurve, alpha: PAdicElement) -> PAdicElement:
    """
    theta(alpha), reducing alpha into the fundamental annulus with
    theta(q^m y) = (-1)^m y^{-m} q^{-m(m-1)/2} theta(y). Exact zero on q^Z.
    """
    alpha = curve.element(alpha)
    m, alpha0 = curve.normalize(alpha)
    if alpha0.is_one():
        return curve.field.zero()
    value = curve._theta_reduced(alpha0)
    if m:
        factor = alpha0 ** (-m) * curve.q ** (-(m * (m - 1) // 2))
        value = value * factor
        if m % 2:
            value = -value
    return value


def theta_series(curve: TateCurve, B: int, kmax: Optional[int] = None) -> LaurentSeries:
    """
    The Laurent expansion of theta on the window [-B, B].

    Coefficients are known modulo pi^P with P = min(N, (kmax+1) ord q); the tails
    carry the exact valuations ord(q) n(n-1)/2 of the true coefficients.
    """
    if B < 0:
        raise DomainError("window half-width must be non-negative")
    fld, q, per = curve.field, curve.q, curve.period
    if kmax is None:
        kmax = -(-fld.precision // per) + 1
    if kmax < 0:
        raise DomainError("kmax must be non-negative")
    P = min(fld.precision, (kmax + 1) * per)
    series = LaurentSeries.polynomial(fld, {0: 1, 1: -1})
    qk = fld.one()
    for _ in range(kmax):
        qk = qk * q
        series = mul(series, LaurentSeries.polynomial(fld, {0: 1, 1: -qk}))
        series = mul(series, LaurentSeries.polynomial(fld, {0: 1, -1: -qk}))
    mapping = {n: (series.coefficient(n) if series.lo <= n <= series.hi else 0) for n in range(-B, B + 1)}
    low = Tail(per * (B + 1) * (B + 2) // 2, per * (B + 2))
    high = Tail(per * B * (B + 1) // 2, per * (B + 1))
    return LaurentSeries.from_elements(fld, mapping, precision=P, low_tail=low, high_tail=high)


def theta_identities(curve: TateCurve, B: int, target: Optional[int] = None) -> Dict:
    """
    Check theta(qu) = -u^{-1} theta(u) and theta(u^{-1}) = -u^{-1} theta(u) coefficientwise
    on [-B, B] to `target` digits, working at raised internal precision.
    """
    target = curve.field.precision if target is None else target
    work = curve.with_precision(target + (B + 2) * curve.period + 2)
    theta = theta_series(work, B + 2)
    shifted = theta.shift(-1)
    functional = add(theta.substitute_scale(work.q), shifted)
    inversion = add(theta.reflect(), shifted)
    result = {}
    for name, residual in (("functional_equation", functional), ("inversion", inversion)):
        ok = residual.is_certified_zero_on(-B, B, target)
        margin = min(residual.bound(k) for k in range(-B, B + 1))
        result[name] = {"passed": ok, "margin": None if margin == math.inf else int(margin)}
    logger.debug(f"theta identities on [-{B}, {B}]: {result}")
    return result


# ===== THE COORDINATES X, Y =====

def _xy_windows(curve: TateCurve, B: int) -> Tuple[int, int]:
    c = -(-curve.field.precision // curve.period)
    return max(B, c) + 2, B + 2 * c + 4


def xy_series(curve: TateCurve, B: int) -> Tuple[LaurentSeries, LaurentSeries]:
    """Expansions of X(u), Y(u) on the annulus, valid to the field precision."""
    fld, q, per = curve.field, curve.q, curve.period
    L, H = _xy_windows(curve, B)
    s1 = curve.a_coefficients()["s1"]
    x_map: Dict[int, PAdicElement] = {0: -2 * s1}
    y_map: Dict[int, PAdicElement] = {0: s1, 1: fld.zero()}
    qk = fld.one()
    for k in range(1, max(L, H) + 1):
        qk = qk * q
        inv = (1 - qk).inverse()
        if k <= H:
            x_map[k] = k * inv
            if k >= 2:
                y_map[k] = (k * (k - 1) // 2) * inv
        if k <= L:
            x_map[-k] = k * qk * inv
            y_map[-k] = -((k + 1) * k // 2) * qk * inv
    low = Tail((L + 1) * per, per)
    high = Tail(0, 0)
    X = LaurentSeries.from_elements(fld, x_map, low_tail=low, high_tail=high)
    Y = LaurentSeries.from_elements(fld, y_map, low_tail=low, high_tail=high)
    return X, Y


def weierstrass_residual(curve: TateCurve, B: int) -> Dict:
    """Y^2 + XY - X^3 - a4 X - a6 must vanish on [-B, B]."""
    X, Y = xy_series(curve, B)
    coeffs = curve.a_coefficients()
    lhs = add(mul(Y, Y), mul(X, Y))
    rhs = add(add(mul(mul(X, X), X), X.scale(coeffs["a4"])),
              LaurentSeries.monomial(curve.field, 0, coeffs["a6"]))
    residual = add(lhs, -rhs)
    target = residual.precision
    ok = residual.is_certified_zero_on(-B, B, target)
    return {"passed": ok, "precision": target, "window": [residual.lo, residual.hi]}


def x_symmetry_residual(curve: TateCurve, B: int) -> Dict:
    """
    Symmetry of X under u -> u^{-1}. The n = 0 term u/(1-u)^2 is symmetric as a
    function but not as an annulus expansion, so it is removed before comparing.
    """
    X, _ = xy_series(curve, B)
    _, H = _xy_windows(curve, B)
    rational_part = LaurentSeries.polynomial(curve.field, {k: k for k in range(1, H + 1)})
    sym = add(X, -rational_part)
    residual = add(sym.reflect(), -sym)
    ok = residual.is_certified_zero_on(-B, B, residual.precision)
    return {"passed": ok, "precision": residual.precision}


# ===== POINTS AND GROUP LAW =====

@dataclass(eq=False)
class CurvePoint:
    x: PAdicElement
    y: PAdicElement

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    __hash__ = None


PointOrInfinity = Optional[CurvePoint]


def point_eval(curve: TateCurve, u0: QInput) -> PointOrInfinity:
    """(X(u0), Y(u0)), or None (the point at infinity) for u0 in q^Z."""
    u0 = curve.element(u0)
    _, u1 = curve.normalize(u0)
    if u1.is_one():
        return None
    q = curve.q
    K = -(-(curve.field.precision + curve.period) // curve.period) + 2
    s1 = curve.a_coefficients()["s1"]
    inv = u1.inverse()

    x = u1 / (1 - u1) ** 2
    y = u1 ** 2 / (1 - u1) ** 3
    qn = curve.field.one()
    for _ in range(K):
        qn = qn * q
        a = qn * u1
        w = qn * inv
        x = x + a / (1 - a) ** 2 + w / (1 - w) ** 2
        y = y + a ** 2 / (1 - a) ** 3 - w / (1 - w) ** 3
    return CurvePoint(x - 2 * s1, y + s1)


def on_curve_residual(curve: TateCurve, P: PointOrInfinity) -> PAdicElement:
    if P is None:
        return curve.field.zero()
    c = curve.a_coefficients()
    return P.y ** 2 + P.x * P.y - P.x ** 3 - c["a4"] * P.x - c["a6"]


def negate(P: PointOrInfinity) -> PointOrInfinity:
    if P is None:
        return None
    return CurvePoint(P.x, -P.y - P.x)


def group_add(curve: TateCurve, P: PointOrInfinity, Q: PointOrInfinity) -> PointOrInfinity:
    """Chord-and-tangent addition on y^2 + xy = x^3 + a4 x + a6."""
    if P is None:
        return Q
    if Q is None:
        return P
    c = curve.a_coefficients()
    if P.x == Q.x:
        if (P.y + Q.y + P.x).is_zero():
            return None
        lam = (3 * P.x ** 2 + c["a4"] - P.y) / (2 * P.y + P.x)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam ** 2 + lam - P.x - Q.x
    y3 = -(lam + 1) * x3 - (P.y - lam * P.x)
    return CurvePoint(x3, y3)


# ===== S-VALUES =====

def s_value(curve: TateCurve, alpha: QInput, nu: Optional[int] = None) -> PAdicElement:
    """
    S(alpha) = prod_{k>=1} ((1 - alpha q^k) / (1 - alpha^{-1} q^k))^k.

    With nu, factors congruent to 1 beyond the p^nu threshold are dropped; without,
    the product runs to full precision.
    """
    fld = curve.field
    alpha = curve.element(alpha)
    if alpha.is_one():
        return fld.one()
    m, alpha0 = curve.normalize(alpha)
    if alpha0.is_one():
        raise DomainError(f"S is not defined on q^Z (alpha = q^{m})")
    a = abs(alpha.ord())
    if nu is None:
        K = -(-(fld.precision + a) // curve.period)
    else:
        K = curve.truncation_order(a, nu)
    inv = alpha.inverse()
    value = fld.one()
    qk = fld.one()
    for k in range(1, K + 1):
        qk = qk * curve.q
        value = value * ((1 - alpha * qk) / (1 - inv * qk)) ** k
    return value


# ===== THETA PRODUCTS =====

class ThetaProduct:
    """
    c * u^u_power * prod_i theta(alpha_i u)^{e_i}.

    It descends to E_q exactly when sum e_i = 0 and prod alpha_i^{e_i} = q^{u_power}.
    """

    def __init__(self, curve: TateCurve, constant: Number, u_power: int = 0,
                 factors: Sequence[Tuple[QInput, int]] = ()):
        self.curve = curve
        self.constant = curve.element(constant) if not isinstance(constant, PAdicElement) else constant
        self.u_power = u_power
        self.factors: List[Tuple[PAdicElement, int]] = [
            (curve.element(a), e) for a, e in factors if e != 0
        ]

    def __repr__(self):
        parts = ", ".join(f"({a.ord()}:{e})" for a, e in self.factors)
        return f"ThetaProduct(u^{self.u_power}, [{parts}])"

    def __mul__(self, other: "ThetaProduct") -> "ThetaProduct":
        return ThetaProduct(self.curve, self.constant * other.constant, self.u_power + other.u_power,
                            self.factors + other.factors)

    def __truediv__(self, other: "ThetaProduct") -> "ThetaProduct":
        return self * other ** -1

    def __pow__(self, k: int) -> "ThetaProduct":
        return ThetaProduct(self.curve, self.constant ** k, self.u_power * k,
                            [(a, e * k) for a, e in self.factors])

    def scale(self, c: Number) -> "ThetaProduct":
        return ThetaProduct(self.curve, self.constant * c, self.u_power, self.factors)

    def is_periodic(self) -> bool:
        if sum(e for _, e in self.factors) != 0:
            return False
        prod = self.curve.field.one()
        for a, e in self.factors:
            prod = prod * a ** e
        return prod == self.curve.q ** self.u_power

    def require_periodic(self) -> "ThetaProduct":
        if not self.is_periodic():
            raise PeriodicityError(f"{self!r} does not descend to E_q")
        return self

    def normalized(self) -> "ThetaProduct":
        """Move every alpha_i into 0 <= ord < ord(q) and merge equal factors."""
        curve = self.curve
        const, power = self.constant, self.u_power
        merged: List[List] = []
        for a, e in self.factors:
            m, a0 = curve.normalize(a)
            if m:
                # theta(q^m a0 u) = (-1)^m (a0 u)^{-m} q^{-m(m-1)/2} theta(a0 u)
                step = a0 ** (-m) * curve.q ** (-(m * (m - 1) // 2))
                if m % 2:
                    step = -step
                const = const * step ** e
                power -= m * e
            for entry in merged:
                if entry[0] == a0:
                    entry[1] += e
                    break
            else:
                merged.append([a0, e])
        return ThetaProduct(curve, const, power, [(a, e) for a, e in merged if e])

    def divisor(self) -> List[Tuple[PAdicElement, int]]:
        """Zeros and poles on E_q as (class representative, multiplicity)."""
        curve = self.curve
        out: List[List] = []
        for a, e in self.normalized().factors:
            _, rep = curve.normalize(a.inverse())
            for entry in out:
                if entry[0] == rep:
                    entry[1] += e
                    break
            else:
                out.append([rep, e])
        return [(r, e) for r, e in out if e]

    def order_at(self, x: PAdicElement) -> int:
        return sum(e for a, e in self.factors if self.curve.in_lattice(a * x))

    def leading_at(self, x: PAdicElement) -> PAdicElement:
        """Leading coefficient at u = x in the uniformizer u - x."""
        curve = self.curve
        value = self.constant * x ** self.u_power
        for a, e in self.factors:
            ax = a * x
            k = curve.lattice_exponent(ax)
            if k is None:
                value = value * theta_eval(curve, ax) ** e
            else:
                value = value * curve.leading_factor(k, x) ** e
        return value

    def evaluate(self, x: QInput) -> PAdicElement:
        x = self.curve.element(x)
        if self.order_at(x):
            raise DomainError("evaluation at a zero or pole")
        return self.leading_at(x)

    def normalized_at(self, x: QInput) -> "ThetaProduct":
        """self / self(x)."""
        return self.scale(self.evaluate(x).inverse())

    def representative(self, N: int) -> RationalFunction:
        """
        The rational function obtained by truncating every theta at k <= N:
        theta_N(alpha u) = [-alpha prod_k(-q^k alpha)] u^{-N} (u - alpha^{-1})
                           prod_k (u - q^{-k} alpha^{-1})(u - q^k alpha^{-1}).
        """
        q = self.curve.q
        const = self.constant
        power = self.u_power
        pairs: List[Tuple[PAdicElement, int]] = []
        for a, e in self.factors:
            inv = a.inverse()
            c = -a
            qk = self.curve.field.one()
            pairs.append((inv, e))
            for _ in range(N):
                qk = qk * q
                c = c * (-(qk * a))
                pairs.append((inv / qk, e))
                pairs.append((inv * qk, e))
            const = const * c ** e
            power -= N * e
        return RationalFunction.build(const, power, pairs)

    def residue_dlog(self, n: int) -> int:
        """
        Residue of dlog along |u| = 1, modulo n: the u-power plus the Laurent residues
        of every theta factor split as (1 - alpha0 u) times a unit-flagged product.
        """
        fld = self.curve.field
        norm = self.normalized()
        total = norm.u_power
        q, per = self.curve.q, self.curve.period
        for a0, e in norm.factors:
            K = -(-fld.precision // per) + 1
            head = LaurentSeries.polynomial(fld, {0: 1, 1: -a0})
            body = LaurentSeries.monomial(fld, 0, 1)
            qk = fld.one()
            inv = a0.inverse()
            for _ in range(K):
                qk = qk * q
                body = mul(body, LaurentSeries.polynomial(fld, {0: 1, 1: -(qk * a0)}))
                body = mul(body, LaurentSeries.polynomial(fld, {0: 1, -1: -(qk * inv)}))
            dropped = min(fld.precision, (K + 1) * per - a0.ord())
            body = LaurentSeries(fld, body.lo, body.coeffs_raw, dropped, Tail(dropped, 0), Tail(dropped, 0))
            total += e * (laurent_residue_dlog(head, n) + laurent_residue_dlog(body, n))
        return total % n


def function_from_divisor(curve: TateCurve, constant: Number,
                          pairs: Sequence[Tuple[QInput, QInput]]) -> ThetaProduct:
    """c * prod theta(alpha_i u) / theta(beta_i u), requiring prod alpha_i / beta_i = 1."""
    factors: List[Tuple[PAdicElement, int]] = []
    ratio = curve.field.one()
    for a, b in pairs:
        a, b = curve.element(a), curve.element(b)
        ratio = ratio * a / b
        factors.append((a, 1))
        factors.append((b, -1))
    if not ratio.is_one():
        raise PeriodicityError("prod alpha_i / beta_i must equal 1")
    return ThetaProduct(curve, constant, 0, factors).normalized()
