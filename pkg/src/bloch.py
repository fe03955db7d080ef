"""
Pre-Bloch groups of cyclotomic fields, the Bloch-Wigner dilogarithm and the
regulator of K_2 of the nodal rational curve.

Two independent routes to the same real number are provided for symbols on
the nodal curve: the boundary map delta_bar into the pre-Bloch group followed
by D_2, and a direct contour integral of log|f| d arg g - log|g| d arg f.
"""
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.integrate import quad
from sympy import Rational, isprime
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.ntheory import primitive_root
from sympy.ntheory.modular import crt

from .config import get_settings
from .cyclotomic import CyclotomicNumber, embeddings, unit_group_order, zeta
from .exceptions import DomainError, MembershipError, PeriodicityError, QuadratureError
from .rational import RationalFunction, tame_symbol_rational
from .utils import logger


# ===== BLOCH-WIGNER FUNCTION =====

def d2_checked(z: complex) -> Tuple[float, bool]:
    """
    D_2(z) = Im Li_2(z) + arg(1 - z) log|z|, with a flag for the boundary points 0 and 1.

    The argument is first moved into |z| <= 1, Re z <= 1/2 with
    D_2(1/z) = -D_2(z) and D_2(1 - z) = -D_2(z).
    """
    z = complex(z)
    if z == 0 or z == 1:
        return 0.0, True
    sign = 1.0
    if abs(z) > 1:
        z = 1 / z
        sign = -sign
    if z.real > 0.5:
        z = 1 - z
        sign = -sign
    with mpmath.workdps(get_settings().dps):
        w = mpmath.mpc(z.real, z.imag)
        value = mpmath.im(mpmath.polylog(2, w)) + mpmath.arg(1 - w) * mpmath.log(abs(w))
        return sign * float(value), False


def d2(z: complex) -> float:
    return d2_checked(z)[0]


def d2_relations(z: complex) -> Dict[str, float]:
    """Residuals of the inversion and reflection relations at z."""
    z = complex(z)
    if z == 0 or z == 1:
        raise DomainError("D_2 relations need z outside {0, 1}")
    return {
        "inversion": abs(d2(z) + d2(1 / z)),
        "reflection": abs(d2(z) + d2(1 - z)),
        "conjugation": abs(d2(z) + d2(z.conjugate())),
    }


# ===== PRE-BLOCH ELEMENTS =====

def _canonical(x: CyclotomicNumber) -> Tuple[Optional[CyclotomicNumber], int]:
    """
    Representative of the class {x, 1/x} and the sign relating [x] to it.
    (None, 0) when [x] vanishes, which happens for x = -1.
    """
    if x.is_zero() or x.is_one():
        raise DomainError(f"[{x!r}] is not a generator of the pre-Bloch group")
    k = x.root_exponent()
    if k is not None:
        N = unit_group_order(x.conductor)
        if 2 * k == N:
            return None, 0
        if 2 * k < N:
            return x, 1
        return x.inverse(), -1
    inv = x.inverse()
    if inv.coeffs < x.coeffs:
        return inv, -1
    return x, 1


class PreBlochElement:
    """A finite formal sum sum_x c_x [x] over Q(zeta_n), kept in normal form."""

    def __init__(self, conductor: int, terms: Optional[Dict[CyclotomicNumber, Rational]] = None):
        self.conductor = conductor
        self.terms: Dict[CyclotomicNumber, Rational] = {}
        for x, c in (terms or {}).items():
            self._add_term(x, c)

    @classmethod
    def zero(cls, conductor: int = 1) -> "PreBlochElement":
        return cls(conductor)

    @classmethod
    def bracket(cls, x: CyclotomicNumber, coefficient=1) -> "PreBlochElement":
        return cls(x.conductor, {x: Rational(coefficient)})

    def _add_term(self, x: CyclotomicNumber, c):
        c = Rational(c)
        if c == 0:
            return
        x = x.push(self.conductor)
        rep, sign = _canonical(x)
        if rep is None:
            return
        total = self.terms.get(rep, Rational(0)) + sign * c
        if total == 0:
            self.terms.pop(rep, None)
        else:
            self.terms[rep] = total

    def push(self, n: int) -> "PreBlochElement":
        return PreBlochElement(n, {x.push(n): c for x, c in self.terms.items()})

    def normalize(self) -> "PreBlochElement":
        return PreBlochElement(self.conductor, dict(self.terms))

    def combine(self, other: "PreBlochElement", scalar=1) -> "PreBlochElement":
        n = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        result = self.push(n)
        for x, c in other.terms.items():
            result._add_term(x, Rational(scalar) * c)
        return result

    def __add__(self, other: "PreBlochElement") -> "PreBlochElement":
        return self.combine(other, 1)

    def __sub__(self, other: "PreBlochElement") -> "PreBlochElement":
        return self.combine(other, -1)

    def __neg__(self) -> "PreBlochElement":
        return self.scale(-1)

    def scale(self, scalar) -> "PreBlochElement":
        s = Rational(scalar)
        return PreBlochElement(self.conductor, {x: s * c for x, c in self.terms.items()})

    __rmul__ = scale

    def galois(self, j: int) -> "PreBlochElement":
        """Apply zeta_n -> zeta_n^j to every argument."""
        return PreBlochElement(self.conductor, {x.galois(j): c for x, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreBlochElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}[{x!r}]" for x, c in self.terms.items())


def prebloch_combine(a: PreBlochElement, b: PreBlochElement, scalar=1) -> PreBlochElement:
    """a + scalar * b in normal form, over the compositum of the two conductors."""
    return a.combine(b, scalar)


# ===== REGULATOR VALUES =====

@dataclass
class RegulatorVector:
    """D_2 values at one embedding per conjugate pair."""

    embeddings: List[int]
    values: List[float]

    def max_abs(self) -> float:
        return max((abs(v) for v in self.values), default=0.0)

    def as_dict(self) -> Dict:
        return {"embeddings": list(self.embeddings), "values": list(self.values)}


def borel_value(e: PreBlochElement, k: int = 1) -> float:
    """sum_x c_x D_2(sigma_k(x))."""
    return float(sum(float(c) * d2(x.embed(k)) for x, c in e.items()))


def regulator_vector(e: PreBlochElement) -> RegulatorVector:
    ks = embeddings(e.conductor)
    return RegulatorVector(ks, [borel_value(e, k) for k in ks])


def five_term_arguments(x: CyclotomicNumber, y: CyclotomicNumber) -> List[Tuple[CyclotomicNumber, int]]:
    for v in (x, y):
        if v.is_zero() or v.is_one():
            raise DomainError("five-term arguments must avoid 0 and 1")
    if x == y:
        raise DomainError("five-term arguments must differ")
    return [
        (x, 1),
        (y, -1),
        (y / x, 1),
        ((1 - x.inverse()) / (1 - y.inverse()), -1),
        ((1 - x) / (1 - y), 1),
    ]


def five_term(x: CyclotomicNumber, y: CyclotomicNumber) -> PreBlochElement:
    """[x] - [y] + [y/x] - [(1 - 1/x)/(1 - 1/y)] + [(1 - x)/(1 - y)]."""
    e = PreBlochElement.zero(x.conductor)
    for arg, sign in five_term_arguments(x, y):
        e = e + PreBlochElement.bracket(arg, sign)
    return e


def distribution_relation(x: CyclotomicNumber, m: int) -> PreBlochElement:
    """m * sum_{i=1}^m [zeta_m^i x] - [x^m]."""
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    n = x.conductor * m // gcd(x.conductor, m)
    x = x.push(n)
    xm = x ** m
    if xm.is_one() or xm.is_zero():
        raise DomainError("x^m must avoid 0 and 1")
    e = PreBlochElement.zero(n)
    for i in range(1, m + 1):
        term = zeta(m, i) * x
        if term.is_one():
            raise DomainError(f"zeta_{m}^{i} x equals 1")
        e = e + PreBlochElement.bracket(term, m)
    return e - PreBlochElement.bracket(xm)


def lambda_data(e: PreBlochElement) -> List[Tuple[Rational, CyclotomicNumber, CyclotomicNumber]]:
    """The formal wedges c_x * x ^ (1 - x); not reduced in F* ^ F*."""
    return [(c, x, 1 - x) for x, c in e.items()]


def basis_elements(n: int) -> List[PreBlochElement]:
    """[zeta_n^i] for 1 <= i < n/2 with gcd(i, n) = 1."""
    return [PreBlochElement.bracket(zeta(n, i)) for i in range(1, (n + 1) // 2) if gcd(i, n) == 1]


def regulator_matrix(n: int) -> Tuple[np.ndarray, int]:
    """D_2(sigma_k(zeta_n^i)) over embeddings k and basis exponents i, with its numeric rank."""
    basis = basis_elements(n)
    ks = embeddings(n)
    matrix = np.array([[borel_value(b, k) for b in basis] for k in ks], dtype=float)
    rank = int(np.linalg.matrix_rank(matrix, tol=1e-8)) if matrix.size else 0
    return matrix, rank


# ===== THE NODAL CURVE =====

@dataclass
class NodalTerm:
    """
    {c prod(1 - t/a_i) / prod(1 - t/b_i), c' prod(1 - t/c_j) / prod(1 - t/d_j)}.

    Both functions take equal values at t = 0 and t = oo when prod a_i / b_i = 1.
    """

    f_constant: CyclotomicNumber
    f_zeros: List[CyclotomicNumber]
    f_poles: List[CyclotomicNumber]
    g_constant: CyclotomicNumber
    g_zeros: List[CyclotomicNumber]
    g_poles: List[CyclotomicNumber]
    multiplicity: int = 1


@dataclass
class NodalSymbol:
    terms: List[NodalTerm] = field(default_factory=list)

    def __add__(self, other: "NodalSymbol") -> "NodalSymbol":
        return NodalSymbol(self.terms + other.terms)


def _product(values: Iterable[CyclotomicNumber]) -> CyclotomicNumber:
    result = CyclotomicNumber.from_rational(1)
    for v in values:
        result = result * v
    return result


def nodal_function(constant: CyclotomicNumber, zeros: Sequence[CyclotomicNumber],
                   poles: Sequence[CyclotomicNumber]) -> RationalFunction:
    """c prod(1 - t/a) / prod(1 - t/b) as c' prod(t - a) / prod(t - b)."""
    c = constant
    pairs = []
    for a in zeros:
        c = c * (-a.inverse())
        pairs.append((a, 1))
    for b in poles:
        c = c / (-b.inverse())
        pairs.append((b, -1))
    return RationalFunction.build(c, 0, pairs)


def _term_functions(term: NodalTerm) -> Tuple[RationalFunction, RationalFunction]:
    for zeros, poles in ((term.f_zeros, term.f_poles), (term.g_zeros, term.g_poles)):
        if not (_product(zeros) / _product(poles)).is_one():
            raise PeriodicityError("function does not take equal values at 0 and oo")
    return (nodal_function(term.f_constant, term.f_zeros, term.f_poles),
            nodal_function(term.g_constant, term.g_zeros, term.g_poles))


def nodal_symbol_membership(sym: NodalSymbol) -> List[Tuple[CyclotomicNumber, CyclotomicNumber]]:
    """Tame symbols at every point other than 0 and oo; all must be 1."""
    values: List[Tuple[CyclotomicNumber, CyclotomicNumber]] = []
    for term in sym.terms:
        f, g = _term_functions(term)
        points: List[CyclotomicNumber] = []
        for z, _ in f.roots + g.roots:
            if not any(z == w for w in points):
                points.append(z)
        for x in points:
            value = tame_symbol_rational(f, g, x) ** term.multiplicity
            merged = next((i for i, (w, _) in enumerate(values) if w == x), None)
            if merged is None:
                values.append((x, value))
            else:
                values[merged] = (x, values[merged][1] * value)
    for x, value in values:
        if not value.is_one():
            raise MembershipError(f"tame symbol at t = {x!r} is {value!r}")
    return values


def _bracket_or_zero(x: CyclotomicNumber) -> PreBlochElement:
    if x.is_one():
        return PreBlochElement.zero(x.conductor)
    return PreBlochElement.bracket(x)


def ab_bracket(a: CyclotomicNumber, b: CyclotomicNumber) -> PreBlochElement:
    """[a, b] = [a^{-1} b] - [a^{-1}] - [b], with [1] read as 0."""
    ai = a.inverse()
    return _bracket_or_zero(ai * b) - _bracket_or_zero(ai) - _bracket_or_zero(b)


def delta_bar(sym: NodalSymbol, check: bool = True) -> PreBlochElement:
    """
    sum_{i,j} [a_i, c_j] - [a_i, d_j] - [b_i, c_j] + [b_i, d_j] over every term,
    with the sign convention "+".
    """
    if check:
        nodal_symbol_membership(sym)
    total = PreBlochElement.zero()
    for term in sym.terms:
        part = PreBlochElement.zero()
        for left, s1 in ((term.f_zeros, 1), (term.f_poles, -1)):
            for right, s2 in ((term.g_zeros, 1), (term.g_poles, -1)):
                for a in left:
                    for c in right:
                        part = part.combine(ab_bracket(a, c), s1 * s2)
        total = total.combine(part, term.multiplicity)
    return total


def eta0(zeta1: CyclotomicNumber, m1: int, zeta2: CyclotomicNumber, m2: int) -> NodalSymbol:
    """
    {f / f(zeta2), g / g(zeta1)} with f = ((1 - t/zeta1)/(1 - t))^{m1} and
    g = ((1 - t/zeta2)/(1 - t))^{m2}.
    """
    one = CyclotomicNumber.from_rational(1)
    for z, m in ((zeta1, m1), (zeta2, m2)):
        if z.is_one() or not (z ** m).is_one():
            raise DomainError(f"{z!r} must be a nontrivial {m}-th root of unity")
    if zeta1 == zeta2:
        raise DomainError("zeta1 and zeta2 must differ")
    f_at = ((1 - zeta2 / zeta1) / (1 - zeta2)) ** m1
    g_at = ((1 - zeta1 / zeta2) / (1 - zeta1)) ** m2
    return NodalSymbol([NodalTerm(
        f_constant=f_at.inverse(), f_zeros=[zeta1] * m1, f_poles=[one] * m1,
        g_constant=g_at.inverse(), g_zeros=[zeta2] * m2, g_poles=[one] * m2,
    )])


# ===== CONTOUR REGULATOR =====

@dataclass
class ComplexFunction:
    """c * t^m * prod (t - a_i)^{n_i} with complex data, vectorised for quadrature."""

    constant: complex
    u_power: int
    roots: np.ndarray
    mults: np.ndarray

    @classmethod
    def from_rational(cls, fn: RationalFunction, k: int = 1) -> "ComplexFunction":
        def emb(v):
            return v.embed(k) if isinstance(v, CyclotomicNumber) else complex(v)
        return cls(emb(fn.constant), fn.u_power,
                   np.array([emb(z) for z, _ in fn.roots], dtype=complex),
                   np.array([n for _, n in fn.roots], dtype=float))

    def log_abs(self, z: complex) -> float:
        value = np.log(abs(self.constant))
        if self.u_power:
            value += self.u_power * np.log(abs(z))
        if self.roots.size:
            value += float(np.dot(self.mults, np.log(np.abs(z - self.roots))))
        return float(value)

    def dlog(self, z: complex) -> complex:
        value = self.u_power / z if self.u_power else 0j
        if self.roots.size:
            value += complex(np.sum(self.mults / (z - self.roots)))
        return value


def _ray_distance(a: complex, angle: float) -> float:
    delta = (np.angle(a) - angle + np.pi) % (2 * np.pi) - np.pi
    if abs(delta) >= np.pi / 2:
        return abs(a)
    return abs(a) * abs(np.sin(delta))


def choose_ray_angles(points: Sequence[complex], count: int = 2) -> List[float]:
    """Midpoints of the widest angular gaps between the nonzero points."""
    angles = sorted({float(np.angle(p)) % (2 * np.pi) for p in points if abs(p) > 0})
    if not angles:
        return [0.5 + i for i in range(count)]
    gaps = []
    for i, a in enumerate(angles):
        b = angles[(i + 1) % len(angles)] + (2 * np.pi if i + 1 == len(angles) else 0.0)
        gaps.append((b - a, (a + b) / 2 % (2 * np.pi)))
    gaps.sort(key=lambda g: (-g[0], g[1]))
    chosen = [mid for _, mid in gaps[:count]]
    while len(chosen) < count:
        chosen.append((chosen[-1] + 0.5) % (2 * np.pi))
    return chosen


def contour_regulator(f: ComplexFunction, g: ComplexFunction, path_angle: float) -> float:
    """
    Integral of log|f| d arg g - log|g| d arg f along t -> e^{i angle} t / (1 - t).

    Raises:
        DomainError: the ray passes within the configured margin of a zero or pole
        QuadratureError: successive tolerance rungs disagree
    """
    settings = get_settings()
    singular = [complex(a) for fn in (f, g) for a in fn.roots]
    for a in singular:
        if _ray_distance(a, path_angle) < settings.path_margin:
            raise DomainError(f"ray at angle {path_angle:.6f} passes within margin of {a}")
    direction = np.exp(1j * path_angle)

    def integrand(t: float) -> float:
        z = direction * t / (1 - t)
        dz = direction / (1 - t) ** 2
        return (f.log_abs(z) * (g.dlog(z) * dz).imag
                - g.log_abs(z) * (f.dlog(z) * dz).imag)

    breaks = []
    for a in singular:
        s = (a * np.conj(direction)).real
        if s > 0:
            breaks.append(s / (1 + s))
    breaks = sorted(set(round(b, 12) for b in breaks if 0 < b < 1))

    results = []
    for rung, tol in enumerate(settings.quad_tolerances):
        value, err, info = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=0.0,
                                limit=200 * 2 ** rung, points=breaks or None, full_output=1)[:3]
        logger.debug(f"contour rung {rung}: {value:.15f} (est. err {err:.2e})")
        results.append(value)
    if len(results) > 1 and abs(results[-1] - results[-2]) > settings.quad_accept:
        raise QuadratureError(f"quadrature rungs disagree: {results}")
    return float(results[-1])


def nodal_regulator(sym: NodalSymbol, k: int = 1, angles: Optional[Sequence[float]] = None) -> Dict:
    """Contour regulator of a nodal symbol along one or more rays."""
    pieces = []
    points: List[complex] = []
    for term in sym.terms:
        f, g = _term_functions(term)
        cf, cg = ComplexFunction.from_rational(f, k), ComplexFunction.from_rational(g, k)
        pieces.append((cf, cg, term.multiplicity))
        points.extend(cf.roots.tolist() + cg.roots.tolist())
    if angles is None:
        angles = choose_ray_angles(points, 2)
    values = [sum(m * contour_regulator(cf, cg, a) for cf, cg, m in pieces) for a in angles]
    spread = max(values) - min(values) if values else 0.0
    return {"angles": list(angles), "values": values, "path_spread": spread}


def bloch2cor_check(zeta1: CyclotomicNumber, m1: int, zeta2: CyclotomicNumber, m2: int,
                    k: int = 1, tolerance: float = 1e-6, path_tolerance: float = 2e-9) -> Dict:
    """Contour regulator of eta0 against D_2 of delta_bar(eta0), up to sign."""
    sym = eta0(zeta1, m1, zeta2, m2)
    boundary = delta_bar(sym)
    borel = borel_value(boundary, k)
    contour = nodal_regulator(sym, k)
    value = contour["values"][0]
    sign = 1 if value * borel >= 0 else -1
    residual = abs(value - sign * borel)
    passed = residual < tolerance and contour["path_spread"] < path_tolerance
    logger.info(f"🧪 bloch2cor: contour={value:.10f} borel={borel:.10f} sign={sign:+d} "
                f"spread={contour['path_spread']:.2e}")
    return {
        "delta_bar": repr(boundary),
        "borel": borel,
        "contour": contour,
        "sign": sign,
        "residual": residual,
        "passed": passed,
    }


# ===== GALOIS ACTION ON beta_1, beta_2 =====

def _crt(residue_l: int, l: int, residue_m: int, m: int) -> int:
    solution = crt([l, m], [residue_l % l, residue_m % m])
    if solution is None:
        raise DomainError(f"no solution modulo {l * m}")
    return int(solution[0])


def beta_elements(l: int, m: int, k: int) -> Tuple[PreBlochElement, PreBlochElement]:
    """beta_1 = sum_i [zeta_l^i zeta_m^k], beta_2 = sum_i (i/l) [zeta_l^i zeta_m^k], in Q(zeta_lm)."""
    n = l * m
    b1 = PreBlochElement.zero(n)
    b2 = PreBlochElement.zero(n)
    for i in range(1, l):
        x = zeta(n, i * m + k * l)
        b1 = b1 + PreBlochElement.bracket(x)
        b2 = b2 + PreBlochElement.bracket(x, int(legendre_symbol(i, l)))
    return b1, b2


@dataclass
class GaloisBetaReport:
    l: int
    m: int
    sigma_exponent: int
    tau_exponents: Dict[str, int]
    exact: Dict[str, bool]
    tau_candidates: Dict[str, bool]
    tau_action: Optional[str]
    max_residual: float
    passed: bool

    def as_dict(self) -> Dict:
        return {
            "l": self.l, "m": self.m,
            "sigma_exponent": self.sigma_exponent,
            "tau_exponents": dict(self.tau_exponents),
            "exact": dict(self.exact),
            "tau_candidates": dict(self.tau_candidates),
            "tau_action": self.tau_action,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def galois_beta_check(l: int, m: int, tolerance: float = 1e-10) -> GaloisBetaReport:
    """
    Check sigma* beta_1 = beta_1, sigma* beta_2 = -beta_2, tau* beta_1 = -beta_1 and
    tau* beta_2 = beta_2 exactly in normal form and numerically at every embedding.

    sigma moves zeta_l to zeta_l^r for a primitive root r and fixes zeta_m; tau inverts
    zeta_m and moves zeta_l to zeta_l^s. Both s = 1 (a square) and s = -1 are tried.
    """
    if not isprime(l) or l % 4 != 3:
        raise DomainError(f"l must be a prime congruent to -1 mod 4, got {l}")
    if gcd(l, m) != 1 or m < 2:
        raise DomainError(f"need gcd(l, m) = 1 and m >= 2, got l={l}, m={m}")
    n = l * m
    r = int(primitive_root(l))
    sigma = _crt(r, l, 1, m)
    taus = {"square": _crt(1, l, -1, m), "non-square": _crt(-1, l, -1, m)}
    ks = [k for k in range(1, m) if gcd(k, m) == 1]
    betas = {k: beta_elements(l, m, k) for k in ks}

    exact = {"sigma_beta1": True, "sigma_beta2": True}
    candidates = {name: True for name in taus}
    max_residual = 0.0
    emb = embeddings(n)
    for k, (b1, b2) in betas.items():
        exact["sigma_beta1"] &= b1.galois(sigma) == b1
        exact["sigma_beta2"] &= b2.galois(sigma) == -b2
        for name, j in taus.items():
            candidates[name] &= (b1.galois(j) == -b1) and (b2.galois(j) == b2)
        for e in emb:
            max_residual = max(max_residual,
                               abs(borel_value(b1, sigma * e) - borel_value(b1, e)),
                               abs(borel_value(b2, sigma * e) + borel_value(b2, e)),
                               abs(borel_value(b1, taus["square"] * e) + borel_value(b1, e)),
                               abs(borel_value(b2, taus["square"] * e) - borel_value(b2, e)))
    exact["tau_beta1"] = exact["tau_beta2"] = candidates["square"]
    tau_action = next((name for name, ok in candidates.items() if ok), None)
    passed = all(exact.values()) and max_residual < tolerance
    logger.info(f"🧪 galois-beta (l,m)=({l},{m}): exact={all(exact.values())} "
                f"tau={tau_action} residual={max_residual:.2e}")
    return GaloisBetaReport(l, m, sigma, taus, exact, candidates, tau_action, max_residual, passed)
