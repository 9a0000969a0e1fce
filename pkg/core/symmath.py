"""Exact polynomial algebra on phase space

Polynomials are sympy sparse ring elements: phase polynomials live in
Q[q1, p1, q2, p2], time-dependent pullbacks keep Gaussian-rational
coefficients in Q(i)[q1, p1, q2, p2], and invariants are rewritten in
Q[rho1, rho2, rho3, rho4].

Bracket convention: {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).
"""

import cmath
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import PolyElement, ring

from core.exceptions import ConfigError, NoRepresentation, NotInvariant

logger = logging.getLogger(__name__)

PHASE_RING, Q1, P1, Q2, P2 = ring("q1,p1,q2,p2", QQ)
COMPLEX_RING = ring("q1,p1,q2,p2", QQ_I)[0]
HOPF_RING, R1, R2, R3, R4 = ring("rho1,rho2,rho3,rho4", QQ)

PhasePoly = PolyElement
HopfPoly = PolyElement

CONVENTIONS = ("printed", "half")

# Perturbation of the resonant pendulum
WILBERFORCE_H1 = Q1 ** 2 * Q2 ** 2

# Second-order normal form as usually printed (contains rho3^2; compare modulo the syzygy)
N2_PRINTED = -(5 * R1 * R2 ** 2 + 4 * R3 ** 2 + 16 * R4 ** 2) * QQ(1, 768)


def _check_resonance(omega1: int, omega2: int) -> None:
    if not (isinstance(omega1, int) and isinstance(omega2, int)) or omega1 < 1 or omega2 < 1:
        raise ConfigError(f"frequencies must be positive integers, got ({omega1}, {omega2})")


def _complex(c) -> object:
    return QQ_I(c, 0)


def real_part(g: PolyElement) -> PhasePoly:
    """Real part of a Q(i) polynomial as a phase polynomial"""
    return PHASE_RING({m: c.x for m, c in g.items() if c.x})


def imag_part(g: PolyElement) -> PhasePoly:
    return PHASE_RING({m: c.y for m, c in g.items() if c.y})


def conjugate(g: PolyElement) -> PolyElement:
    return COMPLEX_RING({m: QQ_I(c.x, -c.y) for m, c in g.items()})


def h0_poly(omega1: int = 1, omega2: int = 2) -> PhasePoly:
    return (P1 ** 2 + omega1 ** 2 * Q1 ** 2 + P2 ** 2 + omega2 ** 2 * Q2 ** 2) * QQ(1, 2)


def poisson(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """Canonical Poisson bracket {f, g}"""
    result = PHASE_RING.zero
    for q, p in ((Q1, P1), (Q2, P2)):
        result += f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return result


@dataclass(frozen=True)
class HarmonicPoly:
    """Finite Fourier series sum_n f_n(q, p) e^{int} with Q(i) polynomial coefficients"""
    terms: Dict[int, PolyElement] = field(default_factory=dict)

    @classmethod
    def constant(cls, f: PolyElement) -> "HarmonicPoly":
        return cls({0: f}) if f else cls({})

    def coefficient(self, n: int) -> PolyElement:
        return self.terms.get(n, COMPLEX_RING.zero)

    @property
    def harmonics(self) -> List[int]:
        return sorted(self.terms)

    def __add__(self, other: "HarmonicPoly") -> "HarmonicPoly":
        out = dict(self.terms)
        for n, c in other.terms.items():
            total = out.get(n, COMPLEX_RING.zero) + c
            if total:
                out[n] = total
            else:
                out.pop(n, None)
        return HarmonicPoly(out)

    def __mul__(self, other: "HarmonicPoly") -> "HarmonicPoly":
        out: Dict[int, PolyElement] = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                out[n1 + n2] = out.get(n1 + n2, COMPLEX_RING.zero) + c1 * c2
        return HarmonicPoly({n: c for n, c in out.items() if c})

    def scale(self, c) -> "HarmonicPoly":
        scaled = {n: f.mul_ground(c) for n, f in self.terms.items()}
        return HarmonicPoly({n: f for n, f in scaled.items() if f})

    def is_real(self) -> bool:
        """Conjugate symmetry f_{-n} = conj(f_n)"""
        return all(self.coefficient(-n) == conjugate(c) for n, c in self.terms.items())

    def at_zero(self) -> PhasePoly:
        """Value at t = 0 as a real phase polynomial"""
        total = COMPLEX_RING.zero
        for c in self.terms.values():
            total += c
        return real_part(total)

    def evaluate(self, t: float, values: Sequence[float]) -> complex:
        return sum(evaluate_complex(c, values) * cmath.exp(1j * n * t) for n, c in self.terms.items())


@lru_cache(maxsize=None)
def _generator_pullback(index: int, omega1: int, omega2: int) -> HarmonicPoly:
    """q(t) = q cos wt + (p/w) sin wt, p(t) = -q w sin wt + p cos wt as e^{+-iwt} series"""
    q, p = COMPLEX_RING.gens[2 * (index // 2)], COMPLEX_RING.gens[2 * (index // 2) + 1]
    w = omega1 if index < 2 else omega2
    half = QQ_I(QQ(1, 2), 0)
    if index % 2 == 0:
        plus = q.mul_ground(half) - p.mul_ground(QQ_I(0, QQ(1, 2 * w)))
    else:
        plus = p.mul_ground(half) + q.mul_ground(QQ_I(0, QQ(w, 2)))
    return HarmonicPoly({w: plus, -w: conjugate(plus)})


@lru_cache(maxsize=None)
def _generator_power(index: int, exponent: int, omega1: int, omega2: int) -> HarmonicPoly:
    if exponent == 0:
        return HarmonicPoly({0: COMPLEX_RING.one})
    return _generator_power(index, exponent - 1, omega1, omega2) * _generator_pullback(index, omega1, omega2)


def pullback_flow(f: PhasePoly, omega1: int = 1, omega2: int = 2) -> HarmonicPoly:
    """f composed with the H0 flow, as an exact Fourier series in time"""
    _check_resonance(omega1, omega2)
    total = HarmonicPoly({})
    for monom, coeff in f.terms():
        term = HarmonicPoly({0: COMPLEX_RING.one})
        for index, exponent in enumerate(monom):
            if exponent:
                term = term * _generator_power(index, exponent, omega1, omega2)
        total = total + term.scale(_complex(coeff))
    return total


def average(f: PhasePoly, omega1: int = 1, omega2: int = 2) -> PhasePoly:
    """Mean of f over one period of the H0 flow (the n = 0 harmonic)"""
    return real_part(pullback_flow(f, omega1, omega2).coefficient(0))


def s_operator(f: PhasePoly, omega1: int = 1, omega2: int = 2) -> PhasePoly:
    """(1/2pi) int_0^{2pi} (t - pi) f(Fl^t) dt: harmonic n != 0 maps to f_n / (in)"""
    series = pullback_flow(f, omega1, omega2)
    total = COMPLEX_RING.zero
    for n, c in series.terms.items():
        if n:
            total += c.mul_ground(QQ_I(0, QQ(-1, n)))
    if imag_part(total):
        raise ArithmeticError("S(f) picked up an imaginary part; pullback lost conjugate symmetry")
    return real_part(total)


def normal_form_order1(H1: PhasePoly, omega1: int = 1, omega2: int = 2) -> PhasePoly:
    return average(H1, omega1, omega2)


def normal_form_order2(H1: PhasePoly, convention: str = "printed",
                       omega1: int = 1, omega2: int = 2) -> PhasePoly:
    """<{S(H1), H1}>, or half of it

    The averaging formulas orient the bracket by X_f = {f, .}, the reverse of
    `poisson`, so {S(H1), H1} there is poisson(H1, S(H1)) here.
    """
    if convention not in CONVENTIONS:
        raise ConfigError(f"convention must be one of {CONVENTIONS}, got '{convention}'")
    S1 = s_operator(H1, omega1, omega2)
    n2 = average(poisson(H1, S1), omega1, omega2)
    return n2 * QQ(1, 2) if convention == "half" else n2


# Hopf generators

@lru_cache(maxsize=None)
def hopf_generators(omega1: int = 1, omega2: int = 2) -> Tuple[PhasePoly, PhasePoly, PhasePoly, PhasePoly]:
    """rho1, rho2 mode energies; rho3 + i rho4 from z1^w2 conj(z2)^w1 with the sign of rho4 flipped

    For (1, 2): rho3 = p2(p1^2 - q1^2) + 4 p1 q1 q2, rho4 = 2 q2 (p1^2 - q1^2) - 2 q1 p1 p2.
    """
    _check_resonance(omega1, omega2)
    rho1 = omega1 ** 2 * Q1 ** 2 + P1 ** 2
    rho2 = omega2 ** 2 * Q2 ** 2 + P2 ** 2
    cq1, cp1, cq2, cp2 = COMPLEX_RING.gens
    z1 = cp1 + cq1.mul_ground(QQ_I(0, omega1))
    z2_bar = cp2 - cq2.mul_ground(QQ_I(0, omega2))
    w = z1 ** omega2 * z2_bar ** omega1
    return rho1, rho2, real_part(w), -imag_part(w)


@lru_cache(maxsize=None)
def _rho_power(index: int, exponent: int, omega1: int, omega2: int) -> PhasePoly:
    return hopf_generators(omega1, omega2)[index] ** exponent


def expand_hopf(P: HopfPoly, omega1: int = 1, omega2: int = 2) -> PhasePoly:
    """Substitute the generators into P"""
    total = PHASE_RING.zero
    for monom, coeff in P.terms():
        term = PHASE_RING.one
        for index, exponent in enumerate(monom):
            if exponent:
                term = term * _rho_power(index, exponent, omega1, omega2)
        total += term * coeff
    return total


def canonicalize(P: HopfPoly, omega1: int = 1, omega2: int = 2) -> HopfPoly:
    """Eliminate rho3^2 with rho3^2 = rho1^w2 rho2^w1 - rho4^2"""
    replacement = R1 ** omega2 * R2 ** omega1 - R4 ** 2
    result = HOPF_RING.zero
    stack = list(P.terms())
    while stack:
        monom, coeff = stack.pop()
        a, b, c, e = monom
        if c < 2:
            result += HOPF_RING({monom: coeff})
            continue
        k, r = divmod(c, 2)
        stack.extend((HOPF_RING({(a, b, r, e): coeff}) * replacement ** k).terms())
    return result


def equal_mod_syzygy(P: HopfPoly, Q: HopfPoly, omega1: int = 1, omega2: int = 2) -> bool:
    return not canonicalize(P - Q, omega1, omega2)


def syzygy(omega1: int = 1, omega2: int = 2) -> HopfPoly:
    return R3 ** 2 + R4 ** 2 - R1 ** omega2 * R2 ** omega1


def _candidates(degree: int, omega1: int, omega2: int) -> List[Tuple[int, int, int, int]]:
    """Canonical rho-monomials of the given phase-space degree"""
    odd = omega1 + omega2
    out = []
    for c in (0, 1):
        for e in range(degree // odd + 1):
            rest = degree - odd * (c + e)
            if rest < 0 or rest % 2:
                continue
            for a in range(rest // 2 + 1):
                out.append((a, rest // 2 - a, c, e))
    return out


def _degree_parts(f: PhasePoly) -> Dict[int, PhasePoly]:
    parts: Dict[int, Dict] = {}
    for monom, coeff in f.items():
        parts.setdefault(sum(monom), {})[monom] = coeff
    return {d: PHASE_RING(terms) for d, terms in parts.items()}


def to_hopf(f: PhasePoly, omega1: int = 1, omega2: int = 2) -> HopfPoly:
    """Rewrite an H0-invariant polynomial in the Hopf generators (canonical representative)"""
    _check_resonance(omega1, omega2)
    if poisson(f, h0_poly(omega1, omega2)):
        raise NotInvariant(f"{format_poly(f)} does not Poisson-commute with H0")

    result = HOPF_RING.zero
    for degree, part in sorted(_degree_parts(f).items()):
        candidates = _candidates(degree, omega1, omega2)
        if not candidates:
            raise NoRepresentation(f"no Hopf monomial has phase degree {degree}")
        expansions = [expand_hopf(HOPF_RING({m: QQ(1)}), omega1, omega2) for m in candidates]
        monomials = sorted(set(part.keys()).union(*(set(g.keys()) for g in expansions)))
        A = Matrix([[QQ.to_sympy(g.get(m, QQ(0))) for g in expansions] for m in monomials])
        b = Matrix([QQ.to_sympy(part.get(m, QQ(0))) for m in monomials])
        try:
            solution, free = A.gauss_jordan_solve(b)
        except ValueError as e:
            raise NoRepresentation(f"degree-{degree} part has no Hopf representation") from e
        if free.shape[0]:
            solution = solution.subs({s: 0 for s in free})
        for monom, value in zip(candidates, solution):
            if value != 0:
                result += HOPF_RING({monom: QQ.from_sympy(value)})

    result = canonicalize(result, omega1, omega2)
    if expand_hopf(result, omega1, omega2) != f:
        raise NoRepresentation("Hopf representative does not expand back to the input")
    return result


# Generator bracket table

EXACT_BRACKETS = {
    (1, 2): HOPF_RING.zero,
    (1, 3): -4 * R4,
    (1, 4): 4 * R3,
    (2, 3): 4 * R4,
    (2, 4): -4 * R3,
    (3, 4): -2 * R1 * (R1 - 2 * R2),
}

PRINTED_BRACKETS = dict(EXACT_BRACKETS)
PRINTED_BRACKETS[(3, 4)] = -4 * R1 * (R1 - 2 * R2)


@dataclass(frozen=True)
class BracketRow:
    pair: Tuple[int, int]
    computed: HopfPoly
    expected: HopfPoly
    printed: HopfPoly

    @property
    def matches_expected(self) -> bool:
        return equal_mod_syzygy(self.computed, self.expected)

    @property
    def matches_printed(self) -> bool:
        return equal_mod_syzygy(self.computed, self.printed)


def bracket_table() -> List[BracketRow]:
    """{rho_i, rho_j} for i < j, rewritten in the generators"""
    rhos = hopf_generators(1, 2)
    rows = []
    for (i, j), expected in EXACT_BRACKETS.items():
        computed = to_hopf(poisson(rhos[i - 1], rhos[j - 1]))
        rows.append(BracketRow((i, j), computed, expected, PRINTED_BRACKETS[(i, j)]))
    return rows


# Evaluation and formatting

def _to_float(c) -> float:
    return int(QQ.numer(c)) / int(QQ.denom(c))


def _monomial_value(monom: Iterable[int], values: Sequence[float]):
    v = 1.0
    for x, e in zip(values, monom):
        if e:
            v *= x ** e
    return v


def evaluate(f: PolyElement, values: Sequence[float]) -> float:
    """Floating-point value of a rational polynomial at a point"""
    return sum(_to_float(c) * _monomial_value(m, values) for m, c in f.items())


def evaluate_complex(g: PolyElement, values: Sequence[float]) -> complex:
    return sum(complex(_to_float(c.x), _to_float(c.y)) * _monomial_value(m, values)
               for m, c in g.items())


def fraction_string(c) -> str:
    num, den = int(QQ.numer(c)), int(QQ.denom(c))
    return str(num) if den == 1 else f"{num}/{den}"


def format_poly(f: PolyElement) -> str:
    """Deterministic text form, terms in descending lex order"""
    if not f:
        return "0"
    names = [str(s) for s in f.ring.symbols]
    pieces = []
    for monom, coeff in f.terms():
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e]
        magnitude = fraction_string(abs(coeff))
        if not factors:
            body = magnitude
        elif magnitude == "1":
            body = "*".join(factors)
        else:
            body = (f"({magnitude})*" if "/" in magnitude else f"{magnitude}*") + "*".join(factors)
        sign = "-" if coeff < 0 else "+"
        pieces.append((sign, body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def poly_to_dict(f: PolyElement) -> Dict[str, str]:
    """{"a,b,c,d": "num/den"} export"""
    return {",".join(str(e) for e in monom): fraction_string(coeff)
            for monom, coeff in sorted(f.items())}


def poly_from_dict(data: Dict[str, str], target_ring=HOPF_RING) -> PolyElement:
    terms = {}
    for key, value in data.items():
        monom = tuple(int(e) for e in key.split(","))
        num, _, den = value.partition("/")
        terms[monom] = QQ(int(num), int(den or 1))
    return target_ring(terms)


def random_phase_poly(rng, degree: int, n_terms: int = 6) -> PhasePoly:
    """Random rational phase polynomial of total degree <= degree, for property checks"""
    terms = {}
    for _ in range(n_terms):
        exps = [0, 0, 0, 0]
        for _ in range(int(rng.integers(0, degree + 1))):
            exps[int(rng.integers(0, 4))] += 1
        coeff = QQ(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        terms[tuple(exps)] = terms.get(tuple(exps), QQ(0)) + coeff
    return PHASE_RING({m: c for m, c in terms.items() if c})
