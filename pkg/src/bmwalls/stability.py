"""Central charges and characteristic vectors on a frame (H, gamma, u).

A frame fixes the half-plane of stability conditions with
omega = t H and beta = s H + u gamma, t > 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidInput, ValidationError
from .lattice import (
    ChernCharacter,
    Divisor,
    MukaiVector,
    Surface,
    as_rational,
    intersect,
    mukai_pairing,
    mukai_vector,
)

__all__ = [
    "INF",
    "Frame",
    "StabilityPoint",
    "ComplexRational",
    "CharacteristicVector",
    "central_charge",
    "twisted_central_charge",
    "omega_vector",
    "omega_hat_vector",
    "bridgeland_slope",
    "gl2_normalized_charge",
    "st_to_sq",
    "sq_to_st",
    "chamber_classify",
    "Chamber",
    "CHAMBER_LABELS",
]


@total_ordering
class _PositiveInfinity:
    """The slope of an object with Im Z = 0; compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("+inf")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "+inf"

    def __neg__(self):
        raise ArithmeticError("negative infinity is not a slope value")


INF = _PositiveInfinity()


@dataclass(frozen=True)
class Frame:
    """An (H, gamma, u) frame.

    Ampleness of H is the caller's responsibility; the lattice model has no
    cone data.  H.gamma = 0, g = H^2 > 0 and d = -gamma^2 >= 0 (with d = 0
    exactly when gamma = 0) are enforced.
    """

    surface: Surface
    H: Divisor
    gamma: Divisor
    u: Fraction = Fraction(0)
    g: Fraction = field(init=False)
    d: Fraction = field(init=False)

    def __post_init__(self):
        S = self.surface
        H = self.H if isinstance(self.H, Divisor) else S.divisor(tuple(self.H))
        gamma = self.gamma if isinstance(self.gamma, Divisor) else S.divisor(tuple(self.gamma))
        if H.rank != S.rank or gamma.rank != S.rank:
            raise ValidationError("frame divisors do not match the Picard rank")
        u = as_rational(self.u)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "u", u)
        g = intersect(H, H, S)
        d = -intersect(gamma, gamma, S)
        if g <= 0:
            raise ValidationError(f"H^2 = {g} must be positive")
        if intersect(H, gamma, S) != 0:
            raise ValidationError(
                f"Hodge orthogonality violated: H.gamma = {intersect(H, gamma, S)} != 0"
            )
        if d < 0 or (d == 0) != gamma.is_zero():
            raise ValidationError(
                f"Hodge index violated: gamma^2 = {-d} must be negative for nonzero gamma"
            )
        if u < 0:
            raise ValidationError("u must be non-negative (negate gamma instead)")
        if S.rank == 1 and u != 0:
            raise ValidationError("on a Picard rank one surface gamma = 0 and u must be 0")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "d", d)

    @classmethod
    def standard(cls, surface: Surface, H=None, u=0) -> "Frame":
        """Frame with gamma = 0; H defaults to the first basis element."""
        H = surface.generator(0) if H is None else H
        return cls(surface, H, surface.zero(), u)

    def coordinates(self, D: Divisor) -> tuple[Fraction, Fraction]:
        """(y1, y2) with D = y1 H + y2 gamma + (part orthogonal to both)."""
        S = self.surface
        y1 = intersect(D, self.H, S) / self.g
        y2 = -intersect(D, self.gamma, S) / self.d if self.d else Fraction(0)
        return y1, y2

    def mirrored(self) -> "Frame":
        return Frame(self.surface, self.H, -self.gamma, self.u)

    def point(self, s, t) -> "StabilityPoint":
        return StabilityPoint(self, s, t)

    def slope_s0(self, ch: ChernCharacter) -> Fraction:
        """s0 = ch1.H / (ch0 H^2), the vertical wall where Im Z vanishes."""
        if ch.ch0 == 0:
            raise InvalidInput("s0 is undefined for rank zero")
        return intersect(ch.ch1, self.H, self.surface) / (ch.ch0 * self.g)


@dataclass(frozen=True)
class StabilityPoint:
    frame: Frame
    s: Fraction
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "t", as_rational(self.t))
        if self.t <= 0:
            raise InvalidInput(f"t must be positive, got {self.t}")

    @property
    def surface(self) -> Surface:
        return self.frame.surface

    @property
    def omega(self) -> Divisor:
        return self.frame.H * self.t

    @property
    def beta(self) -> Divisor:
        return self.frame.H * self.s + self.frame.gamma * self.frame.u

    @property
    def alpha(self) -> Divisor:
        return self.beta - self.surface.K * Fraction(1, 2)

    def mirrored(self) -> "StabilityPoint":
        """The point (-s, t) in the frame (H, -gamma, u)."""
        return StabilityPoint(self.frame.mirrored(), -self.s, self.t)


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    def __add__(self, other):
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        k = as_rational(other)
        return ComplexRational(self.re * k, self.im * k)

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __str__(self):
        return f"{self.re} + {self.im}i"


@dataclass(frozen=True)
class CharacteristicVector:
    """A complex Mukai vector Omega = re + i im."""

    re: MukaiVector
    im: MukaiVector

    def pair(self, v: MukaiVector, S: Surface) -> ComplexRational:
        return ComplexRational(mukai_pairing(self.re, v, S), mukai_pairing(self.im, v, S))

    def norm(self, S: Surface) -> ComplexRational:
        """<Omega, Omega> extended complex-bilinearly."""
        rr = mukai_pairing(self.re, self.re, S)
        ii = mukai_pairing(self.im, self.im, S)
        ri = mukai_pairing(self.re, self.im, S)
        ir = mukai_pairing(self.im, self.re, S)
        return ComplexRational(rr - ii, ri + ir)


def central_charge(ch: ChernCharacter, p: StabilityPoint) -> ComplexRational:
    S = p.surface
    omega, beta = p.omega, p.beta
    w2 = intersect(omega, omega, S)
    b2 = intersect(beta, beta, S)
    re = -ch.ch2 + intersect(beta, ch.ch1, S) - ch.ch0 * (b2 - w2) / 2
    im = intersect(omega, ch.ch1, S) - ch.ch0 * intersect(omega, beta, S)
    return ComplexRational(re, im)


def _sqrt_todd(S: Surface) -> tuple[Fraction, Divisor, Fraction]:
    # exp of half the log Todd class (0, -K/2, -ch2(S)/12)
    quarter_k = S.K * Fraction(-1, 4)
    return Fraction(1), quarter_k, -S.ch2 / 24 + intersect(quarter_k, quarter_k, S) / 2


def twisted_central_charge(ch: ChernCharacter, p: StabilityPoint) -> ComplexRational:
    """Z-hat = -int e^{-(beta + i omega)} ch sqrt(td S)."""
    S = p.surface
    t0, t1, t2 = _sqrt_todd(S)
    twisted = ChernCharacter(
        ch.ch0 * t0,
        ch.ch1 * t0 + t1 * ch.ch0,
        ch.ch2 * t0 + intersect(ch.ch1, t1, S) + ch.ch0 * t2,
    )
    return central_charge(twisted, p)


def omega_vector(p: StabilityPoint) -> CharacteristicVector:
    S = p.surface
    K = S.K
    omega = p.omega
    b = p.beta - K * Fraction(3, 4)
    re = MukaiVector(
        1,
        b,
        -intersect(omega, omega, S) / 2
        + intersect(b, b, S) / 2
        - (S.chi_O - S.K2 / 8) / 2,
    )
    im = MukaiVector(0, omega, intersect(b, omega, S))
    return CharacteristicVector(re, im)


def omega_hat_vector(p: StabilityPoint) -> CharacteristicVector:
    """exp(alpha + i omega), alpha = beta - K/2, truncated at degree 2."""
    S = p.surface
    a, w = p.alpha, p.omega
    re = MukaiVector(1, a, (intersect(a, a, S) - intersect(w, w, S)) / 2)
    im = MukaiVector(0, w, intersect(a, w, S))
    return CharacteristicVector(re, im)


def bridgeland_slope(ch: ChernCharacter, p: StabilityPoint):
    """-Re Z / Im Z, or INF when Im Z = 0."""
    z = central_charge(ch, p)
    if z.im == 0:
        return INF
    return -z.re / z.im


def gl2_normalized_charge(ch: ChernCharacter, p: StabilityPoint) -> ComplexRational:
    z = central_charge(ch, p)
    return ComplexRational(z.re - p.s / p.t * z.im, z.im / p.t)


def st_to_sq(s, t) -> tuple[Fraction, Fraction]:
    s, t = as_rational(s), as_rational(t)
    if t <= 0:
        raise InvalidInput("t must be positive")
    return s, (s * s + t * t) / 2


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    from math import isqrt

    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def sq_to_st(s, q) -> tuple[Fraction, Fraction]:
    """Inverse of st_to_sq; only defined when 2q - s^2 is a positive rational square."""
    s, q = as_rational(s), as_rational(q)
    t = _exact_sqrt(2 * q - s * s)
    if t is None or t == 0:
        raise InvalidInput(f"(s, q) = ({s}, {q}) has no rational t > 0")
    return s, t


CHAMBER_LABELS = ("TC", "SC", "GC", "UW", "DGC", "DUW", "INTERIOR", "INVALID")


class Chamber(NamedTuple):
    label: str
    walls_checked: int
    bounds: object = None


def chamber_classify(ch: ChernCharacter, p: StabilityPoint, walls: Sequence, bounds=None) -> Chamber:
    """Label the position of ``p`` relative to the wall set of ``ch``.

    GC, DGC and SC only mean "outside every wall in ``walls``", so the
    search bounds that produced them are carried along in the result.
    A point on a wall counts as INTERIOR.
    """
    n = len(walls)

    def result(label):
        return Chamber(label, n, bounds)

    if ch.ch0 == 0 and ch.ch1.is_zero():
        return result("TC" if ch.ch2 > 0 else "INVALID")
    z = central_charge(ch, p)
    if z.im < 0:
        return result("INVALID")
    if ch.ch0 != 0 and p.s == p.frame.slope_s0(ch):
        return result("UW" if ch.ch0 > 0 else "DUW")
    if z.im == 0:
        return result("INVALID")
    for w in walls:
        if w.radius_sq > 0 and (p.s - w.C) ** 2 + p.t ** 2 <= w.radius_sq:
            return result("INTERIOR")
    if ch.ch0 > 0:
        return result("GC")
    if ch.ch0 < 0:
        return result("DGC")
    return result("SC")
