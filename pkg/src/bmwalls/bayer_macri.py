"""Bayer-Macri vectors w_sigma in v-perp and their decompositions.

Divisor classes on the moduli space are kept as formal linear combinations
(:class:`DivisorExpr`) of the symbols

* ``L~`` for a divisor L on the surface (``H~``, ``gamma~``, ``K~`` for the
  frame classes, ``<name>~`` for Picard basis elements); L -> L~ is linear,
* ``B0`` (boundary class, -theta(u(ch))), ``B`` (Hilbert-Chow boundary),
* ``S`` = theta(0,0,-1) and ``T`` = -theta(t) in the rank-zero case.

For ch0 > 0, theta(m(L, ch)) = -L~ and theta(w(ch)) = K~/2 - B0.  For ch0 < 0
the symbols refer to the dual character -ch*, which flips the sign of
theta(m(L, ch)) and leaves theta(w(ch)) = K~/2 - B0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    ConditionCViolated,
    InvalidInput,
    NotK3,
    NotUpperHalfPlane,
    WrongShape,
    WrongSurface,
    ZeroRank,
)
from .lattice import (
    ChernCharacter,
    Divisor,
    MukaiVector,
    Surface,
    as_rational,
    bogomolov_discriminant,
    intersect,
    mukai_pairing,
    mukai_vector,
)
from .stability import Frame, StabilityPoint, bridgeland_slope, central_charge, omega_vector
from .walls import TWISTED_K3, WallRecord, frame_data, on_wall, wall_of_pair

H_T = "H~"
GAMMA_T = "gamma~"
K_T = "K~"
B0 = "B0"
B = "B"
S_SYM = "S"
T_SYM = "T"

# pivot order for the positive-scalar normal form
_PIVOTS = (B0, B, S_SYM, T_SYM, H_T)

__all__ = [
    "DivisorExpr",
    "WSigma",
    "proportional",
    "w_sigma",
    "m_vector",
    "w_vector",
    "u_vector",
    "t_vector",
    "decompose_dim0",
    "decompose_dim1",
    "decompose_dim2",
    "global_line_bundle_dim2",
    "condition_c",
    "abch_p2",
    "k3_line_bundle",
    "relation_checks",
    "frame_classes",
    "picard_basis",
    "global_map_known",
    "wall_divisor",
]


class DivisorExpr:
    """Formal rational combination of divisor symbols, compared up to ``=R+``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[str, Fraction] = {}
        for sym, c in terms:
            acc[sym] = acc.get(sym, Fraction(0)) + as_rational(c)
        self._terms = tuple((s, c) for s, c in acc.items() if c != 0)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __getitem__(self, sym) -> Fraction:
        return self.terms.get(sym, Fraction(0))

    def symbols(self) -> tuple:
        return tuple(s for s, _ in self._terms)

    def __eq__(self, other):
        if not isinstance(other, DivisorExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self._terms))

    def __add__(self, other):
        return DivisorExpr(self._terms + other._terms)

    def __neg__(self):
        return DivisorExpr((s, -c) for s, c in self._terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_rational(k)
        return DivisorExpr((s, k * c) for s, c in self._terms)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self._terms

    def normalized(self, pivot: Optional[str] = None) -> "DivisorExpr":
        """Divide by |coefficient| of the pivot symbol (a positive rescaling).

        The default pivot is the first symbol present among B0, B, S, T,
        H~, and otherwise the first term.
        """
        if not self._terms:
            return self
        if pivot is None:
            terms = self.terms
            pivot = next((p for p in _PIVOTS if p in terms), self._terms[0][0])
        c = self[pivot]
        if c == 0:
            raise InvalidInput(f"pivot {pivot!r} has zero coefficient")
        return self * (1 / abs(c))

    def equiv(self, other: "DivisorExpr") -> bool:
        """Equality up to a positive rational scalar."""
        return proportional_terms(self.terms, other.terms) is not None

    def substitute(self, sym: str, replacement: "DivisorExpr") -> "DivisorExpr":
        c = self[sym]
        if c == 0:
            return self
        rest = DivisorExpr((s, v) for s, v in self._terms if s != sym)
        return rest + replacement * c

    def in_basis(self, classes: Mapping[str, Divisor], basis: Sequence[tuple[str, Divisor]]) -> "DivisorExpr":
        """Rewrite every ``~`` symbol in the given basis of tilde classes.

        ``classes`` maps tilde symbols to surface divisors; ``basis`` is an
        ordered list of (symbol, divisor) spanning the Picard lattice.
        L -> L~ is linear, so this is a change of coordinates.
        """
        known = dict(classes)
        known.update(dict(basis))
        total = None
        rest = []
        for sym, c in self._terms:
            if sym.endswith("~"):
                if sym not in known:
                    raise InvalidInput(f"no class known for symbol {sym!r}")
                part = known[sym] * c
                total = part if total is None else total + part
            else:
                rest.append((sym, c))
        out = []
        if total is not None:
            coeffs = _solve_coordinates(total, [d for _, d in basis])
            out = [(name, a) for (name, _), a in zip(basis, coeffs)]
        return DivisorExpr(out + rest)

    def render(self) -> str:
        parts = []
        for sym, c in self._terms:
            mag = abs(c)
            body = sym if mag == 1 else f"{mag}*{sym}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"DivisorExpr({self.render()})"

    __str__ = render


def _solve_coordinates(target: Divisor, basis: Sequence[Divisor]) -> list[Fraction]:
    n = len(basis)
    if n != target.rank:
        raise InvalidInput("basis size must equal the Picard rank")
    if n == 1:
        (b,) = basis
        return [target.coords[0] / b.coords[0]]
    (a11, a21), (a12, a22) = basis[0].coords, basis[1].coords
    det = a11 * a22 - a12 * a21
    if det == 0:
        raise InvalidInput("basis classes are linearly dependent")
    x, y = target.coords
    return [(x * a22 - a12 * y) / det, (a11 * y - a21 * x) / det]


def proportional_terms(a: Mapping, b: Mapping) -> Optional[Fraction]:
    """k > 0 with a = k b, or None."""
    keys = set(a) | set(b)
    k = None
    for key in keys:
        x, y = a.get(key, 0), b.get(key, 0)
        if (x == 0) != (y == 0):
            return None
        if x == 0:
            continue
        ratio = Fraction(x) / Fraction(y)
        if k is None:
            k = ratio
        elif ratio != k:
            return None
    if k is None:
        return Fraction(1) if not keys or all(a.get(x, 0) == 0 for x in keys) else None
    return k if k > 0 else None


def _flat(v: MukaiVector) -> tuple:
    return (v.v0,) + v.v1.coords + (v.v2,)


def proportional(a: MukaiVector, b: MukaiVector) -> Optional[Fraction]:
    """The positive scalar k with a = k b, decided by cross-multiplication."""
    fa, fb = _flat(a), _flat(b)
    k = None
    for x, y in zip(fa, fb):
        if (x == 0) != (y == 0):
            return None
        if x == 0:
            continue
        if k is None:
            k = x / y
        elif x * 1 != k * y:
            return None
    if k is None:
        return Fraction(1)
    return k if k > 0 else None


@dataclass(frozen=True)
class WSigma:
    vector: MukaiVector
    source: StabilityPoint
    ch: ChernCharacter

    @property
    def perpendicular(self) -> bool:
        S = self.source.surface
        return mukai_pairing(self.vector, mukai_vector(self.ch, S), S) == 0


def w_sigma(ch: ChernCharacter, p: StabilityPoint) -> WSigma:
    """(Im Z) Re Omega - (Re Z) Im Omega."""
    z = central_charge(ch, p)
    om = omega_vector(p)
    return WSigma(om.re * z.im - om.im * z.re, p, ch)


def m_vector(L: Divisor, ch: ChernCharacter, S: Surface) -> MukaiVector:
    if ch.ch0 == 0:
        raise ZeroRank("m(L, ch) needs ch0 != 0")
    a = ch.ch1 / ch.ch0 - S.K * Fraction(3, 4)
    return MukaiVector(0, L, intersect(a, L, S))


def w_vector(ch: ChernCharacter, S: Surface) -> MukaiVector:
    if ch.ch0 == 0:
        raise ZeroRank("w(ch) needs ch0 != 0")
    return MukaiVector(
        1,
        S.K * Fraction(-3, 4),
        -ch.ch2 / ch.ch0 - Fraction(S.chi_O, 2) + Fraction(11, 32) * S.K2,
    )


def u_vector(ch: ChernCharacter, S: Surface) -> MukaiVector:
    return w_vector(ch, S) + m_vector(S.K * Fraction(1, 2), ch, S)


def _t_from_center(C: Fraction, frame: Frame) -> MukaiVector:
    S = frame.surface
    K = S.K
    L = frame.H * C + frame.gamma * frame.u
    return MukaiVector(
        1,
        L - K * Fraction(3, 4),
        -Fraction(3, 4) * intersect(K, L, S) - Fraction(S.chi_O, 2) + Fraction(11, 32) * S.K2,
    )


def t_vector(ch: ChernCharacter, chp: ChernCharacter, frame: Frame) -> MukaiVector:
    return _t_from_center(wall_of_pair(ch, chp, frame).C, frame)


def frame_classes(frame: Frame) -> dict:
    """Tilde symbol -> surface class for the frame symbols."""
    return {H_T: frame.H, GAMMA_T: frame.gamma, K_T: frame.surface.K}


def picard_basis(S: Surface) -> list:
    return [(f"{name}~", S.generator(i)) for i, name in enumerate(S.basis)]


# --- local decompositions ----------------------------------------------------

@dataclass(frozen=True)
class Dim0Decomposition:
    vector: MukaiVector
    expr: DivisorExpr
    s_independent: bool


def decompose_dim0(ch: ChernCharacter, p: StabilityPoint) -> Dim0Decomposition:
    """ch = (0, 0, n): w_sigma =R+ (0, H, (sH - 3K/4).H) = theta(0,H,0) - c S.

    The s-dependence sits entirely in the (0, 0, *) direction, which pairs
    to zero with every class supported in dimension zero; ``s_independent``
    records that check.
    """
    if not (ch.ch0 == 0 and ch.ch1.is_zero() and ch.ch2 > 0):
        raise WrongShape(f"dimension-zero decomposition needs ch = (0, 0, n > 0), got {ch!r}")
    S = p.surface
    H = p.frame.H
    c = intersect(H * p.s - S.K * Fraction(3, 4), H, S)
    vec = MukaiVector(0, H, c)
    expr = DivisorExpr([("theta(0,H,0)", 1), (S_SYM, -c)])
    other = StabilityPoint(p.frame, p.s + 1, p.t)
    c2 = intersect(H * other.s - S.K * Fraction(3, 4), H, S)
    diff = MukaiVector(0, S.zero(), c2 - c)
    zero_dim = [MukaiVector(0, S.zero(), 1), mukai_vector(ch, S)]
    s_indep = all(mukai_pairing(diff, z, S) == 0 for z in zero_dim)
    return Dim0Decomposition(vec, expr, s_indep)


@dataclass(frozen=True)
class Dim1Decomposition:
    wall: WallRecord
    coefficient: Fraction
    coefficient_simplified: Fraction
    t: MukaiVector
    expr: DivisorExpr

    @property
    def forms_agree(self) -> bool:
        return self.coefficient == self.coefficient_simplified

    def vector(self) -> MukaiVector:
        """coefficient * (0, 0, -1) + t, the reassembled w_sigma up to scale."""
        S = self.wall.frame.surface
        return MukaiVector(0, S.zero(), -self.coefficient) + self.t


def decompose_dim1(ch: ChernCharacter, chp: ChernCharacter, frame: Frame,
                   point: Optional[tuple] = None) -> Dim1Decomposition:
    """(g D/2 + d u^2/2) S - T on the wall W(ch, ch') for ch = (0, c1, c2), c1.H > 0."""
    S = frame.surface
    if ch.ch0 != 0 or intersect(ch.ch1, frame.H, S) <= 0:
        raise WrongShape("dimension-one decomposition needs ch0 = 0 and ch1.H > 0")
    r, c1, c2, chi = frame_data(chp, frame)
    if r == 0:
        raise ZeroRank("the destabilizer must have nonzero rank")
    w = wall_of_pair(ch, chp, frame)
    g, d, u = frame.g, frame.d, frame.u
    coef = g / 2 * w.D + d / 2 * u * u
    simple = (chi - g * w.C * c1 + u * d * c2) / r
    dec = Dim1Decomposition(w, coef, simple, _t_from_center(w.C, frame),
                            DivisorExpr([(S_SYM, coef), (T_SYM, -1)]))
    if not dec.forms_agree:
        raise ArithmeticError(f"coefficient forms disagree: {coef} != {simple}")
    if point is not None:
        s, t = point
        if not on_wall(w, s, t):
            raise InvalidInput(f"({s}, {t}) is not on the wall")
        ws = w_sigma(ch, frame.point(s, t)).vector
        if proportional(ws, dec.vector()) is None:
            raise ArithmeticError("reassembled vector is not a positive multiple of w_sigma")
    return dec


@dataclass(frozen=True)
class Dim2Decomposition:
    mu: Fraction
    m_omega: MukaiVector
    m_beta: MukaiVector
    w: MukaiVector
    m_alpha: MukaiVector
    u: MukaiVector
    scale: Fraction
    expr: DivisorExpr

    def beta_form(self) -> MukaiVector:
        return self.m_omega * self.mu + self.m_beta + self.w

    def alpha_form(self) -> MukaiVector:
        return self.m_omega * self.mu + self.m_alpha + self.u


def _tilde_sign(ch: ChernCharacter) -> int:
    # theta(m(L, ch)) = -L~ for ch0 > 0 and +L~ on the dual side
    return -1 if ch.ch0 > 0 else 1


def decompose_dim2(ch: ChernCharacter, p: StabilityPoint) -> Dim2Decomposition:
    """mu m(omega) + m(beta) + w(ch) = mu m(omega) + m(alpha) + u(ch) =R+ w_sigma."""
    S = p.surface
    if ch.ch0 == 0:
        raise WrongShape("dimension-two decomposition needs ch0 != 0")
    z = central_charge(ch, p)
    if z.im <= 0:
        raise NotUpperHalfPlane(f"Im Z(ch) = {z.im} <= 0")
    mu = -z.re / z.im
    dec = Dim2Decomposition(
        mu,
        m_vector(p.omega, ch, S),
        m_vector(p.beta, ch, S),
        w_vector(ch, S),
        m_vector(p.alpha, ch, S),
        u_vector(ch, S),
        z.im,
        _expr_dim2(ch, mu * p.t + p.s, p.frame),
    )
    ws = w_sigma(ch, p).vector
    if ws != dec.beta_form() * z.im or dec.beta_form() != dec.alpha_form():
        raise ArithmeticError("dimension-two decomposition does not reassemble w_sigma")
    return dec


def _expr_dim2(ch, center, frame, with_k=True):
    # tilde_sign * (center H~ + u gamma~) + K~/2 - B0
    sign = _tilde_sign(ch)
    terms = [(H_T, -center if sign < 0 else center), (GAMMA_T, sign * frame.u)]
    if with_k:
        terms.append((K_T, Fraction(1, 2)))
    terms.append((B0, -1))
    return DivisorExpr(terms)


# --- global (wall-indexed) line bundles ---------------------------------------

def _primitive_integral(D: Divisor) -> tuple:
    den = 1
    for c in D.coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in D.coords]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return tuple(a // g for a in ints) if g else tuple(ints)


def condition_c(ch: ChernCharacter, frame: Frame) -> list[str]:
    """Violated parts of condition (C); empty when it holds.

    The gcd uses H scaled to a primitive integral class.
    """
    S = frame.surface
    problems = []
    if ch.ch0 <= 0:
        problems.append("ch0 > 0")
    if bogomolov_discriminant(ch, S) < 0:
        problems.append("Bogomolov inequality ch1^2 - 2 ch0 ch2 >= 0")
    Hint = Divisor(_primitive_integral(frame.H))
    vals = [ch.ch0, intersect(ch.ch1, Hint, S), ch.ch2 - intersect(ch.ch1, S.K, S) / 2]
    if any(v.denominator != 1 for v in vals):
        problems.append("integral gcd data (ch0, ch1.H, ch2 - ch1.K/2)")
    else:
        g = 0
        for v in vals:
            g = math.gcd(g, int(v))
        if g != 1:
            problems.append(f"gcd(ch0, ch1.H, ch2 - ch1.K/2) = {g} != 1")
    return problems


def global_line_bundle_dim2(ch: ChernCharacter, wall: WallRecord,
                            check_condition_c: bool = True) -> DivisorExpr:
    """-C H~ - u gamma~ + K~/2 - B0 for the wall's center C."""
    if check_condition_c:
        problems = condition_c(ch, wall.frame)
        if problems:
            raise ConditionCViolated("; ".join(problems))
    elif ch.ch0 <= 0:
        raise ConditionCViolated("ch0 > 0")
    return _expr_dim2(ch, wall.C, wall.frame)


def _is_p2(S: Surface) -> bool:
    return S.intersection == ((1,),) and S.K == Divisor((-3,)) and S.chi_O == 1


def abch_p2(ch: ChernCharacter, chp: ChernCharacter, S: Surface) -> DivisorExpr:
    """-(C + 3/2) H~ - B0 on the projective plane."""
    if not _is_p2(S):
        raise WrongSurface(f"{S.name} is not the projective plane")
    if ch.ch0 <= 0:
        raise ConditionCViolated("ch0 > 0")
    w = wall_of_pair(ch, chp, Frame.standard(S))
    return DivisorExpr([(H_T, -(w.C + Fraction(3, 2))), (B0, -1)])


def k3_line_bundle(ch: ChernCharacter, wall: WallRecord) -> DivisorExpr:
    """Line bundle on a twisted K3 wall; no K~ term."""
    frame = wall.frame
    S = frame.surface
    if not S.is_k3:
        raise NotK3(f"{S.name} is not a K3 surface")
    if ch.ch0 == 0:
        if intersect(ch.ch1, frame.H, S) <= 0:
            raise WrongShape("rank zero needs ch1.H > 0")
        coef = frame.g / 2 * wall.D + frame.d / 2 * frame.u ** 2
        return DivisorExpr([(S_SYM, coef), (T_SYM, -1)])
    if ch.ch0 < 0:
        raise WrongShape("K3 dimension-two formula needs ch0 > 0")
    return _expr_dim2(ch, wall.C, frame, with_k=False)


@dataclass(frozen=True)
class RelationReport:
    center_relation: bool
    energy_relation: bool
    lhs: tuple
    rhs: tuple

    @property
    def ok(self) -> bool:
        return self.center_relation and self.energy_relation


def relation_checks(ch: ChernCharacter, wall: WallRecord, p: StabilityPoint) -> RelationReport:
    """At a point of the wall: mu omega + beta = C H + u gamma and
    beta.(mu omega + beta) - (omega^2 + beta^2)/2 = -(g/2) D - (d/2) u^2.
    """
    frame = wall.frame
    S = frame.surface
    if (p.s - wall.C) ** 2 + p.t ** 2 != wall.C ** 2 + wall.D:
        raise InvalidInput(f"({p.s}, {p.t}) is not on the wall")
    mu = bridgeland_slope(ch, p)
    lhs1 = p.omega * mu + p.beta
    rhs1 = frame.H * wall.C + frame.gamma * frame.u
    lhs2 = intersect(p.beta, lhs1, S) - (intersect(p.omega, p.omega, S) + intersect(p.beta, p.beta, S)) / 2
    rhs2 = -frame.g / 2 * wall.D - frame.d / 2 * frame.u ** 2
    return RelationReport(lhs1 == rhs1, lhs2 == rhs2, (lhs1, lhs2), (rhs1, rhs2))


def global_map_known(S: Surface) -> str:
    """Whether the global wall-to-divisor map is known to exist on ``S``.

    It is established for the projective plane and K3 surfaces; elsewhere
    a potential wall's divisor is only a candidate.
    """
    if _is_p2(S) or S.is_k3:
        return "yes"
    return "unknown"


def wall_divisor(ch: ChernCharacter, wall: WallRecord, picard: bool = True) -> DivisorExpr:
    """The divisor attached to a wall of ``ch``, by shape of ``ch``.

    Condition (C) is not checked here; callers report it separately.
    With ``picard`` the tilde symbols are rewritten in the Picard basis.
    """
    frame = wall.frame
    S = frame.surface
    twisted = wall.model == TWISTED_K3
    if ch.ch0 == 0:
        coef = frame.g / 2 * wall.D + frame.d / 2 * frame.u ** 2
        expr = DivisorExpr([(S_SYM, coef), (T_SYM, -1)])
    else:
        expr = _expr_dim2(ch, wall.C, frame, with_k=not twisted)
    if picard:
        expr = expr.in_basis(frame_classes(frame), picard_basis(S))
    return expr
