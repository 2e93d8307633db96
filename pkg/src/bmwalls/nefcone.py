"""Nef cones of Hilbert schemes of points on fibered surfaces.

Fibered surfaces are Hirzebruch surfaces Sigma_e (e >= 0) and elliptic
surfaces with a section (e >= 2), both in the basis (E, F) with
E^2 = -e, E.F = 1, F^2 = 0.  Frames come from the one-parameter family

    H = lam (E + eF) + (1 - lam) F,    gamma = -lam (E + eF) + (1 - lam + e lam) F,

and ch = (1, 0, -n) is the character of the ideal sheaf of n points.

Everything here is computed through the general wall and divisor code;
nothing about the final answer is hard-coded.  Rational functions of
lam are recovered by exact interpolation of values computed at rational
sample points.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bayer_macri import (
    B,
    B0,
    K_T,
    DivisorExpr,
    frame_classes,
    global_line_bundle_dim2,
)
from .errors import DegenerateWall, InvalidInput, NoSolution, OutOfRange
from .lattice import ChernCharacter, Divisor, Surface, as_rational, elliptic, hirzebruch, intersect
from .stability import Frame
from .walls import WallRecord, _admissible, wall_of_pair

HIRZEBRUCH = "hirzebruch"
ELLIPTIC = "elliptic"

__all__ = [
    "HIRZEBRUCH",
    "ELLIPTIC",
    "FiberedSurface",
    "toy_frame",
    "ideal_sheaf_character",
    "gieseker_candidates",
    "candidate_line_bundle",
    "coincidence_defect",
    "solve_balanced",
    "higher_rank_bound_check",
    "rank_one_sweep",
    "nef_cone",
]


@dataclass(frozen=True)
class FiberedSurface:
    kind: str
    e: int

    def __post_init__(self):
        if self.kind not in (HIRZEBRUCH, ELLIPTIC):
            raise InvalidInput(f"unknown fibered surface kind {self.kind!r}")
        e = int(self.e)
        object.__setattr__(self, "e", e)
        if self.kind == HIRZEBRUCH and e < 0:
            raise OutOfRange("Hirzebruch surfaces need e >= 0")
        if self.kind == ELLIPTIC and e < 2:
            raise OutOfRange("elliptic surfaces with a section need e >= 2")

    @property
    def surface(self) -> Surface:
        return hirzebruch(self.e) if self.kind == HIRZEBRUCH else elliptic(self.e)

    @property
    def section_class(self) -> Divisor:
        """E + eF."""
        return Divisor((1, self.e))

    @property
    def fiber_class(self) -> Divisor:
        return Divisor((0, 1))

    @property
    def section_symbol(self) -> str:
        if self.e == 0:
            return "E~"
        if self.e == 1:
            return "(E+F)~"
        return f"(E+{self.e}F)~"

    def basis(self) -> list:
        """Tilde basis ((E+eF)~, F~) used for all reported expressions."""
        return [(self.section_symbol, self.section_class), ("F~", self.fiber_class)]


def toy_frame(fs: FiberedSurface, lam, u) -> Frame:
    lam, u = as_rational(lam), as_rational(u)
    if not 0 < lam < 1:
        raise OutOfRange(f"lambda = {lam} must lie strictly between 0 and 1")
    if u < 0:
        raise OutOfRange(f"u = {u} must be non-negative")
    S = fs.surface
    sec, fib = fs.section_class, fs.fiber_class
    H = sec * lam + fib * (1 - lam)
    gamma = sec * (-lam) + fib * (1 - lam + fs.e * lam)
    frame = Frame(S, H, gamma, u)
    if frame.d != frame.g:
        raise ArithmeticError("toy frame should satisfy gamma^2 = -H^2")
    return frame


def ideal_sheaf_character(fs: FiberedSurface, n: int) -> ChernCharacter:
    return fs.surface.ch(1, fs.surface.zero(), -n)


def _check_n(n):
    if int(n) != n or n < 2:
        raise OutOfRange(f"n = {n} must be an integer >= 2")
    return int(n)


def gieseker_candidates(fs: FiberedSurface, n: int) -> tuple:
    """The rank-one destabilizers O(-F) and O(-E): (1, -F, 0), (1, -E, -e/2)."""
    _check_n(n)
    F = fs.fiber_class
    E = Divisor((1, 0))
    return (
        ChernCharacter(1, -F, Fraction(0)),
        ChernCharacter(1, -E, Fraction(-fs.e, 2)),
    )


def _expr_in_basis(fs: FiberedSurface, expr: DivisorExpr, frame: Frame) -> DivisorExpr:
    classes = frame_classes(frame)
    out = expr.in_basis(classes, fs.basis())
    # B0 = B/2 for ideal sheaves of points on a regular surface
    return out.substitute(B0, DivisorExpr([(B, Fraction(1, 2))]))


def _reorder(fs: FiberedSurface, expr: DivisorExpr) -> DivisorExpr:
    order = [fs.section_symbol, "F~", B]
    terms = expr.terms
    return DivisorExpr([(s, terms[s]) for s in order if s in terms]
                       + [(s, c) for s, c in terms.items() if s not in order])


def candidate_line_bundle(fs: FiberedSurface, n: int, lam, u, chp: ChernCharacter,
                          keep_canonical: bool = False) -> DivisorExpr:
    """-C H~ - u gamma~ + K~/2 - B0 for W(ch, chp), in ((E+eF)~, F~, B).

    With ``keep_canonical`` the K~ term stays symbolic instead of being
    rewritten in the basis.
    """
    n = _check_n(n)
    frame = toy_frame(fs, lam, u)
    ch = ideal_sheaf_character(fs, n)
    wall = wall_of_pair(ch, chp, frame)
    expr = global_line_bundle_dim2(ch, wall, check_condition_c=True)
    if keep_canonical:
        k_part = DivisorExpr([(K_T, expr[K_T])])
        rest = expr - k_part
        return _reorder(fs, _expr_in_basis(fs, rest, frame) + k_part)
    return _reorder(fs, _expr_in_basis(fs, expr, frame))


# --- exact polynomial helpers -------------------------------------------------

def _interpolate(xs, ys) -> list:
    """Coefficients (lowest first) of the polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _divisors(m: int) -> list:
    m = abs(m)
    out = []
    for k in range(1, math.isqrt(m) + 1):
        if m % k == 0:
            out += [k, m // k]
    return sorted(set(out))


def _rational_roots(coeffs) -> list:
    """Rational roots of a polynomial with rational coefficients."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise NoSolution("polynomial vanishes identically")
    roots = []
    while coeffs[0] == 0:  # factor out x
        roots.append(Fraction(0))
        coeffs.pop(0)
    if len(coeffs) == 1:
        return sorted(set(roots))
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if _poly_eval(coeffs, cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


_SAMPLES = [Fraction(k, 11) for k in range(1, 11)]


def _fit(fn, degree_bound: int = 6) -> list:
    """Interpolate fn on (0, 1) and confirm on the remaining samples."""
    xs = _SAMPLES[: degree_bound + 1]
    coeffs = _interpolate(xs, [fn(x) for x in xs])
    for x in _SAMPLES[degree_bound + 1:]:
        if _poly_eval(coeffs, x) != fn(x):
            raise ArithmeticError("interpolation check failed; degree bound too small")
    return coeffs


# --- the balanced frame ---------------------------------------------------------

def _centers(fs, n, lam, u):
    frame = toy_frame(fs, lam, u)
    ch = ideal_sheaf_character(fs, n)
    return tuple(wall_of_pair(ch, c, frame).C for c in gieseker_candidates(fs, n))


def coincidence_defect(fs: FiberedSurface, n: int, lam, u) -> Fraction:
    """(C1 - C2) lam (1 - lam) for the two Gieseker candidates.

    This is a polynomial in (lam, u, n); its zero set in the frame family
    is a curve for each fixed n.
    """
    c1, c2 = _centers(fs, n, lam, u)
    lam = as_rational(lam)
    return (c1 - c2) * lam * (1 - lam)


@dataclass(frozen=True)
class BalancedFrame:
    lam: Fraction
    u: Fraction
    center: Fraction
    n_coefficient: tuple
    frame: Frame

    def as_tuple(self) -> tuple:
        return self.lam, self.u


@functools.lru_cache(maxsize=None)
def _n_coefficient(fs: FiberedSurface) -> tuple:
    # the defect is affine in n, so its n-slope is the same for every n
    return tuple(_fit(lambda x: coincidence_defect(fs, 3, x, 0) - coincidence_defect(fs, 2, x, 0)))


def solve_balanced(fs: FiberedSurface, n: int) -> BalancedFrame:
    """The frame on which both Gieseker candidates give the same wall for every n.

    The defect (C1 - C2) lam (1 - lam) is affine in n.  Requiring it to
    vanish for all n pins lam to a root of the n-coefficient; u then
    solves the remaining linear equation.
    """
    n = _check_n(n)
    n_coef = _n_coefficient(fs)
    lams = [x for x in _rational_roots(n_coef) if 0 < x < 1]
    sols = []
    for lam in lams:
        f0 = coincidence_defect(fs, n, lam, 0)
        f1 = coincidence_defect(fs, n, lam, 1)
        slope = f1 - f0
        if slope == 0:
            continue
        u = -f0 / slope
        if u < 0:
            continue
        if any(coincidence_defect(fs, m, lam, u) != 0 for m in (n, n + 1, n + 2)):
            continue
        sols.append((lam, u))
    if len(sols) != 1:
        raise NoSolution(f"expected one balanced frame, found {len(sols)}")
    lam, u = sols[0]
    c1, c2 = _centers(fs, n, lam, u)
    if c1 != c2:
        raise ArithmeticError("balanced frame does not make the centers coincide")
    return BalancedFrame(lam, u, c1, tuple(n_coef), toy_frame(fs, lam, u))


@dataclass(frozen=True)
class BoundReport:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    per_k: tuple

    @property
    def ok(self) -> bool:
        return self.holds and all(b < self.rhs for _, b in self.per_k)


def higher_rank_bound_check(fs: FiberedSurface, n: int, k_max: int = 10,
                            balanced: Optional[BalancedFrame] = None) -> BoundReport:
    """(u^2 + 2n/g) 9/8 < C^2 on the balanced frame, plus the rank-k bounds.

    The rank-k bound (u^2 + 2n/g)(2k-1)^2/((2k-1)^2 - 1) decreases in k,
    so k = 2 is the binding case.
    """
    bal = balanced or solve_balanced(fs, n)
    u, g = bal.u, bal.frame.g
    base = u * u + 2 * n / g
    rhs = bal.center ** 2
    per_k = []
    for k in range(2, k_max + 1):
        m = (2 * k - 1) ** 2
        per_k.append((k, base * m / (m - 1)))
    lhs = base * Fraction(9, 8)
    return BoundReport(lhs, rhs, lhs < rhs, tuple(per_k))


@dataclass(frozen=True)
class SweepReport:
    gieseker: WallRecord
    checked: int
    empty: int
    inadmissible: int
    coincident: tuple
    smaller: int
    larger: tuple

    @property
    def ok(self) -> bool:
        return not self.larger


def rank_one_sweep(fs: FiberedSurface, n: int, bound: int = 10,
                   balanced: Optional[BalancedFrame] = None) -> SweepReport:
    """All ch' = (1, L, L^2/2) with L = -(mF + kE), 0 <= m, k <= bound.

    Each nonempty, admissible wall is compared with the Gieseker wall at
    the balanced frame.  ``larger`` lists any wall of bigger radius.
    """
    bal = balanced or solve_balanced(fs, n)
    frame = bal.frame
    S = fs.surface
    ch = ideal_sheaf_character(fs, n)
    gw = wall_of_pair(ch, gieseker_candidates(fs, n)[0], frame)
    checked = empty = inadm = smaller = 0
    coincident, larger = [], []
    for m in range(bound + 1):
        for k in range(bound + 1):
            L = Divisor((-k, -m))
            chp = ChernCharacter(1, L, intersect(L, L, S) / 2)
            checked += 1
            try:
                w = wall_of_pair(ch, chp, frame)
            except DegenerateWall:
                empty += 1
                continue
            if w.empty:
                empty += 1
            elif not _admissible(ch, chp, w):
                inadm += 1
            elif w.radius_sq > gw.radius_sq:
                larger.append((m, k, w))
            elif w.radius_sq == gw.radius_sq and w.C == gw.C:
                coincident.append((m, k))
            else:
                smaller += 1
    return SweepReport(gw, checked, empty, inadm, tuple(coincident), smaller, tuple(larger))


# --- limits and the nef cone ----------------------------------------------------

def _limit_direction(fs, n, u, chp, at_zero: bool) -> DivisorExpr:
    """Normalized limit of the candidate bundle as lam -> 0+ or 1-.

    Coefficients times lam (1 - lam) are polynomials in lam; the limit
    direction is given by the lowest-order nonvanishing term at the end
    point.
    """
    polys = {}
    cache = {}

    def coeff(sym):
        def f(x):
            if x not in cache:
                cache[x] = candidate_line_bundle(fs, n, x, u, chp)
            return cache[x][sym] * x * (1 - x)
        return f

    probe = candidate_line_bundle(fs, n, Fraction(1, 2), u, chp)
    syms = [fs.section_symbol, "F~", B] + [s for s in probe.symbols()
                                           if s not in (fs.section_symbol, "F~", B)]
    for sym in syms:
        c = _fit(coeff(sym))
        if not at_zero:
            c = _shift_to_one(c)
        polys[sym] = c
    order = min((next((i for i, a in enumerate(c) if a != 0), math.inf) for c in polys.values()))
    if order is math.inf:
        raise NoSolution("candidate bundle vanishes identically")
    direction = DivisorExpr([(s, c[order] if order < len(c) else 0) for s, c in polys.items()])
    return direction.normalized(pivot=next(s for s in syms if direction[s] != 0))


def _shift_to_one(coeffs) -> list:
    """Coefficients of p(1 - y) in y."""
    out = [Fraction(0)] * len(coeffs)
    for i, a in enumerate(coeffs):
        # (1 - y)^i
        for j in range(i + 1):
            out[j] += a * math.comb(i, j) * (-1) ** j
    return out


@dataclass(frozen=True)
class NefCone:
    surface: FiberedSurface
    n: int
    generators: tuple
    balanced: BalancedFrame
    wall: WallRecord
    bound: BoundReport
    sweep: Optional[SweepReport] = None

    def certificate(self) -> dict:
        return {
            "lambda": self.balanced.lam,
            "u": self.balanced.u,
            "center": self.balanced.center,
            "radius_sq": self.wall.radius_sq,
            "higher_rank_lhs": self.bound.lhs,
            "higher_rank_rhs": self.bound.rhs,
            "higher_rank_ok": self.bound.ok,
            "rank_one_ok": None if self.sweep is None else self.sweep.ok,
        }


def nef_cone(fs: FiberedSurface, n: int, sweep_bound: Optional[int] = None) -> NefCone:
    """Three generators of the nef cone of the Hilbert scheme of n points.

    The first two are the lam -> 1- and lam -> 0+ limits of the candidate
    bundles; the third is the bundle of the coincident Gieseker wall on
    the balanced frame.
    """
    n = _check_n(n)
    bal = solve_balanced(fs, n)
    f_cand, e_cand = gieseker_candidates(fs, n)
    ch = ideal_sheaf_character(fs, n)
    wall = wall_of_pair(ch, f_cand, bal.frame)
    third = candidate_line_bundle(fs, n, bal.lam, bal.u, f_cand)
    other = candidate_line_bundle(fs, n, bal.lam, bal.u, e_cand)
    if third != other:
        raise ArithmeticError("coincident wall gave two different line bundles")
    first = _reorder(fs, _limit_direction(fs, n, bal.u, e_cand, at_zero=False))
    second = _reorder(fs, _limit_direction(fs, n, bal.u, f_cand, at_zero=True))
    bound = higher_rank_bound_check(fs, n, balanced=bal)
    sweep = rank_one_sweep(fs, n, sweep_bound, balanced=bal) if sweep_bound is not None else None
    return NefCone(fs, n, (first, second, third), bal, wall, bound, sweep)
