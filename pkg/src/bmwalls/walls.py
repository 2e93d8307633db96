"""Potential walls W(ch, ch') on a frame.

In the (s, t) half-plane a wall is the semicircle
(s - C)^2 + t^2 = C^2 + D; in the (s, q) plane, q = (s^2 + t^2)/2, it is the
line q = C s + D/2.  For ch0 != 0 every such line passes through one pivot
depending only on ch, which is why the circles are nested.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegenerateWall, EmptySearch, InvalidInput, NotK3, ZeroRank
from .lattice import ChernCharacter, Divisor, derived_dual, intersect
from .stability import (
    Frame,
    StabilityPoint,
    bridgeland_slope,
    central_charge,
    _exact_sqrt,
)

UNTWISTED = "untwisted"
TWISTED_K3 = "twistedK3"

__all__ = [
    "UNTWISTED",
    "TWISTED_K3",
    "WallRecord",
    "SqLine",
    "SearchBounds",
    "frame_data",
    "wall_of_pair",
    "k3_wall_of_pair",
    "F_invariant",
    "Fprime_invariant",
    "sq_line_of_wall",
    "dual_wall_check",
    "enumerate_walls",
    "destabilizer_through_point",
    "wall_point",
    "on_wall",
    "circles_cross",
    "circles_nested",
]


def frame_data(ch: ChernCharacter, frame: Frame):
    """(rank, y1, y2, ch2) of ``ch`` in the frame's (H, gamma) coordinates."""
    y1, y2 = frame.coordinates(ch.ch1)
    return ch.ch0, y1, y2, ch.ch2


@dataclass(frozen=True)
class WallRecord:
    ch: ChernCharacter
    chp: ChernCharacter
    frame: Frame
    C: Fraction
    D: Fraction
    radius_sq: Fraction
    model: str = UNTWISTED
    destabilizers: tuple = field(default=())

    def __post_init__(self):
        if not self.destabilizers:
            object.__setattr__(self, "destabilizers", (self.chp,))

    @property
    def empty(self) -> bool:
        return self.radius_sq <= 0

    @property
    def shift(self) -> Fraction:
        """Amount added to C^2 + D by the model (2/g for twisted K3 walls)."""
        return 2 / self.frame.g if self.model == TWISTED_K3 else Fraction(0)

    @property
    def radius(self) -> float:
        # display only
        return math.sqrt(self.radius_sq) if self.radius_sq > 0 else 0.0

    @property
    def exact_radius(self) -> Optional[Fraction]:
        return _exact_sqrt(self.radius_sq)


def _C_D(ch, chp, frame):
    x, y1, y2, z = frame_data(ch, frame)
    r, c1, c2, chi = frame_data(chp, frame)
    g, d, u = frame.g, frame.d, frame.u
    den = g * (x * c1 - r * y1)
    if den == 0:
        raise DegenerateWall(f"g(x c1 - r y1) = 0 for ch = {ch!r}, ch' = {chp!r}")
    C = (x * chi - r * z + u * d * (x * c2 - r * y2)) / den
    D = (
        2 * z * c1
        - 2 * c2 * u * d * y1
        - x * u * u * d * c1
        + 2 * y2 * u * d * c1
        - 2 * chi * y1
        + r * u * u * d * y1
    ) / den
    return C, D


def wall_of_pair(ch: ChernCharacter, chp: ChernCharacter, frame: Frame) -> WallRecord:
    C, D = _C_D(ch, chp, frame)
    return WallRecord(ch, chp, frame, C, D, C * C + D, UNTWISTED)


def k3_wall_of_pair(ch: ChernCharacter, chp: ChernCharacter, frame: Frame) -> WallRecord:
    """Wall for the sqrt(td)-twisted charge on a K3: radius^2 grows by 2/g."""
    if not frame.surface.K.is_zero():
        raise NotK3(f"{frame.surface.name} has nonzero canonical class")
    C, D = _C_D(ch, chp, frame)
    return WallRecord(ch, chp, frame, C, D, C * C + D + 2 / frame.g, TWISTED_K3)


def _F(rank, a1, a2, deg2, frame):
    g, d, u = frame.g, frame.d, frame.u
    return d / g * (u - a2 / rank) ** 2 + (a1 * a1 * g - a2 * a2 * d - 2 * rank * deg2) / (
        rank * rank * g
    )


def F_invariant(ch: ChernCharacter, frame: Frame) -> Fraction:
    x, y1, y2, z = frame_data(ch, frame)
    if x == 0:
        raise ZeroRank("F(ch) needs ch0 != 0")
    return _F(x, y1, y2, z, frame)


def Fprime_invariant(chp: ChernCharacter, frame: Frame) -> Fraction:
    r, c1, c2, chi = frame_data(chp, frame)
    if r == 0:
        raise ZeroRank("F'(ch') needs ch0' != 0")
    return _F(r, c1, c2, chi, frame)


@dataclass(frozen=True)
class SqLine:
    """q = slope * s + intercept, restricted to q > s^2/2.

    ``pivot`` is the point shared by all walls of ``ch`` (ch0 != 0);
    ``anchor`` is the point singled out by ch' when ch0 = 0 (all walls are
    then parallel with the same slope).
    """

    slope: Fraction
    intercept: Fraction
    pivot: Optional[tuple] = None
    anchor: Optional[tuple] = None

    def at(self, s) -> Fraction:
        return self.slope * s + self.intercept


def sq_line_of_wall(w: WallRecord) -> SqLine:
    x, y1, _, _ = frame_data(w.ch, w.frame)
    intercept = w.D / 2 + w.shift / 2
    pivot = anchor = None
    if x != 0:
        F = F_invariant(w.ch, w.frame)
        pivot = (y1 / x, ((y1 / x) ** 2 - F) / 2 + w.shift / 2)
    else:
        r, c1, _, _ = frame_data(w.chp, w.frame)
        if r != 0:
            Fp = Fprime_invariant(w.chp, w.frame)
            anchor = (c1 / r, ((c1 / r) ** 2 - Fp) / 2 + w.shift / 2)
    return SqLine(w.C, intercept, pivot, anchor)


@dataclass(frozen=True)
class DualReport:
    wall: WallRecord
    dual: WallRecord
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def dual_wall_check(ch, chp, frame, points: Sequence = ()) -> DualReport:
    """Compare W(ch, ch') with W(-ch*, -ch'*) in the mirrored frame (H, -gamma, u).

    ``points`` are optional (s, t) pairs at which the slope identity
    mu_{(-s,t)}(-ch*) = -mu_{(s,t)}(ch) is also checked.
    """
    w = wall_of_pair(ch, chp, frame)
    mirror = frame.mirrored()
    dw = wall_of_pair(derived_dual(ch), derived_dual(chp), mirror)
    checks = {
        "C": dw.C == -w.C,
        "D": dw.D == w.D,
        "radius_sq": dw.radius_sq == w.radius_sq,
    }
    for s, t in points:
        p = frame.point(s, t)
        if central_charge(ch, p).im == 0:
            raise InvalidInput(f"Im Z(ch) vanishes at ({s}, {t})")
        mu = bridgeland_slope(ch, p)
        mu_d = bridgeland_slope(derived_dual(ch), p.mirrored())
        checks[f"mu@({s},{t})"] = mu_d == -mu
    return DualReport(w, dw, checks)


@dataclass(frozen=True)
class SearchBounds:
    """Box of destabilizing characters ch' = (r, c1', ch2').

    ``ranks`` defaults to 1..max_rank (or -max_rank..-1 for ch0 < 0).
    Picard coordinates of c1' are integers in [-c1_bound, c1_bound].  ch2'
    runs over multiples of 1/chi_denom within ``depth`` of the Bogomolov
    edge c1'^2/(2r) (on the admissible side), or |ch2'| <= depth for r = 0.
    """

    max_rank: int = 1
    c1_bound: int = 3
    chi_denom: int = 2
    depth: int = 3
    ranks: Optional[tuple] = None

    def rank_range(self, ch0) -> tuple:
        if self.ranks is not None:
            return tuple(self.ranks)
        if ch0 < 0:
            return tuple(range(-self.max_rank, 0))
        return tuple(range(1, self.max_rank + 1))


def _grid(lo: Fraction, hi: Fraction, den: int):
    k0 = math.ceil(lo * den)
    k1 = math.floor(hi * den)
    return [Fraction(k, den) for k in range(k0, k1 + 1)]


def _candidates(ch, frame, bounds):
    S = frame.surface
    coords = range(-bounds.c1_bound, bounds.c1_bound + 1)
    for r in bounds.rank_range(ch.ch0):
        for c in itertools.product(coords, repeat=S.rank):
            c1 = Divisor(c)
            sq = intersect(c1, c1, S)
            if r > 0:
                edge = sq / (2 * r)
                lo, hi = edge - bounds.depth, edge
            elif r < 0:
                edge = sq / (2 * r)
                lo, hi = edge, edge + bounds.depth
            else:
                lo, hi = Fraction(-bounds.depth), Fraction(bounds.depth)
            for chi in _grid(lo, hi, bounds.chi_denom):
                yield ChernCharacter(r, c1, chi)


def _h_discriminant(ch, frame):
    h = intersect(ch.ch1, frame.H, frame.surface)
    return h * h - 2 * frame.g * ch.ch0 * ch.ch2


def _admissible(ch, chp, wall):
    """H-Bogomolov for both factors and 0 < Im Z(ch') <= Im Z(ch) at s = C.

    Uses (ch1.H)^2 - 2 H^2 ch0 ch2 rather than the classical discriminant so
    that torsion quotients supported on negative curves are kept.
    """
    fr = wall.frame
    if _h_discriminant(chp, fr) < 0 or _h_discriminant(ch - chp, fr) < 0:
        return False
    p = wall.frame.point(wall.C, 1)
    im = central_charge(ch, p).im
    im_p = central_charge(chp, p).im
    return 0 < im_p <= im


def _dkey(chp):
    return (chp.ch0, chp.ch1.coords, chp.ch2)


def enumerate_walls(ch: ChernCharacter, frame: Frame, bounds: SearchBounds = SearchBounds(),
                    model: str = UNTWISTED) -> list[WallRecord]:
    """All nonempty, admissible potential walls for ch' in the search box.

    Coincident walls from different ch' are merged into one record.  The
    result is sorted by decreasing radius, then by center.
    """
    if model == TWISTED_K3:
        make = k3_wall_of_pair
        if not frame.surface.K.is_zero():
            raise NotK3(f"{frame.surface.name} has nonzero canonical class")
    elif model == UNTWISTED:
        make = wall_of_pair
    else:
        raise InvalidInput(f"unknown wall model {model!r}")

    S = frame.surface
    if ch.ch0 == 0 and intersect(ch.ch1, frame.H, S) == 0:
        # Im Z(ch) vanishes identically: trivial chamber, no walls
        return []

    groups: dict = {}
    seen = 0
    for chp in _candidates(ch, frame, bounds):
        seen += 1
        try:
            w = make(ch, chp, frame)
        except DegenerateWall:
            continue
        if w.empty or not _admissible(ch, chp, w):
            continue
        groups.setdefault((w.C, w.radius_sq), []).append(w)
    if seen == 0:
        raise EmptySearch(f"search bounds {bounds} contain no candidate characters")

    out = []
    for (C, rsq), ws in groups.items():
        ws.sort(key=lambda w: _dkey(w.chp))
        first = ws[0]
        out.append(WallRecord(ch, first.chp, frame, C, first.D, rsq, first.model,
                              tuple(w.chp for w in ws)))
    out.sort(key=lambda w: (-w.radius_sq, w.C))
    return out


def destabilizer_through_point(ch: ChernCharacter, p: StabilityPoint, r, c1: Divisor) -> ChernCharacter:
    """The ch' = (r, c1, chi) whose wall with ``ch`` passes through ``p``.

    Solves Re Z(ch') Im Z(ch) = Re Z(ch) Im Z(ch') for chi, which enters
    Re Z(ch') linearly.
    """
    z = central_charge(ch, p)
    if z.im == 0:
        raise InvalidInput("Im Z(ch) = 0 at the point")
    base = ChernCharacter(r, c1, 0)
    zb = central_charge(base, p)
    # Re Z(ch') = zb.re - chi
    chi = zb.re - z.re * zb.im / z.im
    return ChernCharacter(r, c1, chi)


def on_wall(w: WallRecord, s, t) -> bool:
    return (s - w.C) ** 2 + t * t == w.radius_sq


def wall_point(w: WallRecord, m) -> tuple[Fraction, Fraction]:
    """Rational point on the wall from the slope parameter m > 0.

    Needs a rational radius; uses s = C + R(1 - m^2)/(1 + m^2),
    t = 2 R m/(1 + m^2).
    """
    R = w.exact_radius
    if R is None or R == 0:
        raise InvalidInput("wall radius is not a positive rational")
    m = Fraction(m)
    if m <= 0:
        raise InvalidInput("m must be positive")
    den = 1 + m * m
    return w.C + R * (1 - m * m) / den, 2 * R * m / den


def _compare_sqrt_sum(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Sign of sqrt(a) + sqrt(b) - sqrt(c) for a, b, c >= 0, exactly."""
    # sqrt(a) + sqrt(b) vs sqrt(c): square both sides twice
    lhs = a + b - c  # compare 2 sqrt(ab) with -lhs
    if lhs >= 0:
        return 0 if lhs == 0 and a * b == 0 else 1
    diff = 4 * a * b - lhs * lhs
    return (diff > 0) - (diff < 0)


def circles_cross(w1: WallRecord, w2: WallRecord) -> bool:
    """True when the two semicircles meet at some t > 0.

    Circles centered on the axis meet off the axis iff
    |R1 - R2| < |C1 - C2| < R1 + R2.
    """
    a, b = w1.radius_sq, w2.radius_sq
    dist_sq = (w1.C - w2.C) ** 2
    if dist_sq == 0:
        return False
    # |C1 - C2| < R1 + R2  <=>  sqrt(a) + sqrt(b) - sqrt(dist_sq) > 0
    if _compare_sqrt_sum(a, b, dist_sq) <= 0:
        return False
    # |R1 - R2| < |C1 - C2|: with R1 >= R2, R1 < R2 + dist
    big, small = (a, b) if a >= b else (b, a)
    return _compare_sqrt_sum(small, dist_sq, big) > 0


def circles_nested(w1: WallRecord, w2: WallRecord) -> bool:
    """True when one closed disc lies strictly inside the other."""
    a, b = w1.radius_sq, w2.radius_sq
    dist_sq = (w1.C - w2.C) ** 2
    big, small = (a, b) if a >= b else (b, a)
    if big == small:
        return False
    # dist + R_small < R_big
    return _compare_sqrt_sum(small, dist_sq, big) < 0
