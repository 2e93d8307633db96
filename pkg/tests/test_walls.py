from fractions import Fraction
import math
import random

import pytest

from bmwalls.errors import DegenerateWall, EmptySearch, InvalidInput, NotK3, ZeroRank
from bmwalls.lattice import ChernCharacter, Divisor, elliptic, hirzebruch, intersect, k3, projective_plane
from bmwalls.nefcone import FiberedSurface, toy_frame
from bmwalls.stability import Frame, bridgeland_slope, central_charge, twisted_central_charge
from bmwalls.walls import (
    TWISTED_K3,
    SearchBounds,
    F_invariant,
    Fprime_invariant,
    circles_cross,
    circles_nested,
    destabilizer_through_point,
    dual_wall_check,
    enumerate_walls,
    k3_wall_of_pair,
    on_wall,
    sq_line_of_wall,
    wall_of_pair,
    wall_point,
)

from helpers import all_presets, rand_ch, rand_divisor, rand_frame, rand_point, rand_q

P2 = projective_plane()
FR = Frame.standard(P2)
Q = Fraction


def _numerical_wall_test(ch, chp, frame, charge, wall, rng, samples=6):
    """(Re Z Im Z' - Re Z' Im Z)/t is a constant multiple of the circle equation."""
    ratio = None
    for _ in range(samples):
        p = rand_point(rng, frame)
        z, zp = charge(ch, p), charge(chp, p)
        f = (z.re * zp.im - zp.re * z.im) / p.t
        circ = (p.s - wall.C) ** 2 + p.t ** 2 - wall.radius_sq
        if circ == 0:
            assert f == 0
            continue
        r = f / circ
        if ratio is None:
            ratio = r
        assert r == ratio


def test_p2_ideal_sheaf_of_two_points():
    w = wall_of_pair(P2.ch(1, 0, -2), P2.ch(1, -1, Q(1, 2)), FR)
    assert (w.C, w.D, w.radius_sq) == (Q(-5, 2), -4, Q(9, 4))
    assert w.exact_radius == Q(3, 2)
    assert on_wall(w, Q(-5, 2), Q(3, 2))


def test_wall_formula_against_slope_equality():
    rng = random.Random(17)
    checked = 0
    for S in all_presets():
        for _ in range(40):
            fr = rand_frame(rng, S)
            ch, chp = rand_ch(rng, S), rand_ch(rng, S)
            try:
                w = wall_of_pair(ch, chp, fr)
            except DegenerateWall:
                continue
            _numerical_wall_test(ch, chp, fr, central_charge, w, rng)
            checked += 1
    assert checked > 300


def test_twisted_k3_wall_against_twisted_charge():
    rng = random.Random(19)
    for S in (k3(), k3(((2, 1), (1, -2))), k3(((4,),))):
        for _ in range(60):
            fr = rand_frame(rng, S)
            ch, chp = rand_ch(rng, S), rand_ch(rng, S)
            try:
                w = k3_wall_of_pair(ch, chp, fr)
            except DegenerateWall:
                continue
            assert w.radius_sq == wall_of_pair(ch, chp, fr).radius_sq + 2 / fr.g
            _numerical_wall_test(ch, chp, fr, twisted_central_charge, w, rng)


def test_k3_wall_requires_trivial_canonical_class():
    with pytest.raises(NotK3):
        k3_wall_of_pair(P2.ch(1, 0, -2), P2.ch(1, -1, 0), FR)
    with pytest.raises(NotK3):
        enumerate_walls(P2.ch(1, 0, -2), FR, model=TWISTED_K3)


def test_toy_model_closed_forms():
    # C = (ch2' + ch0' n - u ch1'.gamma)/(ch1'.H),  D = -u^2 - 2n/H^2
    rng = random.Random(23)
    for kind, e in [("hirzebruch", 0), ("hirzebruch", 3), ("elliptic", 2), ("elliptic", 4)]:
        fs = FiberedSurface(kind, e)
        S = fs.surface
        for _ in range(40):
            lam = Q(rng.randint(1, 9), 10)
            u = rand_q(rng, 0, 2)
            fr = toy_frame(fs, lam, u)
            n = rng.randint(2, 8)
            chp = rand_ch(rng, S, rank=rng.randint(1, 3))
            if intersect(chp.ch1, fr.H, S) == 0:
                continue
            w = wall_of_pair(S.ch(1, S.zero(), -n), chp, fr)
            assert w.C == (chp.ch2 + chp.ch0 * n - u * intersect(chp.ch1, fr.gamma, S)) / intersect(chp.ch1, fr.H, S)
            assert w.D == -u * u - 2 * Q(n) / fr.g


def test_degenerate_pair():
    with pytest.raises(DegenerateWall):
        wall_of_pair(P2.ch(1, 0, -2), P2.ch(2, 0, 1), FR)


def test_destabilizer_through_point_puts_point_on_wall():
    rng = random.Random(29)
    for S in all_presets():
        fr = rand_frame(rng, S)
        for _ in range(20):
            ch = rand_ch(rng, S)
            p = rand_point(rng, fr)
            if central_charge(ch, p).im == 0:
                continue
            chp = destabilizer_through_point(ch, p, rng.randint(-2, 2), rand_divisor(rng, S))
            assert bridgeland_slope(chp, p) == bridgeland_slope(ch, p) or central_charge(chp, p).im == 0
            try:
                w = wall_of_pair(ch, chp, fr)
            except DegenerateWall:
                continue
            assert on_wall(w, p.s, p.t)


def test_pivot_is_shared_by_all_walls():
    rng = random.Random(31)
    for S in all_presets():
        fr = rand_frame(rng, S)
        ch = rand_ch(rng, S, rank=rng.choice((1, 2, -1)))
        pivots = set()
        for _ in range(15):
            try:
                w = wall_of_pair(ch, rand_ch(rng, S), fr)
            except DegenerateWall:
                continue
            line = sq_line_of_wall(w)
            ps, pq = line.pivot
            assert line.at(ps) == pq
            pivots.add(line.pivot)
        assert len(pivots) <= 1


def test_rank_zero_walls_are_parallel_lines():
    ch = P2.ch(0, 2, Q(1, 3))
    slopes = set()
    for chp in [P2.ch(1, -1, 0), P2.ch(1, 0, -1), P2.ch(2, 1, Q(-1, 2))]:
        w = wall_of_pair(ch, chp, FR)
        line = sq_line_of_wall(w)
        slopes.add(line.slope)
        assert line.pivot is None and line.anchor is not None
        assert line.at(line.anchor[0]) == line.anchor[1]
    assert len(slopes) == 1


def test_pivot_of_ideal_sheaf_on_p2():
    for n in range(2, 7):
        ch = P2.ch(1, 0, -n)
        for w in enumerate_walls(ch, FR):
            assert sq_line_of_wall(w).pivot == (0, -n)
        assert F_invariant(ch, FR) == 2 * n


def test_invariants_need_rank():
    with pytest.raises(ZeroRank):
        F_invariant(P2.ch(0, 1, 0), FR)
    with pytest.raises(ZeroRank):
        Fprime_invariant(P2.ch(0, 1, 0), FR)


def test_dual_walls_random():
    rng = random.Random(37)
    for S in all_presets():
        for _ in range(30):
            fr = rand_frame(rng, S)
            ch, chp = rand_ch(rng, S), rand_ch(rng, S)
            p = rand_point(rng, fr)
            pts = [(p.s, p.t)] if central_charge(ch, p).im != 0 else []
            try:
                rep = dual_wall_check(ch, chp, fr, pts)
            except DegenerateWall:
                continue
            assert rep.ok, rep.checks


def test_enumeration_on_p2_two_points():
    walls = enumerate_walls(P2.ch(1, 0, -2), FR, SearchBounds(max_rank=1, c1_bound=3, chi_denom=2, depth=3))
    assert len(walls) == 1
    w = walls[0]
    assert (w.C, w.radius_sq) == (Q(-5, 2), Q(9, 4))
    assert w.destabilizers == (P2.ch(1, -1, Q(1, 2)),)


def test_enumeration_sorted_and_merged():
    walls = enumerate_walls(P2.ch(1, 0, -4), FR, SearchBounds(max_rank=2))
    keys = [(-w.radius_sq, w.C) for w in walls]
    assert keys == sorted(keys)
    assert len({(w.C, w.radius_sq) for w in walls}) == len(walls)
    assert any(len(w.destabilizers) > 1 for w in walls)


def test_enumeration_edge_cases():
    assert enumerate_walls(P2.ch(0, 0, 3), FR) == []
    with pytest.raises(EmptySearch):
        enumerate_walls(P2.ch(1, 0, -2), FR, SearchBounds(ranks=()))
    with pytest.raises(InvalidInput):
        enumerate_walls(P2.ch(1, 0, -2), FR, model="bogus")


def test_wall_point_is_rational_and_on_wall():
    w = wall_of_pair(P2.ch(1, 0, -2), P2.ch(1, -1, Q(1, 2)), FR)
    for m in (Q(1, 3), 1, Q(5, 2)):
        s, t = wall_point(w, m)
        assert on_wall(w, s, t) and t > 0
    with pytest.raises(InvalidInput):
        wall_point(w, 0)


def _fake(C, rsq):
    return wall_of_pair(P2.ch(1, 0, -2), P2.ch(1, -1, Q(1, 2)), FR).__class__(
        P2.ch(1, 0, -2), P2.ch(1, -1, 0), FR, Q(C), Q(0), Q(rsq))


def test_circle_relations_against_floats():
    rng = random.Random(41)
    for _ in range(400):
        a = _fake(rand_q(rng, -4, 4), rand_q(rng, 0, 9))
        b = _fake(rand_q(rng, -4, 4), rand_q(rng, 0, 9))
        r1, r2 = math.sqrt(a.radius_sq), math.sqrt(b.radius_sq)
        dist = abs(float(a.C - b.C))
        exp_cross = dist > 0 and abs(r1 - r2) < dist < r1 + r2
        exp_nested = dist + min(r1, r2) < max(r1, r2)
        # skip cases within float noise of the boundary
        margins = [abs(dist - abs(r1 - r2)), abs(dist - r1 - r2)]
        if min(margins) < 1e-9:
            continue
        assert circles_cross(a, b) == exp_cross
        assert circles_nested(a, b) == exp_nested


def test_circle_relations_exact_tangency():
    a, b = _fake(0, 4), _fake(3, 1)        # externally tangent
    assert not circles_cross(a, b) and not circles_nested(a, b)
    c = _fake(1, 1)                        # internally tangent to a
    assert not circles_cross(a, c) and not circles_nested(a, c)
    d = _fake(Q(1, 2), Q(1, 4))
    assert circles_nested(a, d)


def test_balanced_toy_surface_outermost_pair():
    fs = FiberedSurface("hirzebruch", 2)
    S = fs.surface
    walls = enumerate_walls(S.ch(1, S.zero(), -2), toy_frame(fs, Q(1, 2), Q(1, 2)))
    top = walls[0]
    assert top.C == Q(-7, 2)
    assert set(top.destabilizers) == {S.ch(1, (0, -1), 0), S.ch(1, (-1, 0), -1)}
