from fractions import Fraction
import random

import pytest

from bmwalls.errors import InvalidInput, ValidationError
from bmwalls.lattice import Divisor, hirzebruch, intersect, k3, mukai_vector, projective_plane
from bmwalls.stability import (
    INF,
    Frame,
    bridgeland_slope,
    central_charge,
    chamber_classify,
    gl2_normalized_charge,
    omega_hat_vector,
    omega_vector,
    sq_to_st,
    st_to_sq,
    twisted_central_charge,
)
from bmwalls.walls import enumerate_walls

from helpers import all_presets, rand_ch, rand_frame, rand_point

P2 = projective_plane()
FR = Frame.standard(P2)
Q = Fraction


def test_central_charge_at_the_p2_wall_apex():
    z = central_charge(P2.ch(1, 0, -2), FR.point(Q(-5, 2), Q(3, 2)))
    assert z.re == 0
    # Im Z = omega.ch1 - ch0 omega.beta = 0 - (3/2)(-5/2)
    assert z.im == Q(15, 4)
    assert bridgeland_slope(P2.ch(1, 0, -2), FR.point(Q(-5, 2), Q(3, 2))) == 0


def test_central_charge_by_hand_on_p2():
    # Re Z = -ch2 + s c1 - ch0 (s^2 - t^2)/2, Im Z = t (c1 - ch0 s)
    ch = P2.ch(2, -1, Q(1, 3))
    s, t = Q(-1, 2), Q(2)
    z = central_charge(ch, FR.point(s, t))
    assert z.re == -Q(1, 3) + s * -1 - 2 * (s * s - t * t) / 2
    assert z.im == t * (-1 - 2 * s)


def test_slope_is_infinite_when_imaginary_part_vanishes():
    assert bridgeland_slope(P2.ch(0, 0, 3), FR.point(1, 1)) is INF
    assert INF > Q(10 ** 9)
    assert not INF < Q(-5)
    assert INF == INF


def test_characteristic_vector_reproduces_central_charge():
    rng = random.Random(3)
    for S in all_presets():
        for _ in range(50):
            fr = rand_frame(rng, S)
            p = rand_point(rng, fr)
            ch = rand_ch(rng, S)
            v = mukai_vector(ch, S)
            assert omega_vector(p).pair(v, S) == central_charge(ch, p)
            assert omega_hat_vector(p).pair(v, S) == twisted_central_charge(ch, p)


def test_characteristic_vector_norms():
    rng = random.Random(5)
    for S in all_presets():
        fr = rand_frame(rng, S)
        for _ in range(10):
            p = rand_point(rng, fr)
            n = omega_vector(p).norm(S)
            assert (n.re, n.im) == (S.chi_O - S.K2 / 4, 0)
            nh = omega_hat_vector(p).norm(S)
            assert (nh.re, nh.im) == (-S.K2 / 8, 0)


def test_twisted_charge_on_k3_shifts_ch2_by_rank():
    S = k3()
    fr = Frame.standard(S)
    p = fr.point(Q(1, 3), Q(2))
    ch = S.ch(2, 1, -3)
    z = central_charge(ch, p)
    zh = twisted_central_charge(ch, p)
    assert zh.im == z.im
    assert zh.re == z.re - ch.ch0


def test_gl2_normalization_is_affine_in_s_and_q():
    ch = P2.ch(3, -2, Q(-5, 2))
    for s, t in [(Q(-1), Q(1)), (Q(1, 3), Q(5, 2)), (Q(-4), Q(1, 7))]:
        z = gl2_normalized_charge(ch, FR.point(s, t))
        _, q = st_to_sq(s, t)
        assert z.re == -ch.ch2 + ch.ch0 * q
        assert z.im == -2 - 3 * s


def test_sq_roundtrip_and_irrational_t():
    assert sq_to_st(*st_to_sq(Q(-5, 2), Q(3, 2))) == (Q(-5, 2), Q(3, 2))
    with pytest.raises(InvalidInput):
        sq_to_st(0, 1)      # t = sqrt(2)
    with pytest.raises(InvalidInput):
        st_to_sq(0, 0)


def test_frame_validation():
    S = hirzebruch(1)
    E, F = S.generator(0), S.generator(1)
    H = E + F * 2          # H^2 = 3, H.E = H.F = 1
    with pytest.raises(ValidationError, match="Hodge orthogonality"):
        Frame(S, H, F, 0)
    good = Frame(S, H, E - F, Q(1, 2))
    assert (good.g, good.d) == (3, 3)
    with pytest.raises(ValidationError):
        Frame(S, E - F, E + F * 2, 0)   # H^2 < 0
    with pytest.raises(ValidationError):
        Frame(S, H, E - F, -1)          # u < 0
    with pytest.raises(ValidationError):
        Frame(P2, P2.divisor(1), P2.zero(), 1)
    with pytest.raises(InvalidInput):
        FR.point(0, 0)


def test_frame_coordinates_recover_components():
    S = hirzebruch(2)
    E, F = S.generator(0), S.generator(1)
    H = E + F * 3
    gamma = E * intersect(H, F, S) - F * intersect(H, E, S)
    fr = Frame(S, H, gamma, Q(1, 3))
    D = H * Q(2, 5) + gamma * Q(-3, 4)
    assert fr.coordinates(D) == (Q(2, 5), Q(-3, 4))


def test_mirrored_point():
    S = hirzebruch(1)
    E, F = S.generator(0), S.generator(1)
    fr = Frame(S, E + F * 2, E * 1 - F * 1, Q(1, 2))
    p = fr.point(Q(1, 3), 2)
    m = p.mirrored()
    assert m.s == Q(-1, 3) and m.t == 2
    assert m.beta == -p.beta


def test_chamber_labels_on_p2():
    ch = P2.ch(1, 0, -2)
    walls = enumerate_walls(ch, FR)
    assert chamber_classify(ch, FR.point(Q(-5, 2), 1), walls).label == "INTERIOR"
    assert chamber_classify(ch, FR.point(Q(-5, 2), Q(3, 2)), walls).label == "INTERIOR"  # on the wall
    assert chamber_classify(ch, FR.point(Q(-5, 2), 3), walls).label == "GC"
    assert chamber_classify(ch, FR.point(0, 3), walls).label == "UW"
    assert chamber_classify(ch, FR.point(1, 3), walls).label == "INVALID"
    assert chamber_classify(P2.ch(0, 0, 3), FR.point(1, 3), []).label == "TC"
    assert chamber_classify(P2.ch(0, 0, -3), FR.point(1, 3), []).label == "INVALID"
    dual = P2.ch(-1, 0, 2)
    assert chamber_classify(dual, FR.point(5, 10), enumerate_walls(dual, FR)).label == "DGC"
    assert chamber_classify(dual, FR.point(0, 10), []).label == "DUW"
    sheaf = P2.ch(0, 1, Q(1, 2))
    assert chamber_classify(sheaf, FR.point(0, 50), enumerate_walls(sheaf, FR)).label == "SC"
    res = chamber_classify(ch, FR.point(-3, 3), walls, bounds="b")
    assert res.walls_checked == 1 and res.bounds == "b"
