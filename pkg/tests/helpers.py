"""Random exact inputs shared by the test modules."""
from fractions import Fraction
import random

from bmwalls.lattice import (
    ChernCharacter,
    Divisor,
    custom_surface,
    elliptic,
    hirzebruch,
    intersect,
    k3,
    projective_plane,
)
from bmwalls.stability import Frame


def all_presets():
    out = [projective_plane(), k3(), k3(((2, 1), (1, -2)))]
    out += [hirzebruch(e) for e in range(5)]
    out += [elliptic(e) for e in range(2, 5)]
    # a rank-one surface with K = H, to exercise K != multiple of -3H
    out.append(custom_surface("quintic-like", ((5,),), (1,), 5))
    return out


def rand_q(rng, lo=-5, hi=5, dens=(1, 2, 3, 4)):
    d = rng.choice(dens)
    return Fraction(rng.randint(lo * d, hi * d), d)


def rand_divisor(rng, S, lo=-4, hi=4):
    return Divisor(rand_q(rng, lo, hi) for _ in range(S.rank))


def rand_ch(rng, S, rank=None):
    r = rng.randint(-3, 3) if rank is None else rank
    return ChernCharacter(r, rand_divisor(rng, S), rand_q(rng, -6, 6))


def rand_frame(rng, S, allow_u=True):
    if S.rank == 1:
        return Frame.standard(S, H=Divisor((rng.randint(1, 3),)))
    M = S.intersection
    while True:
        H = Divisor((rng.randint(-3, 3), rng.randint(-3, 3)))
        if intersect(H, H, S) > 0:
            break
    a = (M[0][0] * H.coords[0] + M[0][1] * H.coords[1], M[1][0] * H.coords[0] + M[1][1] * H.coords[1])
    gamma = Divisor((a[1], -a[0])) * rng.choice((1, -1, Fraction(1, 2), 2))
    u = rand_q(rng, 0, 3) if allow_u else Fraction(0)
    return Frame(S, H, gamma, u)


def rand_point(rng, frame):
    return frame.point(rand_q(rng, -6, 6), Fraction(rng.randint(1, 12), rng.randint(1, 4)))


def hrr_euler(chF, chE, S):
    """chi(F, E) = int ch(F)^dual ch(E) td(S), computed directly."""
    a0, a1, a2 = chF.ch0, -chF.ch1, chF.ch2
    b0, b1, b2 = chE.ch0, chE.ch1, chE.ch2
    c0 = a0 * b0
    c1 = b1 * a0 + a1 * b0
    c2 = a0 * b2 + a2 * b0 + intersect(a1, b1, S)
    return c2 - intersect(c1, S.K, S) / 2 + c0 * S.chi_O
