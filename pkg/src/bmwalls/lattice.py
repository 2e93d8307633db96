"""Exact intersection theory on a Neron-Severi lattice of rank one or two.

Chern characters and Mukai vectors on a surface are triples
``(degree 0, divisor class, degree 2)``.  Everything is stored as
:class:`fractions.Fraction`; floats are refused at the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import InvalidInput

__all__ = [
    "as_rational",
    "Divisor",
    "Surface",
    "ChernCharacter",
    "MukaiVector",
    "intersect",
    "mukai_vector",
    "mukai_pairing",
    "mukai_dual",
    "derived_dual",
    "euler_pairing",
    "bogomolov_discriminant",
    "projective_plane",
    "hirzebruch",
    "elliptic",
    "k3",
    "custom_surface",
]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to an exact Fraction.

    Accepts ints, Fractions (any ``numbers.Rational``) and strings such as
    ``"-3/4"``.  Floats and decimal strings are rejected: a value like 0.1
    has no exact meaning here.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE"):
            raise InvalidInput(f"decimal literal {x!r} is not exact; write it as p/q")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational number: {x!r}") from exc
    raise InvalidInput(f"expected an exact rational, got {type(x).__name__} {x!r}")


@dataclass(frozen=True)
class Divisor:
    """A rational divisor class, as coordinates in the surface's Picard basis."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(as_rational(c) for c in coords))

    @classmethod
    def zero(cls, rank: int) -> "Divisor":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "Divisor"):
        if not isinstance(other, Divisor):
            return NotImplemented
        if other.rank != self.rank:
            raise InvalidInput(f"divisor dimension mismatch: {self.rank} vs {other.rank}")
        return None

    def __add__(self, other: "Divisor") -> "Divisor":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Divisor(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Divisor") -> "Divisor":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Divisor(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Divisor":
        return Divisor(-a for a in self.coords)

    def __mul__(self, k) -> "Divisor":
        k = as_rational(k)
        return Divisor(k * a for a in self.coords)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Divisor":
        k = as_rational(k)
        return Divisor(a / k for a in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self) -> str:
        return "Divisor(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Surface:
    """Numerical model of a smooth projective surface of Picard rank <= 2.

    ``intersection`` is the Gram matrix of the declared Picard basis, whose
    elements are named by ``basis``.  ``canonical`` holds K_S in that basis.
    """

    name: str
    intersection: tuple[tuple[int, ...], ...]
    canonical: Divisor
    chi_O: int
    basis: tuple[str, ...] = ()

    def __post_init__(self):
        m = tuple(tuple(int(a) for a in row) for row in self.intersection)
        object.__setattr__(self, "intersection", m)
        rank = len(m)
        if rank not in (1, 2):
            raise InvalidInput(f"Picard rank must be 1 or 2, got {rank}")
        if any(len(row) != rank for row in m):
            raise InvalidInput("intersection matrix must be square")
        if rank == 2 and m[0][1] != m[1][0]:
            raise InvalidInput("intersection matrix must be symmetric")
        det = m[0][0] if rank == 1 else m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if det == 0:
            raise InvalidInput("intersection matrix must be nondegenerate")
        k = self.canonical if isinstance(self.canonical, Divisor) else Divisor(self.canonical)
        if k.rank != rank:
            raise InvalidInput("canonical class has the wrong number of coordinates")
        object.__setattr__(self, "canonical", k)
        object.__setattr__(self, "chi_O", int(self.chi_O))
        basis = tuple(self.basis) or (("H",) if rank == 1 else ("L1", "L2"))
        if len(basis) != rank:
            raise InvalidInput("basis names must match the Picard rank")
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return len(self.intersection)

    @property
    def K(self) -> Divisor:
        return self.canonical

    @property
    def K2(self) -> Fraction:
        return intersect(self.canonical, self.canonical, self)

    @property
    def ch2(self) -> Fraction:
        """ch_2 of the tangent bundle, from Noether's formula."""
        return -12 * (self.chi_O - self.K2 / 8)

    @property
    def is_k3(self) -> bool:
        return self.canonical.is_zero() and self.chi_O == 2

    def divisor(self, *coords) -> Divisor:
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
            coords = tuple(coords[0])
        d = Divisor(coords)
        if d.rank != self.rank:
            raise InvalidInput(f"{self.name} has Picard rank {self.rank}, got {d.rank} coordinates")
        return d

    def generator(self, i: int) -> Divisor:
        return Divisor(1 if j == i else 0 for j in range(self.rank))

    def zero(self) -> Divisor:
        return Divisor.zero(self.rank)

    def ch(self, ch0, ch1, ch2) -> "ChernCharacter":
        """Build a character; ``ch1`` may be a Divisor, a sequence, or a scalar on rank one."""
        if not isinstance(ch1, Divisor):
            if isinstance(ch1, (int, Fraction, str)):
                ch1 = (ch1,)
            ch1 = self.divisor(tuple(ch1))
        return ChernCharacter(ch0, ch1, ch2)


def intersect(a: Divisor, b: Divisor, S: Surface) -> Fraction:
    """The intersection number a.b on ``S``."""
    if a.rank != S.rank or b.rank != S.rank:
        raise InvalidInput(
            f"dimension mismatch: {a.rank}, {b.rank} against Picard rank {S.rank}"
        )
    M = S.intersection
    total = Fraction(0)
    for i, ai in enumerate(a.coords):
        if ai:
            for j, bj in enumerate(b.coords):
                if bj and M[i][j]:
                    total += ai * M[i][j] * bj
    return total


class _Triple:
    # shared arithmetic for ChernCharacter / MukaiVector; subclasses set the
    # field names via _parts/_make

    def _parts(self):
        raise NotImplementedError

    @classmethod
    def _make(cls, a0, a1, a2):
        return cls(a0, a1, a2)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        a, b = self._parts(), other._parts()
        return self._make(a[0] + b[0], a[1] + b[1], a[2] + b[2])

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        a, b = self._parts(), other._parts()
        return self._make(a[0] - b[0], a[1] - b[1], a[2] - b[2])

    def __neg__(self):
        a0, a1, a2 = self._parts()
        return self._make(-a0, -a1, -a2)

    def __mul__(self, k):
        k = as_rational(k)
        a0, a1, a2 = self._parts()
        return self._make(k * a0, a1 * k, k * a2)

    __rmul__ = __mul__

    def dual(self):
        """Mukai dual: negate the degree-one part."""
        a0, a1, a2 = self._parts()
        return self._make(a0, -a1, a2)

    def is_zero(self) -> bool:
        a0, a1, a2 = self._parts()
        return a0 == 0 and a1.is_zero() and a2 == 0

    def __iter__(self):
        return iter(self._parts())


@dataclass(frozen=True, eq=True)
class ChernCharacter(_Triple):
    ch0: Fraction
    ch1: Divisor
    ch2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ch0", as_rational(self.ch0))
        object.__setattr__(self, "ch2", as_rational(self.ch2))
        if not isinstance(self.ch1, Divisor):
            object.__setattr__(self, "ch1", Divisor(self.ch1))

    def _parts(self):
        return self.ch0, self.ch1, self.ch2

    def __repr__(self) -> str:
        c1 = ", ".join(str(c) for c in self.ch1.coords)
        return f"ch({self.ch0}, [{c1}], {self.ch2})"


@dataclass(frozen=True, eq=True)
class MukaiVector(_Triple):
    v0: Fraction
    v1: Divisor
    v2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v0", as_rational(self.v0))
        object.__setattr__(self, "v2", as_rational(self.v2))
        if not isinstance(self.v1, Divisor):
            object.__setattr__(self, "v1", Divisor(self.v1))

    def _parts(self):
        return self.v0, self.v1, self.v2

    def __repr__(self) -> str:
        c1 = ", ".join(str(c) for c in self.v1.coords)
        return f"v({self.v0}, [{c1}], {self.v2})"


def mukai_vector(ch: ChernCharacter, S: Surface) -> MukaiVector:
    """v(ch) = ch . sqrt(td S), written out in degrees 0, 1, 2."""
    K = S.K
    return MukaiVector(
        ch.ch0,
        ch.ch1 - K * (ch.ch0 / 4),
        ch.ch2 - intersect(ch.ch1, K, S) / 4 + ch.ch0 * (S.chi_O - S.K2 / 16) / 2,
    )


def mukai_pairing(w: MukaiVector, v: MukaiVector, S: Surface) -> Fraction:
    """The (signed) Mukai pairing <w, v>_S.

    Not symmetric unless K_S = 0: <w,v> - <v,w> = w0 (v1.K) - v0 (w1.K).
    """
    K = S.K
    return (
        intersect(w.v1, v.v1, S)
        - w.v0 * (v.v2 - intersect(v.v1, K, S) / 2)
        - v.v0 * (w.v2 + intersect(w.v1, K, S) / 2)
        - w.v0 * v.v0 * S.K2 / 8
    )


def mukai_dual(x):
    return x.dual()


def derived_dual(ch: ChernCharacter) -> ChernCharacter:
    """Character of RHom(-, O_S)[1]: (c0, c1, c2) -> (-c0, c1, -c2)."""
    return ChernCharacter(-ch.ch0, ch.ch1, -ch.ch2)


def euler_pairing(chF: ChernCharacter, chE: ChernCharacter, S: Surface) -> Fraction:
    """chi(F, E) via Hirzebruch-Riemann-Roch."""
    return -mukai_pairing(mukai_vector(chF, S), mukai_vector(chE, S), S)


def bogomolov_discriminant(ch: ChernCharacter, S: Surface) -> Fraction:
    return intersect(ch.ch1, ch.ch1, S) - 2 * ch.ch0 * ch.ch2


# --- presets -----------------------------------------------------------------

def projective_plane() -> Surface:
    return Surface("P2", ((1,),), Divisor((-3,)), 1, ("H",))


def hirzebruch(e: int) -> Surface:
    """Sigma_e in the basis (E, F): E^2 = -e, E.F = 1, F^2 = 0."""
    e = int(e)
    if e < 0:
        raise InvalidInput("Hirzebruch surfaces need e >= 0")
    # K = -2(E + eF) + (e - 2)F = -2E - (e + 2)F
    return Surface(f"Sigma_{e}", ((-e, 1), (1, 0)), Divisor((-2, -(e + 2))), 1, ("E", "F"))


def elliptic(e: int) -> Surface:
    """Elliptic surface over P^1 with a section E of self-intersection -e (e >= 2)."""
    e = int(e)
    if e < 2:
        raise InvalidInput("elliptic surfaces with a section need e >= 2")
    return Surface(f"S_{e}", ((-e, 1), (1, 0)), Divisor((0, e - 2)), e, ("E", "F"))


def k3(intersection: Sequence[Sequence[int]] = ((2,),), basis: Sequence[str] = ()) -> Surface:
    """A K3 surface with a user-supplied (even) Picard lattice."""
    rank = len(intersection)
    return Surface("K3", tuple(tuple(r) for r in intersection), Divisor((0,) * rank), 2,
                   tuple(basis) or (("H",) if rank == 1 else ("L1", "L2")))


def custom_surface(name, intersection, canonical, chi_O, basis=()) -> Surface:
    return Surface(name, tuple(tuple(r) for r in intersection), Divisor(canonical), chi_O,
                   tuple(basis))
