"""Job files: a small ``key = value`` format with ``[section]`` headers.

Example::

    [surface]
    preset = p2

    [character]
    ch = 1, 0, -2

    [search]
    max_rank = 1
    c1_bound = 3

Numbers are integers or ``p/q`` fractions; decimal literals are rejected so
every input is exact.  A Chern character is written ``ch0, c1..., ch2`` with
one c1 coordinate per Picard basis element.  Divisors are lists of
coordinates.  Comments start with ``#``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InputError, ParseError, ValidationError
from .lattice import ChernCharacter, Divisor, Surface, custom_surface, elliptic, hirzebruch, k3, projective_plane
from .stability import Frame
from .walls import TWISTED_K3, UNTWISTED, SearchBounds

SECTIONS = {
    "surface": {"preset", "e", "intersection", "canonical", "chi", "basis", "name"},
    "character": {"ch"},
    "frame": {"H", "gamma", "u", "lambda"},
    "search": {"max_rank", "c1_bound", "chi_denom", "depth"},
    "output": {"format", "twisted"},
    "point": {"s", "t"},
    "destabilizer": {"ch"},
    "nefcone": {"n", "sweep"},
}
PRESETS = ("p2", "hirzebruch", "elliptic", "k3", "custom")
FORMATS = ("text", "csv", "json", "svg")

_INT = re.compile(r"^[+-]?\d+$")
_FRAC = re.compile(r"^[+-]?\d+/\d+$")
_FLOATISH = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][+-]?\d+)$")


def parse_rational(text: str, line=None, column=None) -> Fraction:
    tok = text.strip()
    if _INT.match(tok):
        return Fraction(int(tok))
    if _FRAC.match(tok):
        num, den = tok.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {tok!r}", line, column)
        return Fraction(int(num), int(den))
    if _FLOATISH.match(tok):
        raise ParseError(f"floating-point literal {tok!r} is not exact; write it as {Fraction(tok)}",
                         line, column)
    raise ParseError(f"expected an integer or p/q fraction, got {tok!r}", line, column)


def parse_list(text: str, line=None, column=None) -> list[Fraction]:
    out = []
    offset = 0
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        col = None if column is None else column + offset + lead
        if not part.strip():
            raise ParseError("empty list entry", line, col)
        out.append(parse_rational(part, line, col))
        offset += len(part) + 1
    return out


def parse_matrix(text: str, line=None, column=None) -> tuple:
    rows = []
    offset = 0
    for row in text.split(";"):
        col = None if column is None else column + offset
        rows.append(tuple(int(x) if x.denominator == 1 else x for x in parse_list(row, line, col)))
        offset += len(row) + 1
    return tuple(rows)


def parse_bool(text: str, line=None, column=None) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ParseError(f"expected a boolean, got {text.strip()!r}", line, column)


@dataclass
class RawValue:
    text: str
    line: int
    column: int


def parse_sections(text: str) -> dict:
    """Section -> key -> RawValue, with positions for later error reports."""
    data: dict = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        indent = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, indent)
            section = stripped[1:-1].strip()
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", lineno, indent + 1)
            if section in data:
                raise ParseError(f"section [{section}] appears twice", lineno, indent)
            data[section] = {}
            continue
        if "=" not in body:
            raise ParseError("expected key = value", lineno, indent)
        if section is None:
            raise ParseError("key outside of any section", lineno, indent)
        key, value = body.split("=", 1)
        key_s = key.strip()
        if key_s not in SECTIONS[section]:
            raise ParseError(f"unknown key {key_s!r} in [{section}]", lineno, indent)
        if key_s in data[section]:
            raise ParseError(f"duplicate key {key_s!r}", lineno, indent)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        data[section][key_s] = RawValue(value.strip(), lineno, vcol)
    return data


@dataclass
class JobSpec:
    surface: Surface
    preset: str
    e: Optional[int] = None
    ch: Optional[ChernCharacter] = None
    chp: Optional[ChernCharacter] = None
    H: Optional[Divisor] = None
    gamma: Optional[Divisor] = None
    u: Fraction = Fraction(0)
    lam: Optional[Fraction] = None
    bounds: SearchBounds = field(default_factory=SearchBounds)
    fmt: str = "text"
    twisted: bool = False
    point: Optional[tuple] = None
    n: Optional[int] = None
    sweep: int = 10

    @property
    def model(self) -> str:
        return TWISTED_K3 if self.twisted else UNTWISTED

    def frame(self) -> Frame:
        S = self.surface
        if self.lam is not None:
            from .nefcone import FiberedSurface, toy_frame

            if self.preset not in ("hirzebruch", "elliptic"):
                raise ValidationError("lambda frames need a hirzebruch or elliptic preset")
            return toy_frame(FiberedSurface(self.preset, self.e), self.lam, self.u)
        if self.H is None:
            if S.rank != 1:
                raise ValidationError("a Picard rank two surface needs H (or lambda) in [frame]")
            return Frame.standard(S, u=self.u)
        gamma = self.gamma if self.gamma is not None else S.zero()
        return Frame(S, self.H, gamma, self.u)


def build_surface(preset: str, e=None, intersection=None, canonical=None, chi=None,
                  basis=None, name=None) -> Surface:
    if preset == "p2":
        return projective_plane()
    if preset == "hirzebruch":
        return hirzebruch(0 if e is None else e)
    if preset == "elliptic":
        return elliptic(2 if e is None else e)
    if preset == "k3":
        if intersection is None:
            return k3()
        return k3(intersection, basis or ())
    if preset == "custom":
        if intersection is None or canonical is None or chi is None:
            raise ValidationError("custom surfaces need intersection, canonical and chi")
        return custom_surface(name or "custom", intersection, canonical, chi, basis or ())
    raise ValidationError(f"unknown preset {preset!r}; choose one of {', '.join(PRESETS)}")


def character_from_list(vals: list, S: Surface, line=None, column=None) -> ChernCharacter:
    if len(vals) != S.rank + 2:
        raise ParseError(f"a Chern character on {S.name} needs {S.rank + 2} entries "
                         f"(ch0, {S.rank} c1 coordinate(s), ch2), got {len(vals)}", line, column)
    return ChernCharacter(vals[0], Divisor(tuple(vals[1:-1])), vals[-1])


def _int_value(raw: RawValue) -> int:
    v = parse_rational(raw.text, raw.line, raw.column)
    if v.denominator != 1:
        raise ParseError(f"expected an integer, got {raw.text!r}", raw.line, raw.column)
    return int(v)


def parse_job(text: str) -> JobSpec:
    """Parse and validate a job file."""
    data = parse_sections(text)
    surf = data.get("surface", {})
    preset = surf["preset"].text if "preset" in surf else "p2"
    if preset not in PRESETS:
        r = surf["preset"]
        raise ParseError(f"unknown preset {preset!r}; choose one of {', '.join(PRESETS)}", r.line, r.column)
    e = _int_value(surf["e"]) if "e" in surf else None
    inter = canon = chi = None
    if "intersection" in surf:
        r = surf["intersection"]
        inter = parse_matrix(r.text, r.line, r.column)
    if "canonical" in surf:
        r = surf["canonical"]
        canon = tuple(parse_list(r.text, r.line, r.column))
    if "chi" in surf:
        chi = _int_value(surf["chi"])
    basis = tuple(b.strip() for b in surf["basis"].text.split(",")) if "basis" in surf else None
    name = surf["name"].text if "name" in surf else None
    try:
        S = build_surface(preset, e, inter, canon, chi, basis, name)
    except InputError as exc:
        if isinstance(exc, (ParseError, ValidationError)):
            raise
        raise ValidationError(str(exc)) from exc

    job = JobSpec(surface=S, preset=preset, e=e)

    for sec, attr in (("character", "ch"), ("destabilizer", "chp")):
        if "ch" in data.get(sec, {}):
            r = data[sec]["ch"]
            setattr(job, attr, character_from_list(parse_list(r.text, r.line, r.column), S, r.line, r.column))

    fr = data.get("frame", {})
    for key in ("H", "gamma"):
        if key in fr:
            r = fr[key]
            vals = parse_list(r.text, r.line, r.column)
            if len(vals) != S.rank:
                raise ParseError(f"{key} needs {S.rank} coordinate(s)", r.line, r.column)
            setattr(job, key, Divisor(tuple(vals)))
    if "u" in fr:
        r = fr["u"]
        job.u = parse_rational(r.text, r.line, r.column)
    if "lambda" in fr:
        r = fr["lambda"]
        job.lam = parse_rational(r.text, r.line, r.column)

    se = data.get("search", {})
    kw = {k: _int_value(se[k]) for k in ("max_rank", "c1_bound", "chi_denom", "depth") if k in se}
    for k, v in kw.items():
        if v < (0 if k == "depth" else 1):
            raise ValidationError(f"search bound {k} = {v} is out of range")
    job.bounds = SearchBounds(**kw)

    out = data.get("output", {})
    if "format" in out:
        r = out["format"]
        if r.text not in FORMATS:
            raise ParseError(f"unknown format {r.text!r}; choose one of {', '.join(FORMATS)}", r.line, r.column)
        job.fmt = r.text
    if "twisted" in out:
        r = out["twisted"]
        job.twisted = parse_bool(r.text, r.line, r.column)

    pt = data.get("point", {})
    if pt:
        if set(pt) != {"s", "t"}:
            raise ValidationError("[point] needs both s and t")
        job.point = tuple(parse_rational(pt[k].text, pt[k].line, pt[k].column) for k in ("s", "t"))

    nc = data.get("nefcone", {})
    if "n" in nc:
        job.n = _int_value(nc["n"])
    if "sweep" in nc:
        job.sweep = _int_value(nc["sweep"])

    # validate the frame now so that bad frames fail at parse time
    if job.H is not None or job.lam is not None or S.rank == 1:
        job.frame()
    return job
