"""Command-line entry point.

    bmwalls walls --preset p2 --ch 1,0,-2
    bmwalls nefcone --preset hirzebruch -e 2 -n 2
    bmwalls plot --preset p2 --ch 0,0,3 --out svg

Exit codes: 0 on success, 2 for invalid input, 3 for degenerate input.
"""
from __future__ import annotations

import argparse
import sys

from . import render
from .bayer_macri import (
    condition_c,
    decompose_dim0,
    decompose_dim1,
    decompose_dim2,
    frame_classes,
    global_map_known,
    picard_basis,
    wall_divisor,
)
from .config import (
    FORMATS,
    JobSpec,
    build_surface,
    character_from_list,
    parse_job,
    parse_list,
    parse_rational,
)
from .errors import DegenerateInput, InputError, ValidationError
from .lattice import ChernCharacter, Divisor
from .nefcone import FiberedSurface, nef_cone
from .stability import chamber_classify
from .walls import TWISTED_K3, SearchBounds, dual_wall_check, enumerate_walls

COMMANDS = ("walls", "decompose", "nefcone", "chamber", "dual-check", "k3-walls", "plot")
EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bmwalls", description="Exact Bridgeland walls and Bayer-Macri divisors.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="FILE", help="job file in key = value format")
    p.add_argument("--preset", choices=("p2", "hirzebruch", "elliptic", "k3"))
    p.add_argument("-e", type=int, help="surface parameter e")
    p.add_argument("-n", type=int, help="number of points (nefcone)")
    p.add_argument("--lambda", dest="lam", metavar="p/q", help="toy frame parameter")
    p.add_argument("--u", metavar="p/q", help="frame parameter u >= 0")
    p.add_argument("--H", metavar="LIST", help="frame polarization coordinates")
    p.add_argument("--gamma", metavar="LIST", help="frame gamma coordinates")
    p.add_argument("--ch", metavar="LIST", help="Chern character ch0, c1..., ch2")
    p.add_argument("--chp", metavar="LIST", help="destabilizing character")
    p.add_argument("--s", metavar="p/q")
    p.add_argument("--t", metavar="p/q")
    p.add_argument("--max-rank", type=int)
    p.add_argument("--c1-bound", type=int)
    p.add_argument("--chi-denom", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--sweep", type=int, help="rank-one sweep bound for nefcone")
    p.add_argument("--out", choices=FORMATS)
    p.add_argument("--twisted", action="store_true", help="twisted K3 wall model")
    return p


def job_from_args(args) -> JobSpec:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                job = parse_job(fh.read())
        except OSError as exc:
            raise ValidationError(f"cannot read {args.config}: {exc.strerror}") from exc
    else:
        job = JobSpec(build_surface("p2"), "p2")
    preset = args.preset or job.preset
    e = args.e if args.e is not None else job.e
    if (preset, e) != (job.preset, job.e):
        job.surface = build_surface(preset, e)
        job.preset, job.e = preset, e
    S = job.surface
    if args.ch:
        job.ch = character_from_list(parse_list(args.ch), S)
    if args.chp:
        job.chp = character_from_list(parse_list(args.chp), S)
    if args.H:
        job.H = Divisor(tuple(parse_list(args.H)))
    if args.gamma:
        job.gamma = Divisor(tuple(parse_list(args.gamma)))
    if args.u is not None:
        job.u = parse_rational(args.u)
    if args.lam is not None:
        job.lam = parse_rational(args.lam)
    if (args.s is None) != (args.t is None):
        raise ValidationError("--s and --t must be given together")
    if args.s is not None:
        job.point = (parse_rational(args.s), parse_rational(args.t))
    b = job.bounds
    job.bounds = SearchBounds(
        max_rank=args.max_rank if args.max_rank is not None else b.max_rank,
        c1_bound=args.c1_bound if args.c1_bound is not None else b.c1_bound,
        chi_denom=args.chi_denom if args.chi_denom is not None else b.chi_denom,
        depth=args.depth if args.depth is not None else b.depth,
    )
    if min(job.bounds.max_rank, job.bounds.c1_bound, job.bounds.chi_denom) < 1 or job.bounds.depth < 0:
        raise ValidationError("search bounds must be positive")
    if args.n is not None:
        job.n = args.n
    if args.sweep is not None:
        job.sweep = args.sweep
    if args.out:
        job.fmt = args.out
    if args.twisted:
        job.twisted = True
    return job


def _need(value, what):
    if value is None:
        raise ValidationError(f"this command needs {what}")
    return value


def _check_format(job, allowed):
    if job.fmt not in allowed:
        raise ValidationError(f"output format {job.fmt!r} is not available here; use one of {', '.join(allowed)}")


def _ch_label(ch: ChernCharacter) -> str:
    return render.rat(ch)


def cmd_walls(job: JobSpec, twisted: bool = False, plot: bool = False) -> str:
    ch = _need(job.ch, "a Chern character (--ch)")
    frame = job.frame()
    model = TWISTED_K3 if (twisted or job.twisted) else "untwisted"
    S = frame.surface
    trivial = ch.ch0 == 0 and ch.ch1.is_zero()
    walls = [] if trivial else enumerate_walls(ch, frame, job.bounds, model)
    title = f"{S.name} ch={_ch_label(ch)} model={model}"
    if plot or job.fmt == "svg":
        note = "trivial chamber: no walls" if trivial else None
        s0 = frame.slope_s0(ch) if ch.ch0 != 0 else None
        return render.walls_svg(ch, walls, title, note, s0)
    divs = [wall_divisor(ch, w).render() for w in walls]
    rows = render.wall_rows(walls, divs)
    cc = condition_c(ch, frame) if ch.ch0 != 0 else None
    meta = {
        "surface": S.name,
        "ch": _ch_label(ch),
        "frame": {"H": frame.H, "gamma": frame.gamma, "u": frame.u},
        "bounds": {"max_rank": job.bounds.max_rank, "c1_bound": job.bounds.c1_bound,
                   "chi_denom": job.bounds.chi_denom, "depth": job.bounds.depth},
        "global_map_known": global_map_known(S),
        "condition_c": "n/a" if cc is None else ("ok" if not cc else "; ".join(cc)),
    }
    if job.fmt == "csv":
        return render.walls_csv(rows)
    if job.fmt == "json":
        return render.walls_json(rows, meta)
    head = render.key_values([
        ("surface", S.name), ("ch", _ch_label(ch)), ("model", model),
        ("frame", f"H={render.rat(frame.H)} gamma={render.rat(frame.gamma)} u={render.rat(frame.u)}"),
        ("global map known", meta["global_map_known"]), ("condition (C)", meta["condition_c"]),
        ("walls", len(walls)),
    ])
    if trivial:
        return head + "trivial chamber: no walls\n"
    if not rows:
        return head
    return head + "\n" + render.table(rows, render.CSV_COLUMNS)


def cmd_decompose(job: JobSpec) -> str:
    _check_format(job, ("text", "json"))
    ch = _need(job.ch, "a Chern character (--ch)")
    frame = job.frame()
    S = frame.surface
    res: dict = {"ch": _ch_label(ch)}
    if ch.ch0 == 0 and ch.ch1.is_zero():
        s, t = _need(job.point, "a point (--s, --t)")
        dec = decompose_dim0(ch, frame.point(s, t))
        res.update(dimension=0, w_sigma=str(dec.vector), divisor=dec.expr.render(),
                   s_independent=dec.s_independent)
    elif ch.ch0 == 0:
        chp = _need(job.chp, "a destabilizer (--chp)")
        dec = decompose_dim1(ch, chp, frame, job.point)
        res.update(dimension=1, C=dec.wall.C, D=dec.wall.D, coefficient=dec.coefficient,
                   coefficient_simplified=dec.coefficient_simplified, t_vector=str(dec.t),
                   divisor=dec.expr.render())
    else:
        s, t = _need(job.point, "a point (--s, --t)")
        p = frame.point(s, t)
        dec = decompose_dim2(ch, p)
        res.update(dimension=2, mu=dec.mu, scale=dec.scale, m_omega=str(dec.m_omega), m_beta=str(dec.m_beta),
                   w=str(dec.w), m_alpha=str(dec.m_alpha), u=str(dec.u), divisor=dec.expr.render(),
                   divisor_picard=dec.expr.in_basis(frame_classes(frame), picard_basis(S)).render())
    if job.fmt == "json":
        return render.dumps(res)
    return render.key_values(res.items())


def cmd_nefcone(job: JobSpec) -> str:
    _check_format(job, ("text", "json"))
    if job.preset not in ("hirzebruch", "elliptic"):
        raise ValidationError("nefcone needs --preset hirzebruch or elliptic")
    n = _need(job.n, "the number of points (-n)")
    e = job.e if job.e is not None else (0 if job.preset == "hirzebruch" else 2)
    fs = FiberedSurface(job.preset, e)
    nc = nef_cone(fs, n, sweep_bound=job.sweep)
    gens = [g.render() for g in nc.generators]
    cert = nc.certificate()
    if job.fmt == "json":
        return render.dumps({"surface": fs.surface.name, "n": n, "generators": gens, "certificate": cert})
    lines = [f"surface: {fs.surface.name}", f"n: {n}", "generators:"]
    lines += [f"  {g}" for g in gens]
    lines.append("certificate:")
    lines += [f"  {k}: {render.rat(v)}" for k, v in cert.items()]
    return "\n".join(lines) + "\n"


def cmd_chamber(job: JobSpec) -> str:
    _check_format(job, ("text", "json"))
    ch = _need(job.ch, "a Chern character (--ch)")
    s, t = _need(job.point, "a point (--s, --t)")
    frame = job.frame()
    p = frame.point(s, t)
    trivial = ch.ch0 == 0 and ch.ch1.is_zero()
    walls = [] if trivial else enumerate_walls(ch, frame, job.bounds, job.model)
    res = chamber_classify(ch, p, walls, job.bounds)
    out = {"chamber": res.label, "walls_checked": res.walls_checked,
           "bounds": {"max_rank": job.bounds.max_rank, "c1_bound": job.bounds.c1_bound,
                      "chi_denom": job.bounds.chi_denom, "depth": job.bounds.depth}}
    if job.fmt == "json":
        return render.dumps(out)
    b = out["bounds"]
    return render.key_values([("chamber", res.label), ("walls checked", res.walls_checked),
                              ("bounds", " ".join(f"{k}={v}" for k, v in b.items()))])


def cmd_dual_check(job: JobSpec) -> str:
    _check_format(job, ("text", "json"))
    ch = _need(job.ch, "a Chern character (--ch)")
    chp = _need(job.chp, "a destabilizer (--chp)")
    frame = job.frame()
    rep = dual_wall_check(ch, chp, frame, [job.point] if job.point else [])
    out = {"C": rep.wall.C, "D": rep.wall.D, "radius_sq": rep.wall.radius_sq,
           "dual_C": rep.dual.C, "dual_D": rep.dual.D, "dual_radius_sq": rep.dual.radius_sq,
           "checks": rep.checks, "ok": rep.ok}
    if job.fmt == "json":
        return render.dumps(out)
    pairs = [(k, v) for k, v in out.items() if k != "checks"]
    pairs += [(f"check {k}", v) for k, v in rep.checks.items()]
    return render.key_values(pairs)


def run(command: str, job: JobSpec) -> str:
    if command == "walls":
        _check_format(job, ("text", "csv", "json", "svg"))
        return cmd_walls(job)
    if command == "k3-walls":
        _check_format(job, ("text", "csv", "json", "svg"))
        return cmd_walls(job, twisted=True)
    if command == "plot":
        return cmd_walls(job, plot=True)
    if command == "decompose":
        return cmd_decompose(job)
    if command == "nefcone":
        return cmd_nefcone(job)
    if command == "chamber":
        return cmd_chamber(job)
    if command == "dual-check":
        return cmd_dual_check(job)
    raise ValidationError(f"unknown command {command!r}")


_VALUE_FLAGS = ("--lambda", "--u", "--H", "--gamma", "--ch", "--chp", "--s", "--t")


def _join_negative_values(argv: list) -> list:
    # argparse takes "-5/2" for an option; glue such values to their flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        job = job_from_args(args)
        text = run(args.command, job)
    except InputError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateInput as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
