from fractions import Fraction
import csv
import io
import json
import xml.etree.ElementTree as ET

import pytest

from bmwalls.cli import main, run
from bmwalls.config import parse_job, parse_rational
from bmwalls.errors import ParseError, ValidationError
from bmwalls.lattice import projective_plane

Q = Fraction


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_minimal_p2_job():
    job = parse_job("[surface]\npreset = p2\n[character]\nch = 1, 0, -2/1\n")
    assert job.preset == "p2"
    assert job.surface == projective_plane()
    assert job.ch == projective_plane().ch(1, 0, -2)
    assert job.fmt == "text"


def test_non_orthogonal_frame_is_rejected_at_parse_time():
    text = "[surface]\npreset = hirzebruch\ne = 1\n[frame]\nH = 1, 2\ngamma = 0, 1\n"
    with pytest.raises(ValidationError, match="Hodge orthogonality"):
        parse_job(text)


def test_float_literal_rejected_with_position():
    text = "[character]\nch = 1, 0.5, -2\n"
    with pytest.raises(ParseError, match="1/2") as info:
        parse_job(text)
    assert info.value.line == 2
    assert info.value.column == 9
    with pytest.raises(ParseError, match="3/4"):
        parse_rational("0.75")


@pytest.mark.parametrize("text,needle", [
    ("[nowhere]\n", "unknown section"),
    ("[surface]\ncolour = red\n", "unknown key"),
    ("ch = 1, 0, -2\n", "outside"),
    ("[character]\nch = 1, 0\n", "3 entries"),
    ("[character]\nch = 1, 0, 1/0\n", "zero denominator"),
    ("[output]\nformat = pdf\n", "unknown format"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        parse_job(text)


def test_exit_codes(capsys):
    assert cli(capsys, "walls", "--ch", "1,0,-2", "--max-rank", "1", "--c1-bound", "3")[0] == 0
    code, _, err = cli(capsys, "walls", "--ch", "1,0.5,-2")
    assert code == 2 and err.startswith("ParseError") and "1/2" in err
    code, _, err = cli(capsys, "dual-check", "--ch", "1,0,-2", "--chp", "2,0,1")
    assert code == 3 and err.startswith("DegenerateWall")
    code, _, err = cli(capsys, "nefcone", "--preset", "hirzebruch", "-e", "1", "-n", "1")
    assert code == 2 and err.startswith("OutOfRange")


def test_negative_values_after_flags(capsys):
    code, out, _ = cli(capsys, "chamber", "--ch", "1,0,-2", "--s", "-5/2", "--t", "3")
    assert code == 0 and "GC" in out


def test_walls_on_p2_single_row(capsys):
    code, out, _ = cli(capsys, "walls", "--preset", "p2", "--ch", "1,0,-2", "--max-rank", "1",
                       "--c1-bound", "3", "--out", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "#schema=walls/1"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert list(rows[0]) == ["C", "D", "radius_sq", "ch0'", "c1", "c2", "chi'", "divisor_expr", "model"]
    assert len(rows) == 1
    r = rows[0]
    assert (r["C"], r["radius_sq"], r["divisor_expr"]) == ("-5/2", "9/4", "H~ - B0")


def test_json_mirrors_csv(capsys):
    args = ("walls", "--ch", "1,0,-3", "--max-rank", "2")
    _, out_json, _ = cli(capsys, *args, "--out", "json")
    _, out_csv, _ = cli(capsys, *args, "--out", "csv")
    doc = json.loads(out_json)
    rows = list(csv.DictReader(io.StringIO(out_csv.split("\n", 1)[1])))
    assert doc["walls"] == rows
    assert doc["schema"] == "walls/1"


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_byte_determinism(capsys, fmt):
    args = ("walls", "--preset", "hirzebruch", "-e", "1", "--H", "1,2", "--gamma", "1,-1",
            "--u", "1/2", "--ch", "1,0,0,-2", "--out", fmt)
    first = cli(capsys, *args)[1]
    second = cli(capsys, *args)[1]
    assert first == second and first
    job_text = "[surface]\npreset = p2\n[character]\nch = 1, 0, -3\n[output]\nformat = %s\n" % fmt
    assert run("walls", parse_job(job_text)) == run("walls", parse_job(job_text))


def test_nefcone_command(capsys):
    code, out, _ = cli(capsys, "nefcone", "--preset", "hirzebruch", "-e", "2", "-n", "2")
    assert code == 0
    gens = out.split("generators:\n")[1].split("certificate:")[0].split("\n")
    gens = [g.strip() for g in gens if g.strip()]
    assert gens == ["(E+2F)~", "F~", "(E+2F)~ + F~ - 1/2*B"]
    assert "center: -7/2" in out


def test_plot_of_trivial_chamber(capsys):
    code, out, _ = cli(capsys, "plot", "--ch", "0,0,3")
    assert code == 0
    assert "trivial chamber" in out
    root = ET.fromstring(out.split("?>", 1)[-1])
    assert root.tag.endswith("svg")


def test_plot_header_and_pivot(capsys):
    code, out, _ = cli(capsys, "plot", "--ch", "1,0,-3", "--max-rank", "2")
    assert code == 0
    header = out.split("<svg", 1)[0]
    assert "precision" in header and "6 places" in header
    root = ET.fromstring(out.split("?>", 1)[-1])
    ns = "{http://www.w3.org/2000/svg}"
    assert root.findall(f".//{ns}path") or root.findall(f".//{ns}circle")
    assert "pivot" in out


def test_config_file_round_trip(tmp_path, capsys):
    cfg = tmp_path / "job.ini"
    cfg.write_text("[surface]\npreset = p2\n[character]\nch = 1, 0, -2\n"
                   "[search]\nmax_rank = 1\nc1_bound = 3\n[output]\nformat = csv\n")
    code, out, _ = cli(capsys, "walls", "--config", str(cfg))
    assert code == 0 and out.count("\n") == 3
    code, _, err = cli(capsys, "walls", "--config", str(tmp_path / "missing.ini"))
    assert code == 2
