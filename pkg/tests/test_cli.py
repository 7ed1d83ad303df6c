"""End-to-end tests for the command-line interface.

Each test drives ``main`` with an argv list and inspects captured
stdout, so the full pipeline (parsing, gluing, peripheral structure,
development, filling) runs exactly as a shell user would see it.
"""

import json
import subprocess
import sys

import pytest

from dehn24.chains import euler_characteristic
from dehn24.cli import main
from dehn24.filling import adapted_slopes, is_homology_sphere


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_table_report(capsys):
    code, out, _ = run(capsys, "build")
    assert code == 0
    lines = out.splitlines()
    assert "census: 1011" in lines
    assert "cells: 24 84 96 36 1" in lines
    assert "chi: 1" in lines
    assert "orientable: no" in lines
    assert "H1: Z_2^6" in lines
    assert "H2: Z_2^4" in lines
    assert "H3: 0" in lines


def test_build_cover_jsonl(capsys):
    code, out, _ = run(capsys, "build", "--copies", "2", "--format", "jsonl")
    assert code == 0
    record = json.loads(out)
    assert record["cells"] == [48, 168, 192, 72, 2]
    assert record["chi"] == 2
    assert record["h"] == ["Z^5", "Z^10", "Z^4"]
    assert record["orientable"] is True
    assert record["pairings"] == 12
    assert record["metadata"]["census"] == "1011"


def test_cusps_report(capsys):
    code, out, _ = run(capsys, "cusps", "--copies", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5
    assert lines[0] == "cusp 1: cubes 4, cells 4 12 12 4, H1 Z^3, H2 Z^3, H3 Z"
    assert lines[4].startswith("cusp 5: cubes 32")


def test_peripheral_matches_library_report(capsys, census_m, census_system):
    from dehn24.peripheral import report
    code, out, _ = run(capsys, "peripheral")
    assert code == 0
    assert out == report(census_system)


def test_lattice_covolumes(capsys):
    code, out, _ = run(capsys, "lattice", "--format", "jsonl")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["covolume"] for r in records] == ["4", "4", "4", "4", "32"]
    assert [r["cusp"] for r in records] == [1, 2, 3, 4, 5]


def test_lattice_scale(capsys):
    code, out, _ = run(capsys, "lattice", "--scale", "1/2", "--format", "jsonl")
    assert code == 0
    first = json.loads(out.splitlines()[0])
    assert first["covolume"] == "1/2"
    assert first["scale"] == "1/2"


def test_fill_zero_tuple(capsys):
    code, out, _ = run(capsys, "fill", "0,0", "0,0", "0,0", "0,0", "0,0",
                       "--format", "jsonl")
    assert code == 0
    record = json.loads(out)
    assert record["h1"] == "0"
    assert record["sphere"] is True
    assert record["two_pi"] is False
    assert record["status"] == "ok"
    assert record["balanced"] is None
    assert [s["sq"] for s in record["lengths"]] == ["1", "1", "1", "1", "4"]


def test_fill_table_has_notes(capsys):
    code, out, _ = run(capsys, "fill", "1,2", "3,4", "5,6", "7,8", "9,10")
    assert code == 0
    assert "homology 4-sphere: yes" in out
    assert any(line.startswith("note: ") and "Poincare duality" in line
               for line in out.splitlines())


def test_enumerate_single_record(capsys):
    code, out, _ = run(capsys, "enumerate", "--box", "0:0", "--format", "jsonl")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == 1
    assert records[0]["tuple"] == [0] * 10
    assert records[0]["sphere"] is True


def test_enumerate_box_order_and_flags(capsys):
    box = "-1:1,-1:1,0:0,0:0,0:0,0:0,0:0,0:0,0:0,0:0"
    code, out, _ = run(capsys, "enumerate", "--box=" + box, "--format", "jsonl",
                       "--balance-c", "1/100")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == 9
    tuples = [tuple(r["tuple"]) for r in records]
    assert tuples == sorted(tuples)
    assert all(r["sphere"] is True for r in records)
    assert all(r["balanced"] in (True, False) for r in records)


def test_enumerate_sphere_flags_match_library(capsys, census_system, census_m):
    box = "0:1,0:0,0:0,0:1,0:0,0:0,0:0,0:0,0:0,0:0"
    code, out, _ = run(capsys, "enumerate", "--box", box, "--format", "jsonl")
    assert code == 0
    chi = euler_characteristic(census_m.chain)
    for record in map(json.loads, out.splitlines()):
        t = record["tuple"]
        pairs = [(t[2 * i], t[2 * i + 1]) for i in range(5)]
        slopes = adapted_slopes(census_system, pairs)
        redone = is_homology_sphere(census_system, slopes, chi, orientable=True)
        assert record["sphere"] == redone.is_homology_sphere
        assert record["h1"] == str(redone.h1)
        assert record["slopes"] == [list(v) for v in slopes.classes]


def test_enumerate_threads_do_not_change_output(capsys):
    box = "--box=-1:1,0:0,-1:1,0:0,0:0,0:0,0:0,0:0,0:0,0:0"
    _, single, _ = run(capsys, "enumerate", box, "--format", "jsonl")
    _, threaded, _ = run(capsys, "enumerate", box, "--format", "jsonl",
                         "--threads", "8")
    assert single == threaded


def test_enumerate_box_forms_agree(capsys):
    _, short_form, _ = run(capsys, "enumerate", "--box", "0:1")
    _, long_form, _ = run(capsys, "enumerate", "--box",
                          ",".join(["0:1"] * 10))
    assert short_form == long_form


def test_enumerate_table_header(capsys):
    code, out, _ = run(capsys, "enumerate", "--box", "0:0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["b1", "c1", "b2", "c2", "b3", "c3", "b4", "c4",
                                "b5", "c5", "H1", "sphere", "min_len", "2pi",
                                "balanced", "status"]
    assert len(lines) == 2


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("garbage\n")
    code, _, err = run(capsys, "build", "--pairing", str(bad))
    assert code == 2
    assert "line 1" in err
    code, _, _ = run(capsys, "build", "--pairing", str(tmp_path / "missing.txt"))
    assert code == 2
    code, _, err = run(capsys, "enumerate", "--box", "5:1")
    assert code == 2
    assert "empty" in err
    code, _, _ = run(capsys, "enumerate", "--box", "1:2,3:4")
    assert code == 2
    code, _, _ = run(capsys, "lattice", "--scale", "0")
    assert code == 2
    code, _, _ = run(capsys, "enumerate", "--balance-c", "-1")
    assert code == 2
    code, _, err = run(capsys, "fill", "1;2", "3,4", "5,6", "7,8", "9,10")
    assert code == 2
    assert "is not 'b,c'" in err


def test_contract_failures_exit_1(capsys):
    code, _, err = run(capsys, "peripheral", "--copies", "1")
    assert code == 1
    assert "double cover" in err
    code, _, err = run(capsys, "lattice", "--copies", "1")
    assert code == 1
    assert "not a torus" in err


def test_argparse_arity_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["fill", "1,2", "3,4"])
    assert excinfo.value.code == 2


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "dehn24.cli", "build", "--format", "jsonl"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["chi"] == 1
