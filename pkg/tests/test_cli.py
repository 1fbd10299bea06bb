import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from kcalc.cli import parse_inputs, run_command
from kcalc.datafiles import data_dir
from kcalc.errors import DataError

DATA = Path(__file__).parent / "data"
B13 = str(data_dir() / "b13_cohomology.json")


def run(*argv):
    buf = io.StringIO()
    code = run_command(list(argv), buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, out = run("--json", *argv)
    return code, json.loads(out)


def test_spheres_check_33():
    code, out = run("spheres", "check", "3", "3")
    assert code == 0
    assert "reduced KO trivial; alpha_O surjective" in out
    assert out.rstrip().endswith("mismatches: 0")


def test_spheres_undetermined_is_not_a_mismatch():
    code, data = run_json("spheres", "check", "2", "6")
    assert code == 0 and data["data"]["table"]["verdict"] == "undetermined"


def test_flag_enumerate_singletons():
    code, data = run_json("flag", "enumerate", "--max-factors", "1")
    assert code == 0
    got = {p[0] for p in data["data"]["products"]}
    assert got == {"SU(2)", "SU(3)", "SU(4)", "SU(5)", "SU(7)", "Spin(7)", "G2"}


def test_flag_check():
    code, data = run_json("flag", "check", "SU(3)", "G2")
    assert code == 0 and data["data"]["verdict"]["verdict"] == "surjective"
    code, data = run_json("flag", "check", "SU(2)", "SU(2)", "SU(2)", "SU(2)")
    assert data["data"]["verdict"]["verdict"] == "not_surjective"


def test_flag_check_unknown_group():
    code, out = run("flag", "check", "SU(1)")
    assert code == 2


def test_dim7_table():
    code, data = run_json("dim7", "table")
    assert code == 0 and data["mismatches"] == []
    assert data["data"]["Wu"]["verdict"] == "not_surjective"


def test_tate_compute():
    code, data = run_json("tate", "compute", str(DATA / "k_s2.json"))
    assert code == 0
    assert data["data"]["h_plus"] == {"free_rank": 0, "torsion": [2]}
    assert data["data"]["h_minus"] == {"free_rank": 0, "torsion": [2]}
    code, data = run_json("tate", "compute", str(DATA / "k_cp2.json"))
    assert data["data"]["h_minus"] == {"free_rank": 0, "torsion": []}


def test_quotient_run():
    code, data = run_json("quotient", "run", str(DATA / "z3_rep_ring.json"))
    assert code == 0 and data["data"]["group"] == {"free_rank": 3, "torsion": []}
    code, data = run_json("quotient", "run", str(DATA / "k_b13_presentation.json"))
    assert data["data"]["group"] == {"free_rank": 3, "torsion": [5, 5]}
    assert data["data"]["remaining_variables"] == ["u", "y"]


def test_ahss_pages():
    code, data = run_json("ahss", "pages", B13, "--theory", "KO")
    assert code == 0
    assert len(data["data"]["vanished"]) == 12
    assert sorted(map(tuple, data["data"]["index"])) == [(2, -8, 2), (2, 0, 2), (11, -8, 2), (11, 0, 2)]
    code, out = run("ahss", "pages", B13, "--theory", "K", "--rows", "2")
    assert code == 0 and "Z_5" in out


def test_berger_run():
    code, out = run("berger", "run")
    assert code == 0
    assert "image of alpha_O has index 2 in KO(B^13)" in out
    assert out.rstrip().endswith("mismatches: 0")


def test_reports_deterministic():
    a = run("--json", "berger", "run", "--window", "8", "--seed", "3")
    b = run("--json", "berger", "run", "--window", "8", "--seed", "3")
    assert a == b and a[0] == 0


def test_berger_window_too_small(capsys):
    assert run("berger", "run", "--window", "6")[0] == 2
    assert "outside the window 6" in capsys.readouterr().err


def test_errors_exit_2(capsys):
    assert run("ahss", "pages", str(DATA / "wu.json"))[0] == 2
    assert "Sq^2" in capsys.readouterr().err
    assert run("tate", "compute", str(DATA / "empty.json"))[0] == 2
    assert "empty file" in capsys.readouterr().err
    assert run("quotient", "run", str(DATA / "missing.json"))[0] == 2


def test_schema_error_names_field(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": {"free_rank": -1, "torsion": []}, "t": [], "schema_version": 1}))
    with pytest.raises(DataError) as e:
        parse_inputs(bad, "involutive_module")
    assert "free_rank" in str(e.value)


def test_invariant_error_names_invariant(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": {"free_rank": 2, "torsion": []}, "t": [[1, 1], [0, 1]],
                               "schema_version": 1}))
    with pytest.raises(DataError) as e:
        parse_inputs(bad, "involutive_module")
    assert "involution" in str(e.value)


def test_group_data_input():
    from kcalc.charring import circle, product, sp
    g = parse_inputs(DATA / "b13_isotropy.json", "group_data")
    h = product(sp(2), circle("x"))
    assert g.ring_generators == h.ring_generators and g.type_table == h.type_table


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as e:
        run("nonsense")
    assert e.value.code == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "kcalc.cli", "spheres", "check", "7", "7", "7"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "mismatches: 0" in r.stdout


def test_flag_check_from_group_data(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"schema_version": 1, "factors": ["SU(3)", "Spin(7)"]}))
    code, from_file = run_json("flag", "check", "--group-data", str(p))
    _, from_catalog = run_json("flag", "check", "SU(3)", "Spin(7)")
    assert code == 0
    assert from_file["data"]["counts"] == from_catalog["data"]["counts"] == [2, 3, 0]
    assert from_file["data"]["verdict"] == from_catalog["data"]["verdict"]


def test_flag_check_group_data_rejects_circle():
    code, _ = run("flag", "check", "--group-data", str(DATA / "b13_isotropy.json"))
    assert code == 2
    assert run("flag", "check")[0] == 2
