import io
import subprocess
import sys

import pytest

from coxdeform.cli import run


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(map(str, argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def test_census_small():
    code, out, _ = cli("census", "--max-facets", 5)
    assert code == 0
    assert out.splitlines() == ["f orderable total ratio", "4 64 64 1.000000", "5 654 768 0.851563"]


def test_census_machine_mode_independent_of_workers():
    a = cli("--machine", "census", "--max-facets", 5, "--workers", 1)[1]
    b = cli("--machine", "census", "--max-facets", 5, "--workers", 2)[1]
    assert a == b and a.splitlines()[1] == "census\t5\t654\t768\t0.851563"


def test_enumerate_writes_catalog(tmp_path):
    code, out, _ = cli("enumerate", "--facets", 5, "--out", tmp_path)
    assert code == 0 and out.splitlines()[-1] == "2 polytopes, 768 binary labelings"
    assert len(list(tmp_path.glob("*.poly"))) == 2


def test_dims(data_dir):
    assert cli("dims", data_dir / "ex71.poly")[1].strip() == "dim C(G)=2 dim RS=1 dim restricted=1"
    out = cli("dims", data_dir / "tetrahedron-all2.poly")[1]
    assert out.startswith("dim C(G)=-3") and "empty-dimension" in out


def test_orderable(data_dir):
    code, out, _ = cli("orderable", data_dir / "cube-all3.poly")
    assert (code, out.strip()) == (0, "NOT ORDERABLE")
    code, out, _ = cli("orderable", data_dir / "ex71.poly")
    assert code == 0 and out.startswith("ORDERABLE order: ")


def test_normal_type_and_classify(data_dir):
    assert cli("normal-type", data_dir / "prism-all2.poly")[1].strip() == "NotNormal(prism-all-2)"
    assert cli("normal-type", data_dir / "ex71.poly")[1].strip() == "Normal"
    lines = cli("classify", data_dir / "tetrahedron-all2.poly")[1].splitlines()
    assert lines == [f"{{{i}}} Spherical" for i in range(1, 5)]
    assert cli("--machine", "classify", data_dir / "ex71.poly")[1].strip() == "component\t1,2,3,4,5,6\tLarge"


def test_vinberg_check(data_dir):
    code, out, _ = cli("vinberg-check", data_dir / "ex71.poly", data_dir / "ex71-system.txt")
    assert code == 0
    assert out.splitlines() == [f"V{i} PASS" for i in range(1, 7)] + ["overall PASS"]


def test_vinberg_check_size_mismatch(data_dir):
    code, _, err = cli("vinberg-check", data_dir / "tetrahedron-all2.poly", data_dir / "ex71-system.txt")
    assert code == 1 and "facets" in err


def test_fiber_output():
    code, out, _ = cli("fiber", "--example", "7.1")
    assert code == 0
    assert "w_4 = (0, -2/(d), 1/(x), 2)" in out
    assert "parameters: d; free: x" in out
    machine = cli("--machine", "fiber", "--example", "7.2")[1]
    assert machine.splitlines()[0] == "parameters\td1 d2 d3\tfree\tt"


def test_scan_first_example():
    code, out, _ = cli("scan", "--example", "7.1", "--range", "1:2", "--steps", 12)
    assert code == 0
    assert "transition d = 1.333333 (1 -> 0)" in out


def test_scan_second_example_machine():
    code, out, _ = cli("--machine", "scan", "--example", "7.2", "--path", "s", "--range", "3/2:8/5", "--steps", 10)
    assert code == 0
    trans = [line.split("\t") for line in out.splitlines() if line.startswith("transition")]
    assert [t[2:] for t in trans] == [["0", "1"], ["1", "2"]]
    assert float(trans[0][1]) == pytest.approx(1.546604, abs=1e-6)
    assert float(trans[1][1]) == pytest.approx(1.568313, abs=1e-6)


def test_scan_grid_mode_runs():
    code, out, _ = cli("scan", "--example", "7.2", "--range", "3/2:8/5", "--steps", 4, "--grid", "--resolution", 200)
    assert code == 0 and "grid resolution 200" in out


@pytest.mark.parametrize("argv", [
    ("census", "--max-facets", 9),
    ("scan", "--example", "7.1", "--range", "2:1"),
    ("scan", "--example", "7.1", "--path", "s", "--range", "1:2"),
    ("scan", "--example", "7.3", "--range", "1:2"),
    ("dims", "/nonexistent.poly"),
    ("bogus",),
    (),
])
def test_usage_errors_exit_one(argv):
    code, _, err = cli(*argv)
    assert code == 1 and err.startswith("coxdeform: error")


def test_bad_input_file_exit_one(tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text("polytope x\nfacets 4\nedge 1 2\n")
    code, _, err = cli("dims", bad)
    assert code == 1 and "line 3" in err
    binary = tmp_path / "bin.poly"
    binary.write_bytes(b"\xff\xfe")
    assert cli("orderable", binary)[0] == 1


def test_internal_error_exit_two(monkeypatch, data_dir):
    from coxdeform import cli as mod

    def boom(*_):
        raise AssertionError("invariant broken")

    monkeypatch.setitem(mod.COMMANDS, "dims", boom)
    code, _, err = cli("dims", data_dir / "ex71.poly")
    assert code == 2 and "internal error" in err


def test_console_entry_point(data_dir):
    out = subprocess.run([sys.executable, "-m", "coxdeform.cli", "dims", str(data_dir / "ex72.poly")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "dim C(G)=4 dim RS=3 dim restricted=1"
