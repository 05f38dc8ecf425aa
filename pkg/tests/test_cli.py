import subprocess
import sys

import pytest

from apnforge.cli import main
from apnforge.formats import format_perm
from apnforge.gf2n import make_field
from apnforge.permgrp import frobenius_perm, gold_generators


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(out: str) -> dict:
    return dict(line.split("=", 1) for line in out.splitlines())


def test_du_gold(capsys):
    code, out, _ = run(capsys, "fn", "du", "--builtin", "gold", "--r", "1", "--field", "gf2e4")
    assert code == 0
    assert "differential_uniformity=2 apn=true" in out
    # text mode tags the line
    assert "[" in out.splitlines()[-1]


def test_kv_mode_is_subset_of_text(capsys):
    argv = ["family", "report", "--k", "3", "--s", "1"]
    _, text, _ = run(capsys, *argv)
    code, out, _ = run(capsys, "--format", "kv", *argv)
    assert code == 0
    pairs = kv(out)
    assert pairs["apn"] == "true" and pairs["code_dim"] == "13"
    assert pairs["u_order"] == "1344" and pairs["delta_order"] == "9"
    assert pairs["c_independence"] == "true"
    assert pairs["gold_r1_verdict"] == "NOT_CCZ_EQUIVALENT"
    assert pairs["gold_r5_codes_equal"] == "false"
    for k, v in pairs.items():
        assert f"{k}={v}" in text


def test_family_bad_params(capsys):
    code, out, err = run(capsys, "family", "report", "--k", "3", "--s", "3")
    assert code == 2
    assert "gcd(k,s) != 1" in err
    assert len(err.strip().splitlines()) == 1 and out == ""


def test_aut_full_dillon(capsys):
    code, out, _ = run(capsys, "aut", "full", "--builtin", "dillon_h1", "--budget", "600")
    assert code == 0
    assert "aut_order=320" in out
    assert "primitive_u=0x2" in out


def test_timeout_exit_code(capsys):
    code, _, err = run(capsys, "--budget", "1", "aut", "full", "--builtin", "family", "--k", "5")
    assert code == 3
    assert "timeout" in err


def test_threads_do_not_change_results(capsys):
    outs = [run(capsys, "--format", "kv", "--threads", t, "fn", "du", "--builtin", "dillon_h2")[1]
            for t in ("1", "4")]
    assert outs[0] == outs[1]
    assert "differential_uniformity=2" in outs[0]


def test_fn_commands(capsys):
    _, out, _ = run(capsys, "--format", "kv", "fn", "eval", "--builtin", "gold", "--field", "gf2e4", "--x", "0x2")
    assert kv(out)["f"] == "0x8"
    _, out, _ = run(capsys, "--format", "kv", "fn", "degree", "--builtin", "family", "--k", "3")
    assert kv(out) == {"algebraic_degree": "2", "quadratic": "true"}
    _, out, _ = run(capsys, "--format", "kv", "fn", "apn", "--builtin", "gold", "--r", "2", "--field", "gf2e5")
    assert kv(out)["apn"] == "true"


def test_function_file_input(tmp_path, capsys):
    path = tmp_path / "x5.txt"
    path.write_text("# x^5\nfield gf2e4\nterm 0x1 5\n")
    code, out, _ = run(capsys, "--format", "kv", "fn", "du", str(path))
    assert code == 0 and kv(out)["differential_uniformity"] == "4"
    code, _, err = run(capsys, "fn", "du", str(tmp_path / "missing.txt"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("field gf2e4\nterm 3\n")
    assert run(capsys, "fn", "du", str(bad))[0] == 2


def test_code_commands(tmp_path, capsys):
    dump = tmp_path / "c.txt"
    code, _, _ = run(capsys, "code", "build", "--builtin", "family", "--k", "3", "-o", str(dump))
    assert code == 0 and dump.read_text().startswith("binarycode n=6 len=64 dim=13")
    _, out, _ = run(capsys, "--format", "kv", "code", "dim", str(dump))
    assert kv(out)["dimension"] == "13"
    _, out, _ = run(capsys, "--format", "kv", "code", "dualmin", "--builtin", "gold", "--field", "gf2e4")
    assert kv(out)["dual_min_distance"] == "6"
    _, out, _ = run(capsys, "--format", "kv", "code", "equal", str(dump), "--other", "family,k=3,c=0x9")
    assert kv(out)["codes_equal"] == "true"
    _, out, _ = run(capsys, "--format", "kv", "code", "equal", str(dump), "--other", "gold,r=1")
    assert kv(out)["codes_equal"] == "false"
    _, out, _ = run(capsys, "--format", "kv", "code", "witness", "--builtin", "family", "--k", "3",
                    "--other", "family,k=3,c=0x9")
    assert kv(out)["verified"] == "true"
    code, _, err = run(capsys, "code", "witness", "--builtin", "family", "--k", "3", "--other", "gold,r=1")
    assert code == 2 and "differ" in err
    _, out, _ = run(capsys, "--format", "kv", "code", "recover-function", "--builtin", "dillon_h2")
    assert kv(out)["code_fixed_point"] == "true"


def test_aut_commands(tmp_path, capsys):
    F = make_field(4)
    gens = tmp_path / "gens.txt"
    gens.write_text("\n".join(format_perm(g) for g in gold_generators(F)) + "\n")
    _, out, _ = run(capsys, "--format", "kv", "aut", "order", "--gens", str(gens))
    assert kv(out)["group_order"] == "960"
    _, out, _ = run(capsys, "--format", "kv", "aut", "order", "--gens", str(gens),
                    "--builtin", "gold", "--field", "gf2e4")
    assert kv(out)["non_automorphisms"] == "0"
    perm = tmp_path / "frob.txt"
    perm.write_text(format_perm(frobenius_perm(make_field(5), 1)) + "\n")
    _, out, _ = run(capsys, "--format", "kv", "aut", "verify", "--builtin", "gold", "--field", "gf2e5",
                    "--perm", str(perm))
    assert kv(out)["all_automorphisms"] == "true"
    _, out, _ = run(capsys, "--format", "kv", "aut", "verify", "--builtin", "family", "--k", "3")
    assert kv(out)["all_automorphisms"] == "true"
    _, out, _ = run(capsys, "--format", "kv", "aut", "regular-subgroups", "--builtin", "gold", "--field", "gf2e4")
    assert kv(out)["regular_elem_abelian"] == "1"
    assert kv(out)["translations_among_them"] == "true"
    _, out, _ = run(capsys, "--format", "kv", "aut", "conjugate", "--builtin", "dillon_h1")
    assert kv(out)["pairwise_conjugate"] == "true"


def test_family_gold_compare_and_field_info(capsys):
    _, out, _ = run(capsys, "family", "gold-compare", "--k", "3", "--s", "5", "--r", "5")
    assert "gold_r5_verdict=NOT_CCZ_EQUIVALENT" in out
    assert "because" in out
    code, out, _ = run(capsys, "--format", "kv", "field", "info", "--field", "gf2e6")
    assert code == 0 and kv(out)["designation"] == "gf2e6:0x5b"
    assert run(capsys, "field", "info", "--field", "gf2e6:0x55")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["fn", "du"],
        ["fn", "du", "--builtin", "gold"],
        ["fn", "du", "--builtin", "dillon_h1", "--field", "gf2e5"],
        ["fn", "du", "--builtin", "kasami", "--field", "gf2e5"],
        ["family", "report"],
        ["code", "equal", "--builtin", "gold", "--field", "gf2e4"],
    ],
)
def test_user_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["--threads", "0", "fn", "du"])
    assert e.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "apnforge", "fn", "du", "--builtin", "gold", "--r", "1", "--field", "gf2e4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "differential_uniformity=2 apn=true" in proc.stdout
