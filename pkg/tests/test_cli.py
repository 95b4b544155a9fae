import io
import pathlib
import subprocess
import sys

from ntg import run_cli

DATA = pathlib.Path(__file__).parent / "data"
SRC = pathlib.Path(__file__).parent.parent / "src"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def path(name):
    return str(DATA / name)


def test_validate_ok():
    code, out, err = run("validate", path("n.rgs"))
    assert code == 0 and out.strip() == "ok"


def test_validate_reports_violations(tmp_path):
    doc = tmp_path / "bad.rgs"
    doc.write_text("atomic c/0;\ndef r/0 { a: out(b); b: out(k); k: c; }\n")
    code, out, err = run("validate", str(doc))
    assert code == 1 and "output" in err


def test_validate_parse_error(tmp_path):
    doc = tmp_path / "bad.rgs"
    doc.write_text("atomic c/0;\ndef r/0 { a: out(b) }\n")
    code, out, err = run("validate", str(doc))
    assert code == 2


def test_deps_output():
    code, out, err = run("deps", path("r0.rgs"))
    assert code == 0
    assert out.count("s0 -> f2") == 2
    assert "s0 -> g" in out


def test_is_ntg_accepts():
    code, out, err = run("is-ntg", path("n.rgs"))
    assert code == 0 and out.strip() == "yes"


def test_is_ntg_rejects_shared_with_witness():
    code, out, err = run("is-ntg", path("r0.rgs"))
    assert code == 1 and out.strip() == "no"
    assert "f2" in err and "twice" in err


def test_is_ntg_rejects_cycle():
    code, out, err = run("is-ntg", path("r1.rgs"))
    assert code == 1 and "cycle" in err


def test_unfold_requires_depth_for_cycles():
    code, out, err = run("unfold", path("r1.rgs"))
    assert code == 2 and "--depth" in err


def test_unfold_with_depth(tmp_path):
    out_file = tmp_path / "u.rgs"
    code, out, err = run("unfold", path("r1.rgs"), "--depth", "3", "-o", str(out_file))
    assert code == 0 and "truncated" in err
    assert "def g@3/1" in out_file.read_text()


def test_sntg_listing():
    code, out, err = run("sntg", path("triv.rgs"))
    assert code == 0
    assert "call->" in out and "anc=" in out


def test_interpret_and_represent_roundtrip(tmp_path):
    fo_file = tmp_path / "n.fo"
    code, out, err = run("interpret", path("n.rgs"), "-o", str(fo_file))
    assert code == 0
    text = fo_file.read_text()
    assert text.startswith("tg {") and text.count("in_r") == 6
    code, out, err = run("represent", str(fo_file))
    assert code == 0 and "def " in out


def test_represent_rejects_non_member(tmp_path):
    doc = tmp_path / "bad.fo"
    doc.write_text("tg { root a; a: out_r(b); b: c(d); d: in_r(d2); d2: c(d); }\n")
    code, out, err = run("represent", str(doc))
    assert code == 1 and "not a representing graph" in err


def test_collapse_most_duplicated(tmp_path):
    out_file = tmp_path / "c.rgs"
    code, out, err = run("collapse", path("chain_d.rgs"), "-o", str(out_file))
    assert code == 0
    assert out_file.read_text().count("def ") == 2


def test_bisim_nested_positive():
    code, out, err = run("bisim", path("n.rgs"), path("n.rgs"))
    assert code == 0 and out.strip() == "bisimilar"


def test_bisim_both_methods_agree():
    code, out, err = run("bisim", path("chain_a.rgs"), path("chain_d.rgs"), "--method", "both")
    assert code == 0 and out.strip() == "bisimilar"


def test_bisim_negative(tmp_path):
    doc = tmp_path / "other.rgs"
    doc.write_text("atomic c/0, d/0;\ndef r/0 { a: out(b); b: d; }\n")
    code, out, err = run("bisim", path("triv.rgs"), str(doc))
    assert code == 1 and out.strip() == "not-bisimilar"
    assert "counterexample" in err


def test_bisim_unfolds_shared_input():
    code, out, err = run("bisim", path("r0.rgs"), path("r0.rgs"), "--method", "both")
    assert code == 0


def test_bisim_cyclic_without_depth():
    code, out, err = run("bisim", path("r1.rgs"), path("r1.rgs"))
    assert code == 2


def test_hom_levels():
    for level in ("ntg", "sntg", "fo"):
        code, out, err = run("hom", path("chain_d.rgs"), path("chain_c.rgs"), "--level", level)
        assert code == 0 and "->" in out, level
        code, out, err = run("hom", path("chain_c.rgs"), path("chain_d.rgs"), "--level", level)
        assert code == 1 and "no homomorphism" in err, level


def test_roundtrip_command():
    for name in ("n.rgs", "triv.rgs", "r0.rgs", "chain_b.rgs"):
        code, out, err = run("roundtrip", path(name))
        assert code == 0 and "roundtrip ok" in out, name


def test_dot_sniffs_input_kind(tmp_path):
    code, out, err = run("dot", path("n.rgs"))
    assert code == 0 and out.startswith("digraph")
    fo_file = tmp_path / "n.fo"
    run("interpret", path("n.rgs"), "-o", str(fo_file))
    code, out, err = run("dot", str(fo_file))
    assert code == 0 and "dotted" in out


def test_missing_file_is_usage_error():
    code, out, err = run("is-ntg", "/nonexistent/file.rgs")
    assert code == 2


def test_unknown_subcommand_is_usage_error():
    code, out, err = run("frobnicate")
    assert code == 2


def test_dot_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "ntg", "dot", path("n.rgs")]
    env = {"PYTHONPATH": str(SRC), "PATH": "/usr/bin:/bin"}
    runs = [
        subprocess.run(cmd, capture_output=True, env=dict(env, PYTHONHASHSEED=str(seed)))
        for seed in (1, 2)
    ]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.startswith(b"digraph")
