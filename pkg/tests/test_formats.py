import random

import pytest

from ntg import (
    ParseError,
    ValidationError,
    export_dot,
    interpret,
    ntg_isomorphic,
    ntg_to_sntg,
    parse_fo,
    parse_rgs,
    print_fo,
    print_rgs,
    tg_isomorphic,
    unfold_to_ntg,
)
from ntg.firstorder import PrimedConst
from dotcheck import check_dot
from generators import random_acyclic_rgs, random_ntg


def test_parse_trivial_document(fix_triv):
    r = parse_rgs("atomic c/0;\ndef r/0 { a: out(b); b: c; }\n")
    assert ntg_isomorphic(r, fix_triv) is not None


def test_parse_resolves_root_default():
    r = parse_rgs("atomic c/0;\ndef f/1 { a: out(b); b: in 1; }\ndef r/0 { a: out(b); b: f(k); k: c; }\n")
    assert r.root_symbol == "r"  # first nullary definition


def test_parse_rejects_two_outputs():
    with pytest.raises(ValidationError) as exc:
        parse_rgs("atomic c/0;\ndef r/0 { a: out(b); b: out(k); k: c; }\n")
    assert any("output" in str(v) for v in exc.value.violations)


def test_parse_rejects_unknown_symbol():
    with pytest.raises(ParseError):
        parse_rgs("atomic c/0;\ndef r/0 { a: out(b); b: mystery; }\n")


def test_parse_rejects_bad_arity():
    with pytest.raises(ParseError):
        parse_rgs("atomic c/0;\ndef r/0 { a: out(b); b: c(a); }\n")


def test_parse_rejects_missing_input_index():
    with pytest.raises(ParseError):
        parse_rgs("atomic c/0;\ndef f/1 { a: out(b); b: in; }\ndef r/0 { a: out(b); b: f(k); k: c; }\n")


def test_parse_reports_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_rgs("atomic c/0;\ndef r/0 {\n a: out(b);\n b: ?;\n}\n")
    assert exc.value.line == 4


def test_print_is_deterministic_and_stable(fix_n):
    text1 = print_rgs(fix_n)
    text2 = print_rgs(parse_rgs(text1))
    assert text1 == text2


def test_roundtrip_corpus(fix_n, fix_triv, fix_r0, fix_r1, sharing_chain):
    for r in [fix_n, fix_triv, fix_r0, fix_r1] + sharing_chain:
        assert print_rgs(parse_rgs(print_rgs(r))) == print_rgs(r)


def test_roundtrip_random():
    rng = random.Random(83)
    for _ in range(40):
        r = random_ntg(rng) if rng.random() < 0.5 else random_acyclic_rgs(rng)
        assert print_rgs(parse_rgs(print_rgs(r))) == print_rgs(r)


def test_print_unfolded_document(fix_r0):
    doc = print_rgs(unfold_to_ntg(fix_r0).rgs)
    assert doc.count("def ") == 4
    assert print_rgs(parse_rgs(doc)) == doc


def test_roundtrip_without_atomic_symbols():
    from ntg import Input, Nested, NtgSignature, Output, Rgs, make_graph

    sig = NtgSignature({}, {"r": 0, "f": 1}, "r")
    n = Rgs(sig, {
        "r": make_graph("o", {"o": (Output(), ["fo"]), "fo": (Nested("f", 1), ["fo"])}),
        "f": make_graph("o", {"o": (Output(), ["x"]), "x": (Input(1), [])}),
    })
    doc = print_rgs(n)
    assert doc.startswith("atomic ;")
    assert print_rgs(parse_rgs(doc)) == doc


def test_parse_fo_trivial(fix_triv):
    g = parse_fo("tg { root a; a: out_r(b); b: c(d); d: in_r(a); }")
    assert tg_isomorphic(g, interpret(fix_triv)) is not None
    # the constant is recognized despite being written unprimed
    assert any(isinstance(g.lab[v], PrimedConst) for v in g.lab)


def test_parse_fo_rejects_unary_exit_vertex():
    with pytest.raises(ParseError):
        parse_fo("tg { root a; a: out_r(b); b: in(a); }")


def test_parse_fo_rejects_indexed_input():
    with pytest.raises(ParseError):
        parse_fo("tg { root a; a: out_r(b); b: in 1; }")


def test_fo_roundtrip_corpus(tree_corpus):
    for n in tree_corpus:
        doc = print_fo(interpret(n))
        assert print_fo(parse_fo(doc)) == doc


def test_fo_roundtrip_random():
    rng = random.Random(89)
    for _ in range(30):
        doc = print_fo(interpret(random_ntg(rng)))
        assert print_fo(parse_fo(doc)) == doc


def test_dot_trivial_counts(fix_triv):
    dot = export_dot(fix_triv)
    assert check_dot(dot) == []
    solid = [ln for ln in dot.splitlines() if "->" in ln and "style" not in ln]
    dashed = [ln for ln in dot.splitlines() if "->" in ln and "dashed" in ln]
    assert dot.count("subgraph cluster_") == 1
    assert len(solid) == 2  # entry arrow plus the one body edge
    assert len(dashed) == 1


def test_dot_running_example_counts(fix_n):
    dot = export_dot(fix_n)
    assert check_dot(dot) == []
    assert dot.count("subgraph cluster_") == 4
    dashed = [ln for ln in dot.splitlines() if "dashed" in ln]
    assert len(dashed) == 4 + 3  # call links plus return links


def test_dot_firstorder_backlinks(fix_n):
    dot = export_dot(interpret(fix_n))
    assert check_dot(dot) == []
    dotted = [ln for ln in dot.splitlines() if "dotted" in ln]
    assert len(dotted) == 13  # seven exit back-links, six root links


def test_dot_sntg(fix_n):
    dot = export_dot(ntg_to_sntg(fix_n))
    assert check_dot(dot) == []
    assert dot.count("subgraph cluster_") == 4


def test_dot_byte_stable(fix_n):
    assert export_dot(fix_n) == export_dot(parse_rgs(print_rgs(fix_n)))
