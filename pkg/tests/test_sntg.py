import random

import pytest

from ntg import (
    Sntg,
    TermGraph,
    check_sntg,
    ntg_isomorphic,
    ntg_to_sntg,
    sntg_bisimilar,
    sntg_hom,
    sntg_to_ntg,
    verify_sntg_hom,
)
from generators import random_ntg
from oracles import brute_force_sntg_hom


def test_conversion_counts_for_running_example(fix_n):
    s = ntg_to_sntg(fix_n)
    # counted from the structural figure: bodies of 8+6+10+3 vertices plus
    # the root occurrence; call links from the root and the three
    # occurrences; return links from the three input vertices
    assert len(s.tg) == 28
    assert len(s.call) == 4
    assert len(s.ret) == 3
    assert check_sntg(s) == []


def test_conversion_counts_trivial(fix_triv):
    s = ntg_to_sntg(fix_triv)
    assert len(s.tg) == 3 and len(s.call) == 1 and len(s.ret) == 0


def test_conversion_counts_unfolded_shared(fix_r0):
    from ntg import unfold_to_ntg

    s = ntg_to_sntg(unfold_to_ntg(fix_r0).rgs)
    assert len(s.tg) == 1 + 8 + 2 * 10 + 3
    assert len(s.call) == 4


def _mutate(s: Sntg, **overrides) -> Sntg:
    parts = {
        "tg": s.tg,
        "call": dict(s.call),
        "ret": dict(s.ret),
        "anc": dict(s.anc),
    }
    parts.update(overrides)
    return Sntg(**parts)


def test_fault_injection_shortened_ancestor(fix_n):
    s = ntg_to_sntg(fix_n)
    victim = next(v for v in sorted(s.anc, key=str) if len(s.anc[v]) >= 2)
    anc = dict(s.anc)
    anc[victim] = anc[victim][:-1]
    broken = _mutate(s, anc=anc)
    conditions = {v.condition for v in check_sntg(broken)}
    assert conditions & {"arguments", "step-into", "nested"}


def test_fault_injection_dropped_return(fix_n):
    s = ntg_to_sntg(fix_n)
    victim = sorted(s.ret, key=str)[0]
    ret = dict(s.ret)
    del ret[victim]
    broken = _mutate(s, ret=ret)
    assert any(v.condition == "defined" for v in check_sntg(broken))


def test_fault_injection_wrong_return_target(fix_n):
    s = ntg_to_sntg(fix_n)
    victim = sorted(s.ret, key=str)[0]
    ret = dict(s.ret)
    ret[victim] = s.tg.root
    broken = _mutate(s, ret=ret)
    assert any(v.condition == "step-out" for v in check_sntg(broken))


def test_check_rejects_disconnected_body_junk(fix_triv):
    s = ntg_to_sntg(fix_triv)
    lab = dict(s.tg.lab)
    args = dict(s.tg.args)
    from ntg import Atomic

    lab["junk"] = Atomic("c", 0)
    args["junk"] = ()
    anc = dict(s.anc)
    anc["junk"] = anc[s.call[s.tg.root]]
    broken = Sntg(TermGraph(lab, args, s.tg.root), s.call, s.ret, anc)
    assert any(v.condition == "body-connected" for v in check_sntg(broken))


def test_roundtrip_on_corpus(tree_corpus):
    for n in tree_corpus:
        s = ntg_to_sntg(n)
        assert check_sntg(s) == []
        back = sntg_to_ntg(s)
        assert ntg_isomorphic(n, back) is not None


def test_roundtrip_on_random(tree_corpus):
    rng = random.Random(41)
    for _ in range(30):
        n = random_ntg(rng)
        back = sntg_to_ntg(ntg_to_sntg(n))
        assert ntg_isomorphic(n, back) is not None


def test_sntg_to_ntg_rejects_broken_input(fix_n):
    s = ntg_to_sntg(fix_n)
    anc = dict(s.anc)
    victim = next(v for v in sorted(s.anc, key=str) if len(s.anc[v]) >= 2)
    anc[victim] = anc[victim][:-1]
    with pytest.raises(ValueError):
        sntg_to_ntg(_mutate(s, anc=anc))


def test_hom_identity(fix_n):
    s = ntg_to_sntg(fix_n)
    assert sntg_hom(s, s) == {v: v for v in s.tg.lab}


def test_hom_along_sharing_chain(sharing_chain):
    a, b, c, d = sharing_chain
    structures = [ntg_to_sntg(x) for x in (a, b, c, d)]
    for hi, lo in [(3, 2), (2, 1), (1, 0)]:
        phi = sntg_hom(structures[hi], structures[lo])
        assert phi is not None
        assert verify_sntg_hom(structures[hi], structures[lo], phi) == []
        assert sntg_hom(structures[lo], structures[hi]) is None


def test_hom_agrees_with_brute_force_on_chain(sharing_chain):
    structures = [ntg_to_sntg(x) for x in sharing_chain]
    for i in range(4):
        for j in range(4):
            ours = sntg_hom(structures[i], structures[j])
            oracle = brute_force_sntg_hom(structures[i], structures[j])
            assert (ours is None) == (oracle is None), (i, j)


def test_bisimilar_diagonal(fix_n):
    s = ntg_to_sntg(fix_n)
    witness = sntg_bisimilar(s, s)
    assert witness is not None
    assert len(witness.tg) == len(s.tg)


def test_bisimilar_chain_members(sharing_chain):
    structures = [ntg_to_sntg(x) for x in sharing_chain]
    for i in range(4):
        for j in range(4):
            assert sntg_bisimilar(structures[i], structures[j]) is not None


def test_bisimilar_distinguishes_constants(fix_triv):
    from ntg import Atomic, NtgSignature, Rgs, make_graph, Output

    other = Rgs(
        NtgSignature({"c": 0, "d": 0}, {"r": 0}, "r"),
        {"r": make_graph("a", {"a": (Output(), ["b"]), "b": (Atomic("d", 0), [])})},
    )
    s1 = ntg_to_sntg(fix_triv)
    s2 = ntg_to_sntg(other)
    assert sntg_bisimilar(s1, s2) is None
