"""Structural representations: all definition bodies glued into one graph.

The bodies of a tree-shaped specification are combined into a single
(non-root-connected) term graph enriched with three maps: ``call`` sends
every occurrence of a defined symbol to the output vertex heading its
definition, ``ret`` sends every input vertex to the occurrence successor
it stands for, and ``anc`` records for every vertex the chain of
occurrence vertices it is nested under.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .graph import TermGraph, reachable
from .labels import Atomic, Input, Nested, Output
from .rgs import NtgSignature, Rgs, dependency_ars, is_ntg, symbol_name_ok, validate_rgs

Vertex = str


@dataclass(frozen=True)
class Sntg:
    """Enriched term graph: ``tg`` plus call, return and ancestor maps."""

    tg: TermGraph
    call: Mapping[Vertex, Vertex]
    ret: Mapping[Vertex, Vertex]
    anc: Mapping[Vertex, Tuple[Vertex, ...]]

    def __post_init__(self):
        object.__setattr__(self, "call", dict(self.call))
        object.__setattr__(self, "ret", dict(self.ret))
        object.__setattr__(self, "anc", {v: tuple(a) for v, a in self.anc.items()})
        vs = set(self.tg.lab)
        for name, mapping in (("call", self.call), ("ret", self.ret)):
            for k, v in mapping.items():
                if k not in vs or v not in vs:
                    raise ValueError(f"{name} map mentions unknown vertex {k!r} or {v!r}")
        if set(self.anc) != vs:
            raise ValueError("ancestor map must be total")
        for v, chain in self.anc.items():
            for u in chain:
                if u not in vs:
                    raise ValueError(f"ancestor chain of {v!r} mentions unknown vertex {u!r}")

    @property
    def root(self) -> Vertex:
        return self.tg.root


@dataclass(frozen=True)
class SntgViolation:
    condition: str
    vertices: Tuple[Vertex, ...]
    message: str

    def __str__(self):
        return f"({self.condition}) at {','.join(self.vertices)}: {self.message}"


def check_sntg(s: Sntg) -> List[SntgViolation]:
    """Evaluate every well-formedness condition; empty list means valid.

    The conditions are checked independently so that a single fault shows
    up under the condition it breaks.  Beyond the defining conditions one
    completeness check is included: every vertex of a definition must be
    reachable from that definition's output vertex ("body-connected"),
    which rules out disconnected junk that the pointwise conditions alone
    cannot see.
    """
    g = s.tg
    out: List[SntgViolation] = []

    def bad(cond, vs, msg):
        out.append(SntgViolation(cond, tuple(vs), msg))

    root = g.root
    if not isinstance(g.lab[root], Nested):
        bad("root", [root], "root vertex must carry a defined symbol")
    if s.anc[root] != ():
        bad("root", [root], "root vertex must have an empty ancestor chain")
    if g.lab[root].arity != 0:
        bad("root", [root], "root vertex must be nullary")

    for v in sorted(g.lab, key=str):
        chain = s.anc[v]
        letters = chain + (v,)
        if len(set(letters)) != len(letters):
            bad("nested", [v], "ancestor chain letters must be pairwise distinct")

    for v in sorted(g.lab, key=str):
        for w in g.args[v]:
            if s.anc[w] != s.anc[v]:
                bad("arguments", [v, w], "successor has a different ancestor chain")

    for v in sorted(g.lab, key=str):
        lbl = g.lab[v]
        if (v in s.call) != isinstance(lbl, Nested):
            bad("defined", [v], "call must be defined exactly on defined-symbol vertices")
        if (v in s.ret) != isinstance(lbl, Input):
            bad("defined", [v], "return must be defined exactly on input vertices")

    for v in sorted(g.lab, key=str):
        lbl = g.lab[v]
        if not isinstance(lbl, Nested) or v not in s.call:
            continue
        o = s.call[v]
        if not isinstance(g.lab[o], Output):
            bad("step-into", [v, o], "call target is not an output vertex")
            continue
        if s.anc[o] != s.anc[v] + (v,):
            bad("step-into", [v, o], "call target has the wrong ancestor chain")
        scope = reachable(g, o)
        outputs = [u for u in scope if isinstance(g.lab[u], Output)]
        if outputs != [o]:
            bad("step-into", [v, o], "call target is not the single output vertex of its scope")
        by_index: Dict[int, List[Vertex]] = {}
        for u in scope:
            if isinstance(g.lab[u], Input):
                by_index.setdefault(g.lab[u].index, []).append(u)
        for j in range(1, lbl.arity + 1):
            hits = by_index.pop(j, [])
            if len(hits) != 1:
                bad("step-out", [v], f"scope has {len(hits)} vertices for input index {j}")
                continue
            b = hits[0]
            if b not in s.ret:
                continue  # already reported under (defined)
            if g.args[v][j - 1] != s.ret[b]:
                bad("step-out", [v, b], f"return of input {j} is not successor {j} of the occurrence")
        if by_index:
            j = sorted(by_index)[0]
            bad("step-out", [v] + by_index[j], f"scope has an input with index {j} beyond the arity")

    # completeness: the vertices assigned to a definition level are exactly
    # the vertices its output can reach, and the top level holds only the root
    levels: Dict[Tuple[Vertex, ...], List[Vertex]] = {}
    for v in sorted(g.lab, key=str):
        levels.setdefault(s.anc[v], []).append(v)
    extra = [v for v in levels.get((), []) if v != root]
    if extra:
        bad("body-connected", extra, "vertices outside every definition")
    for v in sorted(g.lab, key=str):
        if isinstance(g.lab[v], Nested) and v in s.call:
            o = s.call[v]
            if not isinstance(g.lab[o], Output):
                continue
            scope = set(reachable(g, o))
            level = set(levels.get(s.anc[v] + (v,), []))
            stray = sorted(level - scope, key=str)
            if stray:
                bad("body-connected", stray, f"unreachable from the output vertex {o}")
    return out


def ntg_to_sntg(n: Rgs) -> Sntg:
    """Glue the bodies of a tree-shaped specification into one structure.

    A fresh root vertex stands for the (implicit) occurrence of the root
    symbol.  Every occurrence vertex is linked to its definition's output
    vertex, every input vertex back to the matching occurrence successor,
    and ancestor chains record the call path from the root vertex.
    """
    bad = validate_rgs(n)
    if bad:
        raise ValueError("invalid specification: " + str(bad[0]))
    res = is_ntg(n)
    if not res.ok:
        raise ValueError(f"not a tree-shaped specification: {res.defect}")
    deps = dependency_ars(n)

    def vid(sym: str, v: Vertex) -> Vertex:
        return f"{sym}.{v}"

    root_vertex = "root"
    lab: Dict[Vertex, object] = {root_vertex: Nested(n.root_symbol, 0)}
    args: Dict[Vertex, tuple] = {root_vertex: ()}
    call: Dict[Vertex, Vertex] = {}
    ret: Dict[Vertex, Vertex] = {}
    anc: Dict[Vertex, tuple] = {root_vertex: ()}

    occ_vertex: Dict[str, Vertex] = {n.root_symbol: root_vertex}
    for step in deps.steps:
        occ_vertex[step.target] = vid(step.source, step.vertex)

    # process symbols in dependency order so ancestor chains are available
    order = [n.root_symbol]
    queue = deque(order)
    while queue:
        sym = queue.popleft()
        for step in deps.steps_from(sym):
            order.append(step.target)
            queue.append(step.target)

    sym_anc: Dict[str, tuple] = {}
    for sym in order:
        occ = occ_vertex[sym]
        parent_chain = anc[occ]
        chain = parent_chain + (occ,)
        sym_anc[sym] = chain
        body = n.rec[sym]
        for v in body.lab:
            lab[vid(sym, v)] = body.lab[v]
            args[vid(sym, v)] = tuple(vid(sym, w) for w in body.args[v])
            anc[vid(sym, v)] = chain
        call[occ] = vid(sym, body.root)

    for sym in order:
        body = n.rec[sym]
        occ = occ_vertex[sym]
        for v in body.lab:
            lbl = body.lab[v]
            if isinstance(lbl, Input):
                ret[vid(sym, v)] = args[occ][lbl.index - 1]

    tg = TermGraph(lab, args, root_vertex)
    s = Sntg(tg, call, ret, anc)
    assert not check_sntg(s), "conversion produced an invalid structure"
    return s


def sntg_to_ntg(s: Sntg) -> Rgs:
    """Cut a structural representation back into one definition per
    occurrence vertex; inverse of ``ntg_to_sntg`` up to isomorphism.

    Input indices are recovered from the return links.  When an occurrence
    has duplicate successors the indices are resolved deterministically:
    inputs are scanned in breadth-first order from the definition's output
    vertex, each taking the least index that is still free.
    """
    problems = check_sntg(s)
    if problems:
        raise ValueError("invalid structural representation: " + str(problems[0]))
    g = s.tg

    atomic: Dict[str, int] = {}
    for v in g.lab:
        lbl = g.lab[v]
        if isinstance(lbl, Atomic):
            if atomic.setdefault(lbl.name, lbl.arity) != lbl.arity:
                raise ValueError(f"atomic symbol {lbl.name!r} used at two arities")

    # one definition per occurrence vertex, named by that vertex (primed
    # until clear of atomic, reserved and already-taken names)
    nested_vertices = [v for v in sorted(g.lab, key=str) if isinstance(g.lab[v], Nested)]
    sym_of: Dict[Vertex, str] = {}
    taken = set(atomic)
    for v in nested_vertices:
        name = str(v)
        while name in taken or not symbol_name_ok(name):
            name += "'"
        sym_of[v] = name
        taken.add(name)

    rec: Dict[str, TermGraph] = {}
    nested_sig: Dict[str, int] = {}
    for w in nested_vertices:
        sym = sym_of[w]
        arity = g.lab[w].arity
        nested_sig[sym] = arity
        o = s.call[w]
        body_vertices = reachable(g, o)
        body_lab: Dict[Vertex, object] = {}
        body_args: Dict[Vertex, tuple] = {}
        assigned: Dict[Vertex, int] = {}
        free = list(range(1, arity + 1))
        for v in body_vertices:
            if isinstance(g.lab[v], Input):
                target = s.ret[v]
                candidates = [
                    j for j in free if g.args[w][j - 1] == target
                ]
                if not candidates:
                    raise ValueError(f"return link of {v!r} matches no free successor of {w!r}")
                j = candidates[0]
                free.remove(j)
                assigned[v] = j
        for v in body_vertices:
            lbl = g.lab[v]
            if isinstance(lbl, Nested):
                body_lab[v] = Nested(sym_of[v], lbl.arity)
            elif isinstance(lbl, Input):
                body_lab[v] = Input(assigned[v])
            else:
                body_lab[v] = lbl
            body_args[v] = g.args[v]
        rec[sym] = TermGraph(body_lab, body_args, o)

    root_sym = sym_of[g.root]
    sig = NtgSignature(atomic, nested_sig, root_sym)
    n = Rgs(sig, rec)
    bad = validate_rgs(n)
    if bad:
        raise ValueError("reconstruction is not well-formed: " + str(bad[0]))
    res = is_ntg(n)
    if not res.ok:
        raise ValueError(f"reconstruction is not tree-shaped: {res.defect}")
    return n


@dataclass(frozen=True)
class SntgConflict:
    left: Vertex
    right: Vertex
    reason: str


def _kinds_match(l1, l2) -> bool:
    if isinstance(l1, Atomic) and isinstance(l2, Atomic):
        return l1 == l2
    for cls in (Nested, Output, Input):
        if isinstance(l1, cls) and isinstance(l2, cls):
            return True
    return False


def sntg_hom_explained(s1: Sntg, s2: Sntg):
    """Propagate the unique homomorphism candidate from the root pair
    through arguments, call and return links, then verify it in full."""
    phi: Dict[Vertex, Vertex] = {}
    queue = deque([(s1.root, s2.root)])
    while queue:
        v, w = queue.popleft()
        if v in phi:
            if phi[v] != w:
                return None, SntgConflict(v, w, f"already mapped to {phi[v]!r}")
            continue
        l1, l2 = s1.tg.lab[v], s2.tg.lab[w]
        if not _kinds_match(l1, l2):
            return None, SntgConflict(v, w, f"labels {l1} and {l2} do not match")
        phi[v] = w
        if isinstance(l1, (Atomic, Output)):
            # occurrence successors are related through return links, not
            # positionally: input indices may be permuted or merged
            queue.extend(zip(s1.tg.args[v], s2.tg.args[w]))
        elif isinstance(l1, Nested):
            if w not in s2.call:
                return None, SntgConflict(v, w, "call undefined on image")
            queue.append((s1.call[v], s2.call[w]))
        else:
            if w not in s2.ret:
                return None, SntgConflict(v, w, "return undefined on image")
            queue.append((s1.ret[v], s2.ret[w]))
    problems = verify_sntg_hom(s1, s2, phi)
    if problems:
        return None, SntgConflict(s1.root, s2.root, problems[0])
    return phi, None


def sntg_hom(s1: Sntg, s2: Sntg) -> Optional[Dict[Vertex, Vertex]]:
    return sntg_hom_explained(s1, s2)[0]


def verify_sntg_hom(s1: Sntg, s2: Sntg, phi: Mapping[Vertex, Vertex]) -> List[str]:
    """Re-check the structure-respecting-morphism conditions for ``phi``."""
    problems = []
    if phi.get(s1.root) != s2.root:
        problems.append("root not mapped to root")
    for v in sorted(s1.tg.lab, key=str):
        w = phi.get(v)
        if w is None:
            problems.append(f"{v}: map is not total")
            continue
        if tuple(phi.get(a) for a in s1.anc[v]) != s2.anc[w]:
            problems.append(f"{v}: ancestor chain not preserved")
        l1, l2 = s1.tg.lab[v], s2.tg.lab[w]
        if isinstance(l1, Atomic):
            if l1 != l2:
                problems.append(f"{v}: atomic label not preserved")
            elif tuple(phi.get(x) for x in s1.tg.args[v]) != s2.tg.args[w]:
                problems.append(f"{v}: arguments not preserved")
        elif isinstance(l1, Nested):
            if not isinstance(l2, Nested):
                problems.append(f"{v}: occurrence not mapped to an occurrence")
            elif phi.get(s1.call[v]) != s2.call.get(w):
                problems.append(f"{v}: call link not preserved")
        elif isinstance(l1, Output):
            if not isinstance(l2, Output):
                problems.append(f"{v}: output not mapped to an output")
            elif tuple(phi.get(x) for x in s1.tg.args[v]) != s2.tg.args[w]:
                problems.append(f"{v}: output successor not preserved")
        elif isinstance(l1, Input):
            if not isinstance(l2, Input):
                problems.append(f"{v}: input not mapped to an input")
            elif phi.get(s1.ret[v]) != s2.ret.get(w):
                problems.append(f"{v}: return link not preserved")
    return problems


def sntg_bisimilar(s1: Sntg, s2: Sntg) -> Optional[Sntg]:
    """Closure over vertex pairs from the root pair; on success returns the
    witness structure over pairs whose projections are homomorphisms."""
    start = (s1.root, s2.root)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v, w = queue.popleft()
        l1, l2 = s1.tg.lab[v], s2.tg.lab[w]
        if not _kinds_match(l1, l2):
            return None
        if isinstance(l1, (Atomic, Output)):
            children = list(zip(s1.tg.args[v], s2.tg.args[w]))
        elif isinstance(l1, Nested):
            children = [(s1.call[v], s2.call[w])]
        else:
            children = [(s1.ret[v], s2.ret[w])]
        for child in children:
            if child not in seen:
                seen.add(child)
                order.append(child)
                queue.append(child)

    vid_map = {}
    taken = set()
    for pair in order:
        name = f"({pair[0]},{pair[1]})"
        while name in taken:
            name += "'"
        vid_map[pair] = name
        taken.add(name)

    def vid(pair):
        return vid_map[pair]

    # input indices are assigned per definition pair, in discovery order
    scope_inputs: Dict[tuple, list] = {}
    for pair in order:
        v, w = pair
        if isinstance(s1.tg.lab[v], Input):
            key = (s1.anc[v], s2.anc[w])
            scope_inputs.setdefault(key, []).append(pair)
    input_index = {}
    for key, pairs in scope_inputs.items():
        for idx, pair in enumerate(pairs, start=1):
            input_index[pair] = idx

    lab: Dict[Vertex, object] = {}
    args: Dict[Vertex, tuple] = {}
    call: Dict[Vertex, Vertex] = {}
    ret: Dict[Vertex, Vertex] = {}
    anc: Dict[Vertex, tuple] = {}
    for pair in order:
        v, w = pair
        l1, l2 = s1.tg.lab[v], s2.tg.lab[w]
        if len(s1.anc[v]) != len(s2.anc[w]):
            return None
        anc[vid(pair)] = tuple(
            vid((a, b)) for a, b in zip(s1.anc[v], s2.anc[w])
        )
        if isinstance(l1, Nested):
            key = (s1.anc[v] + (v,), s2.anc[w] + (w,))
            arity = len(scope_inputs.get(key, []))
            lab[vid(pair)] = Nested(f"{l1.name}&{l2.name}", arity)
            fetched = []
            for u_pair in scope_inputs.get(key, []):
                i = s1.tg.lab[u_pair[0]].index
                j = s2.tg.lab[u_pair[1]].index
                fetched.append(vid((s1.tg.args[v][i - 1], s2.tg.args[w][j - 1])))
            args[vid(pair)] = tuple(fetched)
            call[vid(pair)] = vid((s1.call[v], s2.call[w]))
        elif isinstance(l1, Input):
            lab[vid(pair)] = Input(input_index[pair])
            args[vid(pair)] = ()
            ret[vid(pair)] = vid((s1.ret[v], s2.ret[w]))
        else:
            lab[vid(pair)] = l1
            args[vid(pair)] = tuple(
                vid((x, y)) for x, y in zip(s1.tg.args[v], s2.tg.args[w])
            )
    witness = Sntg(TermGraph(lab, args, vid(start)), call, ret, anc)
    if check_sntg(witness):
        return None
    proj1 = {vid(pair): pair[0] for pair in order}
    proj2 = {vid(pair): pair[1] for pair in order}
    assert not verify_sntg_hom(witness, s1, proj1), "left projection fails"
    assert not verify_sntg_hom(witness, s2, proj2), "right projection fails"
    return witness
