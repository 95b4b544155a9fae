"""Behavioral equivalence of recursive graph specifications.

Two families of notions live here.  The direct ones compare tree-shaped
specifications by a synchronized walk over their definition bodies, with
an interface rule at defined-symbol occurrences.  The stack-based ones
compare arbitrary specifications through configurations that pair a
vertex with the stack of occurrence vertices it is nested under; those
work for shared and cyclic dependencies as well (depth-bounded in the
cyclic case).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .graph import TermGraph
from .labels import Atomic, Input, Nested, Output
from .rgs import (
    MissingDepthError,
    NtgSignature,
    Rgs,
    dependency_ars,
    is_ntg,
    unfold_to_ntg,
    validate_rgs,
    _has_cycle,
    _reachable_symbols,
)

CV = Tuple[str, str]  # (symbol, body vertex)


class _Carrier:
    """Disjoint union of all definition bodies of one specification."""

    def __init__(self, r: Rgs):
        self.rgs = r
        self.rootof: Dict[str, CV] = {sym: (sym, r.rec[sym].root) for sym in r.rec}
        self.root: CV = self.rootof[r.root_symbol]
        self._occ: Dict[str, CV] = {}
        self._inputs: Dict[str, List[CV]] = {}
        for sym in sorted(r.rec):
            body = r.rec[sym]
            ins = [
                (sym, v)
                for v in sorted(body.lab, key=str)
                if isinstance(body.lab[v], Input)
            ]
            ins.sort(key=lambda cv: body.lab[cv[1]].index)
            self._inputs[sym] = ins
            for v in sorted(body.lab, key=str):
                lbl = body.lab[v]
                if isinstance(lbl, Nested):
                    self._occ.setdefault(lbl.name, (sym, v))

    def lab(self, cv: CV):
        sym, v = cv
        return self.rgs.rec[sym].lab[v]

    def args(self, cv: CV) -> Tuple[CV, ...]:
        sym, v = cv
        return tuple((sym, w) for w in self.rgs.rec[sym].args[v])

    def occurrence(self, sym: str) -> Optional[CV]:
        return self._occ.get(sym)

    def inputs(self, sym: str) -> List[CV]:
        return self._inputs[sym]

    def vertices(self) -> List[CV]:
        out = []
        for sym in sorted(self.rgs.rec):
            out.extend((sym, v) for v in self.rgs.rec[sym].lab)
        return out


def _require_valid(r: Rgs, what: str = "specification"):
    bad = validate_rgs(r)
    if bad:
        raise ValueError(f"invalid {what}: " + "; ".join(str(v) for v in bad))


def _require_ntg(r: Rgs, what: str = "argument"):
    _require_valid(r, what)
    res = is_ntg(r)
    if not res.ok:
        raise ValueError(f"{what} is not tree-shaped: {res.defect}")


def _merge_atomic(s1: NtgSignature, s2: NtgSignature) -> Dict[str, int]:
    merged = dict(s1.atomic)
    for name, ar in s2.atomic.items():
        if merged.setdefault(name, ar) != ar:
            raise ValueError(f"atomic symbol {name!r} has conflicting arities")
    return merged


def _uniquify(keys, fmt, avoid=()):
    """Deterministic readable names for ``keys``, collision-free even when
    the formatted strings coincide or clash with ``avoid``."""
    names = {}
    taken = set(avoid)
    for key in keys:
        name = fmt(key)
        while name in taken:
            name += "'"
        names[key] = name
        taken.add(name)
    return names


# ---------------------------------------------------------------------------
# Stack-based comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NestedConfig:
    """A pair of visits, each prefixed with its stack of nesting ancestors."""

    left_stack: Tuple[CV, ...]
    left: CV
    right_stack: Tuple[CV, ...]
    right: CV

    def __str__(self):
        def side(stack, v):
            return "".join(f"{s[0]}.{s[1]} " for s in stack) + f"{v[0]}.{v[1]}"

        return f"<{side(self.left_stack, self.left)} ~ {side(self.right_stack, self.right)}>"


@dataclass(frozen=True)
class NestedBisimRelation:
    configs: frozenset
    depth_bound: Optional[int]  # None when the closure is exact

    @property
    def exact(self) -> bool:
        return self.depth_bound is None

    def __len__(self):
        return len(self.configs)

    def max_stack_depth(self) -> int:
        return max((len(c.left_stack) for c in self.configs), default=0)


def _compatible(l1, l2) -> bool:
    if isinstance(l1, Atomic) and isinstance(l2, Atomic):
        return l1 == l2
    if isinstance(l1, Nested) and isinstance(l2, Nested):
        return True
    if isinstance(l1, Output) and isinstance(l2, Output):
        return True
    if isinstance(l1, Input) and isinstance(l2, Input):
        return True
    return False


def _progressions(c1: _Carrier, c2: _Carrier, cfg: NestedConfig):
    """Successor configurations forced by the local progression rules.

    Returns (children, pushes) where pushes flags the call rule, or raises
    _Clash when no rule applies.
    """
    l1, l2 = c1.lab(cfg.left), c2.lab(cfg.right)
    if not _compatible(l1, l2):
        raise _Clash(cfg, f"labels {l1} and {l2} do not match")
    if isinstance(l1, Atomic):
        return [
            NestedConfig(cfg.left_stack, x, cfg.right_stack, y)
            for x, y in zip(c1.args(cfg.left), c2.args(cfg.right))
        ], False
    if isinstance(l1, Output):
        (x,) = c1.args(cfg.left)
        (y,) = c2.args(cfg.right)
        return [NestedConfig(cfg.left_stack, x, cfg.right_stack, y)], False
    if isinstance(l1, Nested):
        child = NestedConfig(
            cfg.left_stack + (cfg.left,),
            c1.rootof[l1.name],
            cfg.right_stack + (cfg.right,),
            c2.rootof[l2.name],
        )
        return [child], True
    # both inputs: pop one stack letter and continue at the argument
    if not cfg.left_stack or not cfg.right_stack:
        raise _Clash(cfg, "input vertex reached outside any call")
    t1, t2 = cfg.left_stack[-1], cfg.right_stack[-1]
    a1, a2 = c1.args(t1), c2.args(t2)
    if l1.index > len(a1) or l2.index > len(a2):
        raise _Clash(cfg, "input index exceeds the calling occurrence's arity")
    child = NestedConfig(
        cfg.left_stack[:-1],
        a1[l1.index - 1],
        cfg.right_stack[:-1],
        a2[l2.index - 1],
    )
    return [child], False


class _Clash(Exception):
    def __init__(self, cfg, message):
        super().__init__(message)
        self.cfg = cfg
        self.message = message


def _closure(c1: _Carrier, c2: _Carrier, depth: Optional[int]):
    """Smallest config set containing the root pair and closed under the
    progression rules, up to the optional stack-depth bound."""
    root_cfg = NestedConfig((), c1.root, (), c2.root)
    seen = {root_cfg}
    queue = deque([root_cfg])
    bounded = False
    clash = None
    while queue:
        cfg = queue.popleft()
        try:
            children, pushes = _progressions(c1, c2, cfg)
        except _Clash as e:
            clash = e
            break
        if pushes and depth is not None and len(cfg.left_stack) + 1 > depth:
            bounded = True
            continue
        for child in children:
            if child not in seen:
                seen.add(child)
                queue.append(child)
    return seen, bounded, clash


def _needs_depth(r1: Rgs, r2: Rgs) -> bool:
    for r in (r1, r2):
        deps = dependency_ars(r)
        if _has_cycle(deps, set(_reachable_symbols(deps))):
            return True
    return False


@dataclass(frozen=True)
class NestedBisimResult:
    verdict: str  # "bisimilar" | "not_bisimilar" | "unknown_at_depth"
    relation: Optional[NestedBisimRelation] = None
    counterexample: Optional[NestedConfig] = None
    reason: Optional[str] = None
    depth: Optional[int] = None

    @property
    def bisimilar(self) -> bool:
        return self.verdict == "bisimilar"


def nested_bisim(r1: Rgs, r2: Rgs, depth: Optional[int] = None) -> NestedBisimResult:
    """Decide stack-based bisimilarity by closure from the root pair.

    Exact whenever both dependency structures are acyclic; with cyclic
    dependencies a ``depth`` bound is required and a run that hits the
    bound without finding a clash stays undecided.
    """
    _require_valid(r1, "left specification")
    _require_valid(r2, "right specification")
    if depth is None and _needs_depth(r1, r2):
        raise MissingDepthError("cyclic dependencies require a depth bound")
    c1, c2 = _Carrier(r1), _Carrier(r2)
    configs, bounded, clash = _closure(c1, c2, depth)
    if clash is not None:
        return NestedBisimResult("not_bisimilar", counterexample=clash.cfg, reason=clash.message)
    rel = NestedBisimRelation(frozenset(configs), depth if bounded else None)
    if bounded:
        return NestedBisimResult("unknown_at_depth", relation=rel, depth=depth)
    return NestedBisimResult("bisimilar", relation=rel)


@dataclass(frozen=True)
class NestedHomResult:
    verdict: str  # "hom" | "none" | "unknown_at_depth"
    mapping: Optional[dict] = None  # (stack, v) -> (stack, w)
    reason: Optional[str] = None

    @property
    def exists(self) -> bool:
        return self.verdict == "hom"


def nested_hom(r1: Rgs, r2: Rgs, depth: Optional[int] = None) -> NestedHomResult:
    """Functional variant: the closure must assign at most one right
    configuration to every left configuration."""
    _require_valid(r1, "left specification")
    _require_valid(r2, "right specification")
    if depth is None and _needs_depth(r1, r2):
        raise MissingDepthError("cyclic dependencies require a depth bound")
    c1, c2 = _Carrier(r1), _Carrier(r2)
    configs, bounded, clash = _closure(c1, c2, depth)
    if clash is not None:
        return NestedHomResult("none", reason=clash.message)
    mapping = {}
    for cfg in sorted(configs, key=str):
        key = (cfg.left_stack, cfg.left)
        val = (cfg.right_stack, cfg.right)
        if mapping.setdefault(key, val) != val:
            return NestedHomResult(
                "none", reason=f"configuration {key} relates to two targets"
            )
    if bounded:
        return NestedHomResult("unknown_at_depth")
    return NestedHomResult("hom", mapping=mapping)


def minimal_nested_self_bisimulation(
    r: Rgs, depth: Optional[int] = None
) -> NestedBisimRelation:
    """Closure of the root configuration of ``r`` against itself.

    For a well-formed specification this is the diagonal relation over
    the reachable stack-prefixed vertices.
    """
    _require_valid(r)
    if depth is None and _needs_depth(r, r):
        raise MissingDepthError("cyclic dependencies require a depth bound")
    c = _Carrier(r)
    configs, bounded, clash = _closure(c, c, depth)
    assert clash is None, "self comparison of a valid specification cannot clash"
    return NestedBisimRelation(frozenset(configs), depth if bounded else None)


def verify_nested_bisim(rel: NestedBisimRelation, r1: Rgs, r2: Rgs) -> List[str]:
    """Clause-by-clause check that ``rel`` is a nested bisimulation.

    Independent of the closure computation: every membership obligation is
    re-derived from the definition.  Bounded relations are only required
    to be closed below their bound.
    """
    c1, c2 = _Carrier(r1), _Carrier(r2)
    problems = []
    root_cfg = NestedConfig((), c1.root, (), c2.root)
    if root_cfg not in rel.configs:
        problems.append("root configuration missing")
    for cfg in sorted(rel.configs, key=str):
        if len(cfg.left_stack) != len(cfg.right_stack):
            problems.append(f"{cfg}: stacks have different lengths")
            continue
        try:
            children, pushes = _progressions(c1, c2, cfg)
        except _Clash as e:
            problems.append(f"{cfg}: {e.message}")
            continue
        if pushes and rel.depth_bound is not None:
            if len(cfg.left_stack) + 1 > rel.depth_bound:
                continue
        for child in children:
            if child not in rel.configs:
                problems.append(f"{cfg}: required configuration {child} missing")
    return problems


# ---------------------------------------------------------------------------
# Direct comparison of tree-shaped specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairConflict:
    left: CV
    right: CV
    reason: str

    def __str__(self):
        return f"{self.left[0]}.{self.left[1]} vs {self.right[0]}.{self.right[1]}: {self.reason}"


def ntg_hom_explained(n1: Rgs, n2: Rgs):
    """Forced propagation of a homomorphism candidate between two
    tree-shaped specifications, then full verification.

    Returns ``(mapping, None)`` or ``(None, conflict)``.  The mapping is a
    dict over carrier vertices ``(symbol, vertex)``.
    """
    _require_ntg(n1, "left argument")
    _require_ntg(n2, "right argument")
    _merge_atomic(n1.signature, n2.signature)
    c1, c2 = _Carrier(n1), _Carrier(n2)
    phi: Dict[CV, CV] = {}
    queue = deque([(c1.root, c2.root)])
    while queue:
        v, w = queue.popleft()
        if v in phi:
            if phi[v] != w:
                return None, PairConflict(v, w, f"already mapped to {phi[v]}")
            continue
        l1, l2 = c1.lab(v), c2.lab(w)
        if not _compatible(l1, l2):
            return None, PairConflict(v, w, f"labels {l1} and {l2} do not match")
        phi[v] = w
        if isinstance(l1, Atomic) or isinstance(l1, Output):
            queue.extend(zip(c1.args(v), c2.args(w)))
        elif isinstance(l1, Nested):
            queue.append((c1.rootof[l1.name], c2.rootof[l2.name]))
        else:  # inputs: relate the matching occurrence arguments
            f1, f2 = v[0], w[0]
            occ1, occ2 = c1.occurrence(f1), c2.occurrence(f2)
            if occ1 is None or occ2 is None:
                return None, PairConflict(v, w, "input vertex in a root body")
            if occ1 not in phi:
                return None, PairConflict(v, w, "enclosing occurrence not yet related")
            if phi[occ1] != occ2:
                return None, PairConflict(v, w, "input vertices of unrelated definitions")
            a1, a2 = c1.args(occ1), c2.args(occ2)
            if l2.index > len(a2):
                return None, PairConflict(v, w, "input index exceeds occurrence arity")
            queue.append((a1[l1.index - 1], a2[l2.index - 1]))
    problems = verify_ntg_hom(n1, n2, phi)
    if problems:
        return None, PairConflict(c1.root, c2.root, problems[0])
    return phi, None


def ntg_hom(n1: Rgs, n2: Rgs) -> Optional[Dict[CV, CV]]:
    return ntg_hom_explained(n1, n2)[0]


def verify_ntg_hom(n1: Rgs, n2: Rgs, phi: Dict[CV, CV]) -> List[str]:
    """Re-check a homomorphism witness clause by clause."""
    c1, c2 = _Carrier(n1), _Carrier(n2)
    problems = []
    if phi.get(c1.root) != c2.root:
        problems.append("root definitions are not related")
    for v in c1.vertices():
        w = phi.get(v)
        if w is None:
            problems.append(f"{v}: map is not total")
            continue
        l1, l2 = c1.lab(v), c2.lab(w)
        if isinstance(l1, Atomic):
            if l1 != l2:
                problems.append(f"{v}: atomic label not preserved")
            elif tuple(phi[x] for x in c1.args(v)) != c2.args(w):
                problems.append(f"{v}: arguments not preserved")
        elif isinstance(l1, Output):
            if not isinstance(l2, Output):
                problems.append(f"{v}: output vertex not mapped to an output vertex")
            elif tuple(phi[x] for x in c1.args(v)) != c2.args(w):
                problems.append(f"{v}: output successor not preserved")
        elif isinstance(l1, Input):
            if not isinstance(l2, Input):
                problems.append(f"{v}: input vertex not mapped to an input vertex")
        else:  # nested occurrence: interface conditions
            if not isinstance(l2, Nested):
                problems.append(f"{v}: occurrence not mapped to an occurrence")
                continue
            if phi.get(c1.rootof[l1.name]) != c2.rootof[l2.name]:
                problems.append(f"{v}: definition roots not related")
            for u in c1.inputs(l1.name):
                img = phi.get(u)
                if img is None:
                    problems.append(f"{u}: map is not total")
                    continue
                if img not in c2.inputs(l2.name):
                    # the redundancy remark: images of inputs stay inputs
                    # of the related definition
                    problems.append(f"{u}: input maps outside the related definition")
                    continue
                i = c1.lab(u).index
                j = c2.lab(img).index
                if j > l2.arity:
                    problems.append(f"{u}: image input index exceeds arity")
                    continue
                if phi.get(c1.args(v)[i - 1]) != c2.args(w)[j - 1]:
                    problems.append(f"{v}: interface clause fails at input {i}")
    return problems


@dataclass(frozen=True)
class BisimWitness:
    """A witness specification over paired symbols, with both projections."""

    witness: Rgs
    proj_left: Dict[CV, CV]
    proj_right: Dict[CV, CV]


def ntg_bisimilar(n1: Rgs, n2: Rgs) -> Optional[BisimWitness]:
    """Synchronized closure over vertex pairs; builds the witness
    specification whose projections are homomorphisms, or returns None."""
    _require_ntg(n1, "left argument")
    _require_ntg(n2, "right argument")
    atomic = _merge_atomic(n1.signature, n2.signature)
    c1, c2 = _Carrier(n1), _Carrier(n2)

    start = (c1.root, c2.root)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v, w = queue.popleft()
        l1, l2 = c1.lab(v), c2.lab(w)
        if not _compatible(l1, l2):
            return None
        children = []
        if isinstance(l1, (Atomic, Output)):
            children = list(zip(c1.args(v), c2.args(w)))
        elif isinstance(l1, Nested):
            children = [(c1.rootof[l1.name], c2.rootof[l2.name])]
        else:
            occ1, occ2 = c1.occurrence(v[0]), c2.occurrence(w[0])
            if occ1 is None or occ2 is None:
                return None
            a1, a2 = c1.args(occ1), c2.args(occ2)
            children = [(a1[l1.index - 1], a2[l2.index - 1])]
        for child in children:
            if child not in seen:
                seen.add(child)
                order.append(child)
                queue.append(child)

    # group the reached pairs into definition bodies of the witness
    def body_key(pair):
        return (pair[0][0], pair[1][0])

    pair_name = _uniquify(order, lambda pair: f"{pair[0][1]}|{pair[1][1]}")

    sym_keys = [(n1.root_symbol, n2.root_symbol)]
    inputs_of: Dict[Tuple[str, str], list] = {}
    for pair in order:
        v, w = pair
        l1, l2 = c1.lab(v), c2.lab(w)
        if isinstance(l1, Nested) and (l1.name, l2.name) not in sym_keys:
            sym_keys.append((l1.name, l2.name))
        if isinstance(l1, Input):
            inputs_of.setdefault(body_key(pair), []).append(pair)
    sym_name = _uniquify(sym_keys, lambda key: f"{key[0]}&{key[1]}", avoid=set(atomic))

    input_index: Dict[tuple, int] = {}
    for key in inputs_of:
        for idx, pair in enumerate(inputs_of[key], start=1):  # discovery order
            input_index[pair] = idx

    bodies: Dict[Tuple[str, str], dict] = {key: {} for key in sym_name}
    proj_left: Dict[CV, CV] = {}
    proj_right: Dict[CV, CV] = {}
    for pair in order:
        v, w = pair
        key = body_key(pair)
        if key not in bodies:
            return None  # pair outside any entered body: cannot happen
        l1, l2 = c1.lab(v), c2.lab(w)
        vid = pair_name[pair]
        if isinstance(l1, Atomic):
            lab = l1
            args = tuple(
                pair_name[(x, y)] for x, y in zip(c1.args(v), c2.args(w))
            )
        elif isinstance(l1, Output):
            args = tuple(
                pair_name[(x, y)] for x, y in zip(c1.args(v), c2.args(w))
            )
            lab = l1
        elif isinstance(l1, Input):
            lab = Input(input_index[pair])
            args = ()
        else:
            ckey = (l1.name, l2.name)
            arity = len(inputs_of.get(ckey, []))
            lab = Nested(sym_name[ckey], arity)
            fetched = []
            for u_pair in inputs_of.get(ckey, []):
                i = c1.lab(u_pair[0]).index
                j = c2.lab(u_pair[1]).index
                fetched.append(pair_name[(c1.args(v)[i - 1], c2.args(w)[j - 1])])
            args = tuple(fetched)
        bodies[key][vid] = (lab, args)
        cname = sym_name[key]
        proj_left[(cname, vid)] = v
        proj_right[(cname, vid)] = w

    rec = {}
    for key, spec in bodies.items():
        root_pair = (c1.rootof[key[0]], c2.rootof[key[1]])
        rec[sym_name[key]] = TermGraph(
            {vid: lab for vid, (lab, _) in spec.items()},
            {vid: args for vid, (_, args) in spec.items()},
            pair_name[root_pair],
        )
    nested = {sym_name[key]: len(inputs_of.get(key, [])) for key in sym_name}
    sig = NtgSignature(atomic, nested, sym_name[(n1.root_symbol, n2.root_symbol)])
    witness = Rgs(sig, rec)

    assert not validate_rgs(witness), "constructed witness is ill-formed"
    assert is_ntg(witness).ok, "constructed witness is not tree-shaped"
    assert not verify_ntg_hom(witness, n1, proj_left), "left projection fails"
    assert not verify_ntg_hom(witness, n2, proj_right), "right projection fails"
    return BisimWitness(witness, proj_left, proj_right)


# ---------------------------------------------------------------------------
# Isomorphism of tree-shaped specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NtgIso:
    """Symbol renaming plus per-symbol input permutation plus vertex maps."""

    symbol_map: Dict[str, str]
    vertex_map: Dict[CV, CV]
    input_perm: Dict[str, Dict[int, int]]


def ntg_isomorphic(n1: Rgs, n2: Rgs) -> Optional[NtgIso]:
    """Equality up to renaming of defined symbols, renaming of vertices,
    and a per-symbol permutation of input indices applied consistently to
    input labels and occurrence successor order."""
    _require_ntg(n1, "left argument")
    _require_ntg(n2, "right argument")
    if len(n1.signature.nested) != len(n2.signature.nested):
        return None
    c1, c2 = _Carrier(n1), _Carrier(n2)
    symbol_map: Dict[str, str] = {}
    vertex_map: Dict[CV, CV] = {}
    input_perm: Dict[str, Dict[int, int]] = {}

    def pair_bodies(f1: str, f2: str) -> bool:
        if n1.signature.nested[f1] != n2.signature.nested[f2]:
            return False
        if len(n1.rec[f1]) != len(n2.rec[f2]):
            return False
        perm: Dict[int, int] = {}
        fwd: Dict[CV, CV] = {}
        bwd: Dict[CV, CV] = {}
        queue = deque([(c1.rootof[f1], c2.rootof[f2])])
        while queue:
            v, w = queue.popleft()
            if v in fwd or w in bwd:
                if fwd.get(v) != w or bwd.get(w) != v:
                    return False
                continue
            l1, l2 = c1.lab(v), c2.lab(w)
            if not _compatible(l1, l2):
                return False
            fwd[v] = w
            bwd[w] = v
            if isinstance(l1, (Atomic, Output)):
                queue.extend(zip(c1.args(v), c2.args(w)))
            elif isinstance(l1, Input):
                # bijectivity of the permutation is checked after the walk
                if perm.setdefault(l1.index, l2.index) != l2.index:
                    return False
            else:  # nested occurrence
                g1, g2 = l1.name, l2.name
                if l1.arity != l2.arity:
                    return False
                if symbol_map.setdefault(g1, g2) != g2:
                    return False
                if not pair_bodies(g1, g2):
                    return False
                sub = input_perm[g1]
                for i in range(1, l1.arity + 1):
                    queue.append((c1.args(v)[i - 1], c2.args(w)[sub[i] - 1]))
        m = n1.signature.nested[f1]
        if sorted(perm) != list(range(1, m + 1)) or sorted(perm.values()) != list(
            range(1, m + 1)
        ):
            return False
        input_perm[f1] = perm
        vertex_map.update(fwd)
        return True

    symbol_map[n1.root_symbol] = n2.root_symbol
    if not pair_bodies(n1.root_symbol, n2.root_symbol):
        return None
    if len(symbol_map) != len(n1.signature.nested):
        return None
    if len(set(symbol_map.values())) != len(symbol_map):
        return None
    return NtgIso(symbol_map, vertex_map, input_perm)


# ---------------------------------------------------------------------------
# Witness extraction from an exact relation
# ---------------------------------------------------------------------------


def witness_ntg_from_relation(rel: NestedBisimRelation, r1: Rgs, r2: Rgs) -> Rgs:
    """Turn an exact nested bisimulation into a tree-shaped specification.

    One defined symbol per stack pair occurring in the relation; the
    configurations sharing a stack pair become the body vertices.
    """
    if not rel.exact:
        raise ValueError("only exact relations induce a specification")
    problems = verify_nested_bisim(rel, r1, r2)
    if problems:
        raise ValueError("relation is not a nested bisimulation: " + problems[0])
    c1, c2 = _Carrier(r1), _Carrier(r2)

    def stack_pair(cfg):
        return (cfg.left_stack, cfg.right_stack)

    atomic = _merge_atomic(r1.signature, r2.signature)
    pairs = sorted({stack_pair(cfg) for cfg in rel.configs}, key=lambda p: (len(p[0]), str(p)))
    sym_name = _uniquify(
        list(enumerate(pairs)), lambda ip: f"w{ip[0]}", avoid=set(atomic)
    )
    sym_name = {p: sym_name[(i, p)] for i, p in enumerate(pairs)}

    members: Dict[tuple, list] = {p: [] for p in pairs}
    for cfg in sorted(rel.configs, key=str):
        members[stack_pair(cfg)].append(cfg)

    inputs_of: Dict[tuple, list] = {}
    for p in pairs:
        ins = [
            cfg
            for cfg in members[p]
            if isinstance(c1.lab(cfg.left), Input) and isinstance(c2.lab(cfg.right), Input)
        ]
        ins.sort(key=lambda cfg: (c1.lab(cfg.left).index, c2.lab(cfg.right).index, str(cfg)))
        inputs_of[p] = ins
    input_index = {}
    for p in pairs:
        for idx, cfg in enumerate(inputs_of[p], start=1):
            input_index[cfg] = idx

    vid_map = {}
    for p in pairs:
        vid_map.update(
            _uniquify(
                members[p],
                lambda cfg: f"{cfg.left[0]}.{cfg.left[1]}|{cfg.right[0]}.{cfg.right[1]}",
            )
        )

    def vid(cfg):
        return vid_map[cfg]

    rec = {}
    for p in pairs:
        lab = {}
        args = {}
        for cfg in members[p]:
            l1, l2 = c1.lab(cfg.left), c2.lab(cfg.right)
            if isinstance(l1, Atomic):
                lab[vid(cfg)] = l1
                args[vid(cfg)] = tuple(
                    vid(NestedConfig(cfg.left_stack, x, cfg.right_stack, y))
                    for x, y in zip(c1.args(cfg.left), c2.args(cfg.right))
                )
            elif isinstance(l1, Output):
                lab[vid(cfg)] = l1
                (x,) = c1.args(cfg.left)
                (y,) = c2.args(cfg.right)
                args[vid(cfg)] = (vid(NestedConfig(cfg.left_stack, x, cfg.right_stack, y)),)
            elif isinstance(l1, Input):
                lab[vid(cfg)] = Input(input_index[cfg])
                args[vid(cfg)] = ()
            else:  # nested pair: an occurrence of the pushed stack pair
                child = (cfg.left_stack + (cfg.left,), cfg.right_stack + (cfg.right,))
                arity = len(inputs_of[child])
                lab[vid(cfg)] = Nested(sym_name[child], arity)
                fetched = []
                for u in inputs_of[child]:
                    i = c1.lab(u.left).index
                    j = c2.lab(u.right).index
                    fetched.append(
                        vid(
                            NestedConfig(
                                cfg.left_stack,
                                c1.args(cfg.left)[i - 1],
                                cfg.right_stack,
                                c2.args(cfg.right)[j - 1],
                            )
                        )
                    )
                args[vid(cfg)] = tuple(fetched)
        out_vids = [
            vid(cfg) for cfg in members[p] if isinstance(c1.lab(cfg.left), Output)
        ]
        if len(out_vids) != 1:
            raise ValueError(f"stack pair {p} has {len(out_vids)} output configurations")
        rec[sym_name[p]] = TermGraph(lab, args, out_vids[0])

    nested = {sym_name[p]: len(inputs_of[p]) for p in pairs}
    sig = NtgSignature(atomic, nested, sym_name[((), ())])
    witness = Rgs(sig, rec)
    assert not validate_rgs(witness), "relation does not induce a well-formed specification"
    assert is_ntg(witness).ok
    return witness


# ---------------------------------------------------------------------------
# Executable cross-checks of the coincidence statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossCheckReport:
    entries: Tuple[tuple, ...]  # (description, left result, right result, agree)

    @property
    def all_agree(self) -> bool:
        return all(e[3] for e in self.entries)

    def __str__(self):
        lines = []
        for desc, a, b, ok in self.entries:
            lines.append(f"{'agree' if ok else 'DISAGREE'}: {desc} ({a} / {b})")
        return "\n".join(lines)


def cross_check_theorems(a: Rgs, b: Rgs) -> CrossCheckReport:
    """Run the direct and the stack-based deciders side by side.

    For tree-shaped inputs both must give the same verdict; acyclic inputs
    are additionally compared against their unfoldings.  Any disagreement
    is an implementation bug.
    """
    _require_valid(a)
    _require_valid(b)
    entries = []
    ta, tb = is_ntg(a).ok, is_ntg(b).ok
    if ta and tb:
        direct = ntg_bisimilar(a, b) is not None
        stacked = nested_bisim(a, b).bisimilar
        entries.append(
            ("bisimilarity equals stack-based bisimilarity", direct, stacked, direct == stacked)
        )
        hom_direct = ntg_hom(a, b) is not None
        hom_stacked = nested_hom(a, b).exists
        entries.append(
            (
                "homomorphism existence equals stack-based homomorphism existence",
                hom_direct,
                hom_stacked,
                hom_direct == hom_stacked,
            )
        )
    else:
        if _needs_depth(a, b):
            raise MissingDepthError("cross-checks need acyclic dependencies")
        ua, ub = unfold_to_ntg(a).rgs, unfold_to_ntg(b).rgs
        stacked = nested_bisim(a, b).bisimilar
        direct = ntg_bisimilar(ua, ub) is not None
        entries.append(
            (
                "stack-based bisimilarity equals bisimilarity of the specified graphs",
                stacked,
                direct,
                stacked == direct,
            )
        )
    return CrossCheckReport(tuple(entries))
