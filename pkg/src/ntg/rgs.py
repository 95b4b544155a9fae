"""Recursive graph specifications and the nested-term-graph predicate.

A specification maps each nested symbol to a definition body, a term
graph over the atomic symbols plus the interface symbols (one output
vertex at the body root, one input vertex per parameter).  The bodies may
use nested symbols freely; the induced dependency structure decides
whether the specification is a nested term graph (each symbol introduced
by exactly one occurrence, no recursion).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .graph import TermGraph, check_root_connected, reachable
from .labels import CUT_SYMBOL, Atomic, Input, Nested, Output

_RESERVED = {"o", "out", "in", "out_r", "in_r", "tg", "root", "def", "atomic"}
_RESERVED_RE = re.compile(r"^i_?\d+$")


def symbol_name_ok(name: str) -> bool:
    return not (name in _RESERVED or _RESERVED_RE.match(name))


def _check_symbol_name(name: str):
    if not symbol_name_ok(name):
        raise ValueError(f"symbol name {name!r} is reserved")


@dataclass(frozen=True)
class NtgSignature:
    """Atomic and nested symbol arities plus the distinguished root symbol."""

    atomic: Mapping[str, int]
    nested: Mapping[str, int]
    root_symbol: str

    def __post_init__(self):
        object.__setattr__(self, "atomic", dict(self.atomic))
        object.__setattr__(self, "nested", dict(self.nested))
        overlap = set(self.atomic) & set(self.nested)
        if overlap:
            raise ValueError(f"symbols declared both atomic and nested: {sorted(overlap)}")
        for name, ar in list(self.atomic.items()) + list(self.nested.items()):
            if name != CUT_SYMBOL:
                _check_symbol_name(name)
            if ar < 0:
                raise ValueError(f"negative arity for {name!r}")
        if self.root_symbol not in self.nested:
            raise ValueError(f"root symbol {self.root_symbol!r} is not a nested symbol")
        if self.nested[self.root_symbol] != 0:
            raise ValueError("the root symbol must be nullary")


@dataclass(frozen=True)
class Rgs:
    """A specification: signature plus one definition body per nested symbol."""

    signature: NtgSignature
    rec: Mapping[str, TermGraph]

    def __post_init__(self):
        object.__setattr__(self, "rec", dict(self.rec))
        if set(self.rec) != set(self.signature.nested):
            missing = set(self.signature.nested) ^ set(self.rec)
            raise ValueError(f"definitions and nested symbols differ at {sorted(missing)}")

    @property
    def root_symbol(self) -> str:
        return self.signature.root_symbol


@dataclass(frozen=True)
class Violation:
    symbol: Optional[str]
    vertex: Optional[str]
    message: str

    def __str__(self):
        where = self.symbol or "?"
        if self.vertex is not None:
            where += f".{self.vertex}"
        return f"{where}: {self.message}"


def validate_rgs(r: Rgs) -> List[Violation]:
    """Check every body against the specification invariants.

    Returns the empty list when the specification is well formed.  Symbol
    reachability is deliberately not checked here (the parser stays
    permissive); ``is_ntg`` reports unreachable symbols.
    """
    out: List[Violation] = []
    sig = r.signature
    for sym in sorted(r.rec):
        body = r.rec[sym]
        arity = sig.nested[sym]
        outputs = [v for v in body.lab if isinstance(body.lab[v], Output)]
        if len(outputs) != 1:
            out.append(Violation(sym, None, f"body has {len(outputs)} output vertices, expected 1"))
        for v in outputs:
            if v != body.root:
                out.append(Violation(sym, v, "output vertex is not the body root"))
        seen_inputs: Dict[int, str] = {}
        for v in sorted(body.lab, key=str):
            lbl = body.lab[v]
            if isinstance(lbl, Atomic):
                if lbl.name not in sig.atomic:
                    out.append(Violation(sym, v, f"unknown atomic symbol {lbl.name!r}"))
                elif sig.atomic[lbl.name] != lbl.arity:
                    out.append(Violation(sym, v, f"atomic symbol {lbl.name!r} used at wrong arity"))
            elif isinstance(lbl, Nested):
                if lbl.name not in sig.nested:
                    out.append(Violation(sym, v, f"unknown nested symbol {lbl.name!r}"))
                elif sig.nested[lbl.name] != lbl.arity:
                    out.append(Violation(sym, v, f"nested symbol {lbl.name!r} used at wrong arity"))
            elif isinstance(lbl, Input):
                if lbl.index in seen_inputs:
                    out.append(Violation(sym, v, f"duplicate input index {lbl.index}"))
                else:
                    seen_inputs[lbl.index] = v
                if lbl.index > arity:
                    out.append(Violation(sym, v, f"input index {lbl.index} exceeds arity {arity}"))
            elif isinstance(lbl, Output):
                pass
            else:
                out.append(Violation(sym, v, f"label {lbl} is not allowed in a body"))
        for j in range(1, arity + 1):
            if j not in seen_inputs:
                out.append(Violation(sym, None, f"missing input vertex for index {j}"))
        witness = check_root_connected(body)
        if witness is not None:
            out.append(Violation(sym, witness, "body vertex unreachable from the output vertex"))
        # Edges into the output vertex have no first-order reading; see
        # the interpretation module.
        out_set = set(outputs)
        for v in sorted(body.lab, key=str):
            for w in body.args[v]:
                if w in out_set:
                    out.append(Violation(sym, v, "edge into the output vertex"))
    return out


@dataclass(frozen=True)
class DepStep:
    """One dependency step, induced by one occurrence vertex."""

    source: str
    vertex: str
    target: str


@dataclass(frozen=True)
class DependencyArs:
    objects: Tuple[str, ...]
    root: str
    steps: Tuple[DepStep, ...]

    def steps_from(self, sym: str) -> List[DepStep]:
        return [s for s in self.steps if s.source == sym]

    def steps_into(self, sym: str) -> List[DepStep]:
        return [s for s in self.steps if s.target == sym]


def dependency_ars(r: Rgs) -> DependencyArs:
    """One step per occurrence of a nested-labeled vertex in some body."""
    steps = []
    for sym in sorted(r.rec):
        body = r.rec[sym]
        for v in reachable(body, body.root):
            lbl = body.lab[v]
            if isinstance(lbl, Nested):
                steps.append(DepStep(sym, v, lbl.name))
    return DependencyArs(tuple(sorted(r.signature.nested)), r.root_symbol, tuple(steps))


@dataclass(frozen=True)
class Cycle:
    path: Tuple[str, ...]

    def __str__(self):
        return "cycle " + " ~> ".join(self.path)


@dataclass(frozen=True)
class CoDetViolation:
    symbol: str
    steps: Tuple[DepStep, DepStep]

    def __str__(self):
        a, b = self.steps
        return (
            f"symbol {self.symbol!r} is introduced twice: "
            f"at {a.source}.{a.vertex} and at {b.source}.{b.vertex}"
        )


@dataclass(frozen=True)
class UnreachableSymbol:
    symbol: str

    def __str__(self):
        return f"symbol {self.symbol!r} is unreachable from the root symbol"


Defect = Union[Cycle, CoDetViolation, UnreachableSymbol]


@dataclass(frozen=True)
class NtgResult:
    ok: bool
    defect: Optional[Defect] = None

    def __bool__(self):
        return self.ok


def _reachable_symbols(deps: DependencyArs) -> List[str]:
    seen = {deps.root}
    order = [deps.root]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for step in deps.steps:
            if step.source == s and step.target not in seen:
                seen.add(step.target)
                order.append(step.target)
                queue.append(step.target)
    return order


def is_ntg(r: Rgs, deps: Optional[DependencyArs] = None) -> NtgResult:
    """Decide whether the dependency structure restricted to the reachable
    symbols is a tree: acyclic, at most one step into each symbol, and all
    declared symbols reachable."""
    deps = deps or dependency_ars(r)
    reach = _reachable_symbols(deps)
    reach_set = set(reach)
    succ = {s: [t.target for t in deps.steps if t.source == s] for s in reach}
    # cycle detection by iterative DFS with colors
    color = {s: 0 for s in reach}  # 0 unvisited, 1 on stack, 2 done
    parent: Dict[str, Optional[str]] = {}
    for start in reach:
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        parent[start] = None
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    # walk the parent chain from node back to nxt
                    chain = [node]
                    cur = node
                    while cur != nxt and parent[cur] is not None:
                        cur = parent[cur]
                        chain.append(cur)
                    if cur != nxt:
                        chain = [node]  # self loop
                    cycle = tuple(reversed(chain)) + (nxt,)
                    return NtgResult(False, Cycle(cycle))
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    incoming: Dict[str, List[DepStep]] = {}
    for step in deps.steps:
        if step.source in reach_set:
            incoming.setdefault(step.target, []).append(step)
    for sym in sorted(incoming):
        if len(incoming[sym]) > 1:
            return NtgResult(False, CoDetViolation(sym, (incoming[sym][0], incoming[sym][1])))
    for sym in sorted(r.signature.nested):
        if sym not in reach_set:
            return NtgResult(False, UnreachableSymbol(sym))
    return NtgResult(True)


class MissingDepthError(ValueError):
    """Raised when unfolding a cyclic specification without a depth bound."""


def dependency_height(r: Rgs) -> int:
    """Length in steps of the longest dependency path from the root symbol.

    Only defined for acyclic dependency structures.
    """
    deps = dependency_ars(r)
    memo: Dict[str, int] = {}

    def h(sym: str) -> int:
        if sym in memo:
            return memo[sym]
        memo[sym] = 0  # guard against accidental cycles
        best = 0
        for step in deps.steps_from(sym):
            best = max(best, 1 + h(step.target))
        memo[sym] = best
        return best

    return h(r.root_symbol)


@dataclass(frozen=True)
class UnfoldResult:
    rgs: Rgs
    cuts: int

    @property
    def truncated(self) -> bool:
        return self.cuts > 0


def unfold_to_ntg(r: Rgs, depth: Optional[int] = None) -> UnfoldResult:
    """Duplicate shared definitions until each symbol is introduced once.

    Every reachable access path through the dependency structure becomes
    its own symbol, so the result's dependencies form a tree.  For acyclic
    input this is exact; cyclic input needs ``depth`` and calls nested
    deeper than that are replaced by the nullary placeholder, yielding a
    truncated, non-semantic result meant for inspection only.
    """
    deps = dependency_ars(r)
    reach = set(_reachable_symbols(deps))
    cyclic = _has_cycle(deps, reach)
    if cyclic and depth is None:
        raise MissingDepthError("cyclic dependencies require an unfold depth")

    counters: Dict[str, int] = {}
    new_rec: Dict[str, TermGraph] = {}
    new_nested: Dict[str, int] = {}
    cuts = 0

    queue = deque([(r.root_symbol, r.root_symbol, 0)])  # (instance name, symbol, level)
    new_nested[r.root_symbol] = 0
    while queue:
        iname, sym, level = queue.popleft()
        body = r.rec[sym]
        prefix = iname + "/"
        lab = {}
        args = {}
        for v in body.lab:
            lab[prefix + v] = body.lab[v]
            args[prefix + v] = tuple(prefix + w for w in body.args[v])
        for v in reachable(body, body.root):
            lbl = body.lab[v]
            if not isinstance(lbl, Nested):
                continue
            target = lbl.name
            if depth is not None and level + 1 > depth:
                lab[prefix + v] = Atomic(CUT_SYMBOL, 0)
                args[prefix + v] = ()
                cuts += 1
                continue
            counters[target] = counters.get(target, 0) + 1
            child = f"{target}@{counters[target]}"
            lab[prefix + v] = Nested(child, lbl.arity)
            new_nested[child] = lbl.arity
            queue.append((child, target, level + 1))
        # drop vertices cut off by placeholder substitution
        g = TermGraph(lab, args, prefix + body.root)
        keep = set(reachable(g, g.root))
        g = TermGraph(
            {v: lab[v] for v in lab if v in keep},
            {v: args[v] for v in args if v in keep},
            g.root,
        )
        new_rec[iname] = g

    atomic = dict(r.signature.atomic)
    if cuts:
        atomic[CUT_SYMBOL] = 0
    sig = NtgSignature(atomic, new_nested, r.root_symbol)
    return UnfoldResult(Rgs(sig, new_rec), cuts)


def _has_cycle(deps: DependencyArs, reach) -> bool:
    succ = {s: [t.target for t in deps.steps if t.source == s and t.target in reach] for s in reach}
    color = {s: 0 for s in reach}
    for start in reach:
        if color[start]:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    return False
