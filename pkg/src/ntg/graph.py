"""Rooted term graphs with ordered successors, and their basic theory.

A term graph is a rooted directed graph whose vertices carry labels and
whose outgoing edges form an ordered sequence matching the label arity.
This module provides reachability, sub-graphs, homomorphism (functional
bisimulation), bisimilarity, the bisimulation collapse, and isomorphism.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

Vertex = str


@dataclass(frozen=True)
class TermGraph:
    """An immutable rooted term graph.

    ``lab`` maps each vertex to its label, ``args`` to the ordered tuple of
    successor vertices (one per argument position), and ``root`` names the
    distinguished root vertex.  Arity mismatches and dangling successor
    references are rejected at construction time.
    """

    lab: Mapping[Vertex, object]
    args: Mapping[Vertex, Tuple[Vertex, ...]]
    root: Vertex

    def __post_init__(self):
        lab = dict(self.lab)
        args = {v: tuple(ws) for v, ws in self.args.items()}
        object.__setattr__(self, "lab", lab)
        object.__setattr__(self, "args", args)
        if self.root not in lab:
            raise ValueError(f"root {self.root!r} is not a vertex")
        if set(args) != set(lab):
            extra = set(args) ^ set(lab)
            raise ValueError(f"lab/args domains differ at {sorted(map(str, extra))}")
        for v, ws in args.items():
            if len(ws) != lab[v].arity:
                raise ValueError(
                    f"vertex {v!r} has {len(ws)} successors but label "
                    f"{lab[v]} has arity {lab[v].arity}"
                )
            for w in ws:
                if w not in lab:
                    raise ValueError(f"vertex {v!r} has unknown successor {w!r}")

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(self.lab)

    def __len__(self):
        return len(self.lab)


def make_graph(root: Vertex, spec: Mapping[Vertex, tuple]) -> TermGraph:
    """Convenience constructor: ``spec`` maps vertex -> (label, successors)."""
    lab = {v: s[0] for v, s in spec.items()}
    args = {v: tuple(s[1]) for v, s in spec.items()}
    return TermGraph(lab, args, root)


def reachable(g: TermGraph, start: Vertex) -> list:
    """Vertices reachable from ``start`` in breadth-first order."""
    if start not in g.lab:
        raise KeyError(f"unknown vertex {start!r}")
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g.args[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def sub_term_graph(g: TermGraph, v: Vertex) -> TermGraph:
    """The root-connected term graph induced by the vertices reachable from v."""
    keep = reachable(g, v)
    return TermGraph({u: g.lab[u] for u in keep}, {u: g.args[u] for u in keep}, v)


def check_root_connected(g: TermGraph) -> Optional[Vertex]:
    """None when every vertex is reachable from the root, else one witness."""
    seen = set(reachable(g, g.root))
    for v in g.lab:
        if v not in seen:
            return v
    return None


@dataclass(frozen=True)
class HomConflict:
    """First obstruction met while propagating a homomorphism candidate."""

    left: Vertex
    right: Vertex
    reason: str


def tg_hom_explained(g1: TermGraph, g2: TermGraph):
    """Search the unique root-to-root homomorphism g1 -> g2.

    Successor sequences are ordered, so the image of every vertex is forced
    by propagation from the root pair; the map is unique if it exists.
    Returns ``(mapping, None)`` on success and ``(None, conflict)`` with the
    first conflicting pair in breadth-first discovery order otherwise.
    """
    phi: Dict[Vertex, Vertex] = {}
    queue = deque([(g1.root, g2.root)])
    while queue:
        v, w = queue.popleft()
        if v in phi:
            if phi[v] != w:
                return None, HomConflict(v, w, f"already mapped to {phi[v]!r}")
            continue
        if g1.lab[v] != g2.lab[w]:
            return None, HomConflict(v, w, f"label {g1.lab[v]} vs {g2.lab[w]}")
        phi[v] = w
        queue.extend(zip(g1.args[v], g2.args[w]))
    bad = verify_tg_hom(g1, g2, phi)
    if bad is not None:
        return None, HomConflict(bad[0], phi.get(bad[0], g2.root), bad[1])
    return phi, None


def tg_hom(g1: TermGraph, g2: TermGraph) -> Optional[Dict[Vertex, Vertex]]:
    return tg_hom_explained(g1, g2)[0]


def verify_tg_hom(g1, g2, phi) -> Optional[tuple]:
    """Re-check a homomorphism witness; None when valid, else (vertex, why)."""
    if phi.get(g1.root) != g2.root:
        return g1.root, "root not mapped to root"
    for v in g1.lab:
        w = phi.get(v)
        if w is None:
            return v, "map is not total"
        if g1.lab[v] != g2.lab[w]:
            return v, "label not preserved"
        if tuple(phi[x] for x in g1.args[v]) != g2.args[w]:
            return v, "arguments not preserved"
    return None


def _refine(lab: Mapping, args: Mapping) -> Dict[Vertex, Vertex]:
    """Partition refinement by label, then by successor-block sequences.

    Returns the map from each vertex to its block representative.  Blocks
    are named by their lexicographically least member so that the output is
    reproducible.
    """
    block = {v: repr(lab[v]) for v in lab}
    while True:
        sig = {v: (block[v], tuple(block[w] for w in args[v])) for v in lab}
        groups: Dict[tuple, list] = {}
        for v in lab:
            groups.setdefault(sig[v], []).append(v)
        new_block = {}
        for members in groups.values():
            rep = min(members, key=str)
            for v in members:
                new_block[v] = rep
        # stable once the step no longer splits any block
        stable = True
        rep_of_old = {}
        for v in lab:
            key = block[v]
            if key in rep_of_old:
                if rep_of_old[key] != new_block[v]:
                    stable = False
                    break
            else:
                rep_of_old[key] = new_block[v]
        block = new_block
        if stable:
            return block


def tg_collapse(g: TermGraph):
    """Maximally shared form of ``g`` plus the quotient map onto it.

    The collapse is computed by partition refinement starting from the
    label partition.  It is the least homomorphic image: the quotient map
    is a homomorphism and the result is minimal up to isomorphism.
    """
    block = _refine(g.lab, g.args)
    reps = sorted(set(block.values()), key=str)
    lab = {r: g.lab[r] for r in reps}
    args = {r: tuple(block[w] for w in g.args[r]) for r in reps}
    return TermGraph(lab, args, block[g.root]), block


def disjoint_union(g1: TermGraph, g2: TermGraph, tag1="1:", tag2="2:"):
    """Tag and merge two graphs; returns (lab, args, root1, root2)."""
    lab = {tag1 + v: g1.lab[v] for v in g1.lab}
    args = {tag1 + v: tuple(tag1 + w for w in g1.args[v]) for v in g1.lab}
    lab.update({tag2 + v: g2.lab[v] for v in g2.lab})
    args.update({tag2 + v: tuple(tag2 + w for w in g2.args[v]) for v in g2.lab})
    return lab, args, tag1 + g1.root, tag2 + g2.root


def tg_bisimilar(g1: TermGraph, g2: TermGraph) -> bool:
    """True when the two roots are bisimilar.

    Decided by refining the disjoint union and comparing root blocks,
    which coincides with comparing the two collapses up to isomorphism.
    """
    lab, args, r1, r2 = disjoint_union(g1, g2)
    block = _refine(lab, args)
    return block[r1] == block[r2]


def tg_isomorphic(g1: TermGraph, g2: TermGraph) -> Optional[Dict[Vertex, Vertex]]:
    """The unique root-preserving isomorphism, or None.

    Because successors are ordered, isomorphism of rooted term graphs
    reduces to one synchronized walk from the root pair plus a
    bijectivity check.
    """
    if len(g1) != len(g2):
        return None
    fwd: Dict[Vertex, Vertex] = {}
    bwd: Dict[Vertex, Vertex] = {}
    queue = deque([(g1.root, g2.root)])
    while queue:
        v, w = queue.popleft()
        if v in fwd or w in bwd:
            if fwd.get(v) != w or bwd.get(w) != v:
                return None
            continue
        if g1.lab[v] != g2.lab[w]:
            return None
        fwd[v] = w
        bwd[w] = v
        queue.extend(zip(g1.args[v], g2.args[w]))
    if len(fwd) != len(g1):
        return None
    return fwd
