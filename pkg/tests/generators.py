"""Seeded random generators for specifications, mutations and quotients.

All random specifications draw atomic symbols from one shared pool so
that any two generated values have a common atomic signature, which the
comparison operations require.

Bodies are kept grounded: every vertex reaches an input vertex, a
constant, or an occurrence with a constant somewhere below it.  This
makes the flattened graphs fully back-linked, the fragment on which the
plain collapse provably stays inside the representing class.  Ungrounded
specifications (with scope-local cycles that never exit) are legal and
covered by dedicated tests, but would make closure properties of the
plain collapse fail by design rather than by bug.
"""

import random

from ntg import (
    NtgSignature,
    Rgs,
    TermGraph,
    is_ntg,
    tg_collapse,
    validate_rgs,
)
from ntg.labels import Atomic, Input, Nested, Output

ATOM_POOL = {"ca": 0, "cb": 0, "u0": 1, "u1": 1, "b0": 2, "b1": 2, "t0": 3}
CONSTANTS = [name for name, ar in ATOM_POOL.items() if ar == 0]


def _raw_body(rng: random.Random, arity: int, children, extra_budget, back_edges) -> TermGraph:
    labels = {"o": Output()}
    for j in range(1, arity + 1):
        labels[f"i{j}"] = Input(j)
    for k, (child, child_ar) in enumerate(children):
        labels[f"occ{k}"] = Nested(child, child_ar)
    for k in range(rng.randrange(extra_budget + 1)):
        name = rng.choice(sorted(ATOM_POOL))
        labels[f"e{k}"] = Atomic(name, ATOM_POOL[name])
    if len(labels) == 1:
        labels["e0"] = Atomic(rng.choice(CONSTANTS), 0)
    non_root = [v for v in labels if v != "o"]
    filler = 0
    while 1 + sum(labels[v].arity for v in non_root) < len(non_root):
        name = rng.choice(["b0", "b1"])
        labels[f"fill{filler}"] = Atomic(name, ATOM_POOL[name])
        non_root.append(f"fill{filler}")
        filler += 1

    # random spanning arborescence: high-arity vertices first so open
    # slots never run out, then leaves, then close leftover slots
    inner = [v for v in non_root if labels[v].arity > 0]
    leaves = [v for v in non_root if labels[v].arity == 0]
    rng.shuffle(inner)
    rng.shuffle(leaves)
    slots = [("o", 0)]
    chosen = {}
    connected = ["o"]
    for v in inner + leaves:
        pos = rng.randrange(len(slots))
        slot = slots.pop(pos)
        chosen[slot] = v
        connected.append(v)
        for i in range(labels[v].arity):
            slots.append((v, i))
    fresh = 0
    for slot in slots:
        if back_edges:
            chosen[slot] = rng.choice([v for v in connected if v != "o"])
        else:
            name = f"k{fresh}"
            fresh += 1
            labels[name] = Atomic(rng.choice(CONSTANTS), 0)
            chosen[slot] = name

    args = {v: [None] * labels[v].arity for v in labels}
    for (v, i), w in chosen.items():
        args[v][i] = w
    return TermGraph(labels, {v: tuple(ws) for v, ws in args.items()}, "o")


def _grounded(g: TermGraph, const_below) -> bool:
    """Every vertex reaches an input, a constant, or a constant-carrying
    occurrence (reverse reachability from those sources)."""
    sources = []
    rev = {v: [] for v in g.lab}
    for v in g.lab:
        lbl = g.lab[v]
        if isinstance(lbl, Input):
            sources.append(v)
        elif isinstance(lbl, Atomic) and lbl.arity == 0:
            sources.append(v)
        elif isinstance(lbl, Nested) and const_below.get(lbl.name, False):
            sources.append(v)
        for w in g.args[v]:
            rev[w].append(v)
    seen = set(sources)
    stack = list(sources)
    while stack:
        x = stack.pop()
        for p in rev[x]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return len(seen) == len(g.lab)


def _carries_const(g: TermGraph, const_below) -> bool:
    return any(
        (isinstance(lbl, Atomic) and lbl.arity == 0)
        or (isinstance(lbl, Nested) and const_below.get(lbl.name, False))
        for lbl in g.lab.values()
    )


def random_body(rng: random.Random, arity: int, children, extra_budget=5, const_below=None) -> TermGraph:
    """A random grounded body; falls back to a cycle-free build when
    rejection sampling takes too long."""
    const_below = const_below or {}
    for _ in range(20):
        g = _raw_body(rng, arity, children, extra_budget, back_edges=True)
        if _grounded(g, const_below):
            return g
    return _raw_body(rng, arity, children, extra_budget, back_edges=False)


def _finish(rng, names, arities, occurrences) -> Rgs:
    """Build bodies bottom-up so constant information is available."""
    rec = {}
    const_below = {}
    for name in reversed(names):
        body = random_body(rng, arities[name], occurrences[name], const_below=const_below)
        rec[name] = body
        const_below[name] = _carries_const(body, const_below)
    r = Rgs(NtgSignature(dict(ATOM_POOL), arities, "s0"), {n: rec[n] for n in names})
    assert not validate_rgs(r)
    return r


def random_ntg(rng: random.Random, max_defs=4, max_arity=2, extra_budget=5) -> Rgs:
    """A random grounded tree-shaped specification."""
    count = rng.randrange(1, max_defs + 1)
    names = [f"s{i}" for i in range(count)]
    arities = {"s0": 0}
    occurrences = {name: [] for name in names}
    for i in range(1, count):
        arities[names[i]] = rng.randrange(0, max_arity + 1)
        par = names[rng.randrange(0, i)]
        occurrences[par].append((names[i], arities[names[i]]))
    r = _finish(rng, names, arities, occurrences)
    assert is_ntg(r).ok
    return r


def random_acyclic_rgs(rng: random.Random, max_defs=4, max_arity=2) -> Rgs:
    """A random grounded specification whose dependencies form a DAG,
    possibly with shared symbols (several occurrences of one definition)."""
    count = rng.randrange(1, max_defs + 1)
    names = [f"s{i}" for i in range(count)]
    arities = {"s0": 0}
    occurrences = {name: [] for name in names}
    for i in range(1, count):
        arities[names[i]] = rng.randrange(0, max_arity + 1)
        for _ in range(rng.randrange(1, 3)):
            par = names[rng.randrange(0, i)]
            occurrences[par].append((names[i], arities[names[i]]))
    return _finish(rng, names, arities, occurrences)


def mutate_ntg(rng: random.Random, r: Rgs, tries=40) -> Rgs:
    """A near-copy: one label swap, argument swap or edge redirect,
    revalidated so the result is again a tree-shaped specification."""
    for _ in range(tries):
        sym = rng.choice(sorted(r.rec))
        body = r.rec[sym]
        vs = sorted(body.lab, key=str)
        lab = dict(body.lab)
        args = {v: list(body.args[v]) for v in vs}
        kind = rng.randrange(3)
        v = rng.choice(vs)
        if kind == 0:
            if not isinstance(lab[v], Atomic):
                continue
            same_arity = [n for n, a in ATOM_POOL.items() if a == lab[v].arity and n != lab[v].name]
            if not same_arity:
                continue
            lab[v] = Atomic(rng.choice(same_arity), lab[v].arity)
        elif kind == 1:
            if len(args[v]) < 2:
                continue
            i, j = rng.sample(range(len(args[v])), 2)
            args[v][i], args[v][j] = args[v][j], args[v][i]
        else:
            if not args[v]:
                continue
            candidates = [w for w in vs if w != body.root and not isinstance(lab[w], Nested)]
            if not candidates:
                continue
            args[v][rng.randrange(len(args[v]))] = rng.choice(candidates)
        try:
            new_body = TermGraph(lab, {u: tuple(ws) for u, ws in args.items()}, body.root)
            mutated = Rgs(r.signature, {**r.rec, sym: new_body})
        except ValueError:
            continue
        if not validate_rgs(mutated) and is_ntg(mutated).ok:
            return mutated
    return r


def random_quotient(rng: random.Random, g: TermGraph):
    """A proper homomorphic image of ``g``: the smallest stable partition
    identifying one randomly chosen bisimilar pair, built by congruence
    closure; None when ``g`` is already fully collapsed."""
    _, block = tg_collapse(g)
    classes = {}
    for v in sorted(g.lab, key=str):
        classes.setdefault(block[v], []).append(v)
    mergeable = [vs for vs in classes.values() if len(vs) > 1]
    if not mergeable:
        return None
    group = rng.choice(mergeable)
    u, v = rng.sample(group, 2)

    parent = {x: x for x in g.lab}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = [(u, v)]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        assert g.lab[ra] == g.lab[rb]
        parent[rb] = ra
        work.extend(zip(g.args[ra], g.args[rb]))

    rep = {x: min((y for y in g.lab if find(y) == find(x)), key=str) for x in g.lab}
    reps = sorted(set(rep.values()), key=str)
    quotient = TermGraph(
        {r: g.lab[r] for r in reps},
        {r: tuple(rep[w] for w in g.args[r]) for r in reps},
        rep[g.root],
    )
    return quotient, rep
