#!/usr/bin/env python3
"""Recursive graph specifications: building, validating, classifying.

A specification maps defined symbols to term-graph bodies.  Each body is
rooted at a unary output vertex and contains one nullary input vertex per
parameter.  Whether the specification is a nested term graph depends only
on the dependency structure between definitions: it must be a tree.
"""

import pathlib
import sys

try:
    import ntg
except ImportError:
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))
    import ntg

from ntg import (
    dependency_ars,
    is_ntg,
    parse_rgs,
    print_rgs,
    unfold_to_ntg,
    validate_rgs,
)

DATA = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"

# The running example: a lambda-letrec-style term encoded with atomic
# symbols lam/1, app/2, v/0 and four definitions n, f1, f2, g.
n = parse_rgs((DATA / "n.rgs").read_text())
print("definitions:", sorted(n.signature.nested.items()))
print("well-formed:", validate_rgs(n) == [])

print("\ndependency steps (one per occurrence of a defined symbol):")
for step in dependency_ars(n).steps:
    print(f"  {step.source} -> {step.target}   (vertex {step.vertex})")
print("tree-shaped:", is_ntg(n).ok)

# A specification that uses one definition twice is not tree-shaped ...
r0 = parse_rgs((DATA / "r0.rgs").read_text())
print("\nshared specification rejected:", is_ntg(r0).defect)

# ... but unfolding duplicates the shared definition, one fresh symbol
# per access path, producing an equivalent tree-shaped specification.
unfolded = unfold_to_ntg(r0).rgs
print("unfolded symbols:", sorted(unfolded.signature.nested))

# Cyclic dependencies denote infinitely deep nesting; they can only be
# unrolled up to a chosen depth, marking the cut calls.
r1 = parse_rgs((DATA / "r1.rgs").read_text())
print("\ncyclic specification rejected:", is_ntg(r1).defect)
res = unfold_to_ntg(r1, depth=2)
print(f"unrolled to depth 2 with {res.cuts} cut call(s):\n")
print(print_rgs(res.rgs))
