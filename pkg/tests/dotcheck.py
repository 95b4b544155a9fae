"""A tiny structural checker for the DOT subset the library emits."""

import re

_ID = r'(?:[A-Za-z_][A-Za-z0-9_]*|"(?:[^"\\]|\\.)*")'
_ATTR = rf"{_ID}\s*=\s*{_ID}"
_ATTRS = rf"\s*\[\s*{_ATTR}(?:\s*,\s*{_ATTR})*\s*\]"
_NODE = re.compile(rf"^{_ID}(?:{_ATTRS})?;$")
_EDGE = re.compile(rf"^{_ID}\s*->\s*{_ID}(?:{_ATTRS})?;$")
_SUBGRAPH = re.compile(rf"^subgraph\s+{_ID}\s*\{{$")
_LABEL = re.compile(rf"^label\s*=\s*{_ID};$")


def check_dot(text: str):
    """Returns a list of problems; empty means the text parses."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    problems = []
    if not lines or not re.match(rf"^digraph\s+{_ID}\s*\{{$", lines[0]):
        return ["missing digraph header"]
    depth = 1
    for ln in lines[1:]:
        if ln == "}":
            depth -= 1
            if depth < 0:
                problems.append("unbalanced braces")
            continue
        if _SUBGRAPH.match(ln):
            depth += 1
            continue
        if _LABEL.match(ln) or _NODE.match(ln) or _EDGE.match(ln):
            continue
        problems.append(f"unrecognized statement: {ln!r}")
    if depth != 0:
        problems.append("unbalanced braces at end")
    return problems
