"""Textual formats for specifications and first-order graphs, plus DOT.

Specification documents::

    atomic lam/1, app/2, v/0;
    root n;
    def n/0 { a: out(b); b: lam(c); c: app(d, e); d: f1(x); x: v; e: v; }
    def f1/1 { a: out(b); b: lam(c); c: app(d, c); d: app(e, w); e: in 1; w: v; }

First-order documents::

    tg { root a; a: out_r(b); b: c(d); d: in_r(a); }

Vertex names are local to a document; printing renames them, so parse
and print are mutually inverse only up to vertex renaming.
"""

from __future__ import annotations

import re
from collections import deque
from typing import Dict, List, Optional, Tuple

from .graph import TermGraph, reachable
from .labels import Atomic, Input, Nested, Output
from .firstorder import FO_INPUT, ROOT_INPUT, ROOT_OUTPUT, FoInput, PrimedConst, RootInput, RootOutput
from .rgs import (
    DependencyArs,
    NtgSignature,
    Rgs,
    Violation,
    dependency_ars,
    validate_rgs,
)
from .sntg import Sntg


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ValidationError(ValueError):
    def __init__(self, violations: List[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<nat>\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_@.']*)
      | (?P<punct>[{}():,;/])
    """,
    re.VERBOSE,
)


class _Tokens:
    def __init__(self, text: str):
        self.toks: List[Tuple[str, str, int]] = []
        line = 1
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise ParseError(line, f"unexpected character {text[pos]!r}")
            kind = m.lastgroup
            value = m.group()
            if kind not in ("ws", "comment"):
                self.toks.append((kind, value, line))
            line += value.count("\n")
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.toks):
            return self.toks[self.i]
        last_line = self.toks[-1][2] if self.toks else 1
        return ("eof", "", last_line)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, got, line = self.next()
        if got != value:
            raise ParseError(line, f"expected {value!r}, found {got or 'end of input'!r}")
        return line

    def expect_kind(self, kind: str, what: str):
        k, got, line = self.next()
        if k != kind:
            raise ParseError(line, f"expected {what}, found {got or 'end of input'!r}")
        return got, line


def _parse_lines(toks: _Tokens, stop: str):
    """Parse ``ID : LBL (args)? ;`` lines until ``stop``; labels stay raw."""
    lines = []
    while True:
        kind, value, line = toks.peek()
        if value == stop:
            toks.next()
            return lines
        if kind == "eof":
            raise ParseError(line, f"expected {stop!r} before end of input")
        vid, line = toks.expect_kind("name", "a vertex name")
        toks.expect(":")
        lkind, lvalue, lline = toks.next()
        if lkind not in ("name",):
            raise ParseError(lline, f"expected a label, found {lvalue!r}")
        nat = None
        if lvalue == "in":
            k, v, nline = toks.peek()
            if k == "nat":
                toks.next()
                nat = int(v)
        succ: List[str] = []
        k, v, _ = toks.peek()
        if v == "(":
            toks.next()
            while True:
                sid, _ = toks.expect_kind("name", "a vertex name")
                succ.append(sid)
                k, v, pline = toks.next()
                if v == ")":
                    break
                if v != ",":
                    raise ParseError(pline, f"expected ',' or ')', found {v!r}")
        toks.expect(";")
        lines.append((vid, lvalue, nat, succ, line))


def parse_rgs(text: str) -> Rgs:
    """Parse a specification document.

    Raises ParseError for syntax and arity problems, ValidationError when
    the parsed specification breaks a well-formedness invariant.
    """
    toks = _Tokens(text)
    toks.expect("atomic")
    atomic: Dict[str, int] = {}
    if toks.peek()[1] == ";":  # signatures without atomic symbols are legal
        toks.next()
    else:
        atomic.update(_parse_signature_items(toks))
    declared_root = _parse_root_decl(toks)
    return _parse_definitions(toks, atomic, declared_root)


def _parse_signature_items(toks: _Tokens) -> Dict[str, int]:
    atomic: Dict[str, int] = {}
    while True:
        name, line = toks.expect_kind("name", "a symbol name")
        toks.expect("/")
        ar, _ = toks.expect_kind("nat", "an arity")
        if name in atomic:
            raise ParseError(line, f"atomic symbol {name!r} declared twice")
        atomic[name] = int(ar)
        k, v, _ = toks.next()
        if v == ";":
            return atomic
        if v != ",":
            raise ParseError(line, f"expected ',' or ';' after {name!r}")


def _parse_root_decl(toks: _Tokens) -> Optional[str]:
    if toks.peek()[1] != "root":
        return None
    toks.next()
    declared_root, _ = toks.expect_kind("name", "a symbol name")
    toks.expect(";")
    return declared_root


def _parse_definitions(toks: _Tokens, atomic: Dict[str, int], declared_root: Optional[str]) -> Rgs:
    defs: Dict[str, Tuple[int, list]] = {}
    order: List[str] = []
    while toks.peek()[1] == "def":
        toks.next()
        name, line = toks.expect_kind("name", "a symbol name")
        toks.expect("/")
        ar, _ = toks.expect_kind("nat", "an arity")
        toks.expect("{")
        body_lines = _parse_lines(toks, "}")
        if name in defs:
            raise ParseError(line, f"symbol {name!r} defined twice")
        if name in atomic:
            raise ParseError(line, f"symbol {name!r} is declared atomic")
        defs[name] = (int(ar), body_lines)
        order.append(name)
    if toks.peek()[0] != "eof":
        raise ParseError(toks.peek()[2], f"unexpected {toks.peek()[1]!r}")
    if not defs:
        raise ParseError(toks.peek()[2], "a specification needs at least one definition")

    nested = {name: ar for name, (ar, _) in defs.items()}
    if declared_root is None:
        nullary = [name for name in order if nested[name] == 0]
        if not nullary:
            raise ValidationError([Violation(None, None, "no nullary definition to act as root")])
        declared_root = nullary[0]
    if declared_root not in nested:
        raise ValidationError([Violation(None, None, f"root symbol {declared_root!r} is not defined")])

    rec: Dict[str, TermGraph] = {}
    pending: List[Violation] = []
    for name in order:
        _, body_lines = defs[name]
        lab: Dict[str, object] = {}
        args: Dict[str, tuple] = {}
        out_vertices: List[str] = []
        for vid, lvalue, nat, succ, line in body_lines:
            if vid in lab:
                raise ParseError(line, f"vertex {vid!r} defined twice")
            if lvalue == "out":
                label = Output()
                out_vertices.append(vid)
            elif lvalue == "in":
                if nat is None:
                    raise ParseError(line, "'in' needs an index in a specification body")
                label = Input(nat)
            elif lvalue in atomic:
                label = Atomic(lvalue, atomic[lvalue])
            elif lvalue in nested:
                label = Nested(lvalue, nested[lvalue])
            else:
                raise ParseError(line, f"unknown symbol {lvalue!r}")
            if len(succ) != label.arity:
                raise ParseError(
                    line, f"label {lvalue!r} needs {label.arity} arguments, found {len(succ)}"
                )
            lab[vid] = label
            args[vid] = tuple(succ)
        for vid, lvalue, nat, succ, line in body_lines:
            for sid in succ:
                if sid not in lab:
                    raise ParseError(line, f"unknown vertex {sid!r}")
        if len(out_vertices) == 1:
            root = out_vertices[0]
        else:
            pending.append(
                Violation(name, None, f"body has {len(out_vertices)} output vertices, expected 1")
            )
            root = out_vertices[0] if out_vertices else body_lines[0][0]
        rec[name] = TermGraph(lab, args, root)

    try:
        sig = NtgSignature(atomic, nested, declared_root)
        r = Rgs(sig, rec)
    except ValueError as e:
        raise ValidationError(pending + [Violation(None, None, str(e))])
    problems = pending + validate_rgs(r)
    if problems:
        raise ValidationError(problems)
    return r


def _body_discovery_order(g: TermGraph) -> List[str]:
    order = reachable(g, g.root)
    rest = sorted((v for v in g.lab if v not in set(order)), key=str)
    return order + rest


def _definition_order(r: Rgs, deps: Optional[DependencyArs] = None) -> List[str]:
    deps = deps or dependency_ars(r)
    seen = {r.root_symbol}
    order = [r.root_symbol]
    queue = deque([r.root_symbol])
    while queue:
        sym = queue.popleft()
        for step in deps.steps_from(sym):
            if step.target not in seen:
                seen.add(step.target)
                order.append(step.target)
                queue.append(step.target)
    order += sorted(s for s in r.signature.nested if s not in seen)
    return order


def _label_text(lbl) -> str:
    if isinstance(lbl, Output):
        return "out"
    if isinstance(lbl, Input):
        return f"in {lbl.index}"
    return lbl.name


def print_rgs(r: Rgs) -> str:
    """Deterministic document: definitions in dependency breadth-first
    order, vertices renamed in discovery order."""
    out = []
    sig = ", ".join(f"{name}/{ar}" for name, ar in sorted(r.signature.atomic.items()))
    out.append(f"atomic {sig};")
    out.append(f"root {r.root_symbol};")
    for sym in _definition_order(r):
        body = r.rec[sym]
        names = {v: f"v{i}" for i, v in enumerate(_body_discovery_order(body))}
        lines = []
        for v in _body_discovery_order(body):
            label = _label_text(body.lab[v])
            succ = ", ".join(names[w] for w in body.args[v])
            lines.append(f"  {names[v]}: {label}" + (f"({succ})" if succ else "") + ";")
        out.append(f"def {sym}/{r.signature.nested[sym]} {{")
        out.extend(lines)
        out.append("}")
    return "\n".join(out) + "\n"


def parse_fo(text: str) -> TermGraph:
    """Parse a first-order document.

    Former constants are written unprimed; a unary vertex is read back as
    a constant exactly when its successor chain of exit vertices ends in a
    root link.
    """
    toks = _Tokens(text)
    toks.expect("tg")
    toks.expect("{")
    toks.expect("root")
    root, _ = toks.expect_kind("name", "a vertex name")
    toks.expect(";")
    body_lines = _parse_lines(toks, "}")
    if toks.peek()[0] != "eof":
        raise ParseError(toks.peek()[2], f"unexpected {toks.peek()[1]!r}")

    lab: Dict[str, object] = {}
    args: Dict[str, tuple] = {}
    for vid, lvalue, nat, succ, line in body_lines:
        if vid in lab:
            raise ParseError(line, f"vertex {vid!r} defined twice")
        if nat is not None:
            raise ParseError(line, "'in' is binary in a first-order document")
        if lvalue == "out_r":
            label = ROOT_OUTPUT
        elif lvalue == "out":
            label = Output()
        elif lvalue == "in":
            label = FO_INPUT
        elif lvalue == "in_r":
            label = ROOT_INPUT
        else:
            label = Atomic(lvalue, len(succ))
        if len(succ) != label.arity and not isinstance(label, Atomic):
            raise ParseError(
                line, f"label {lvalue!r} needs {label.arity} arguments, found {len(succ)}"
            )
        lab[vid] = label
        args[vid] = tuple(succ)
    for vid, lvalue, nat, succ, line in body_lines:
        for sid in succ:
            if sid not in lab:
                raise ParseError(line, f"unknown vertex {sid!r}")
    if root not in lab:
        raise ParseError(1, f"unknown root vertex {root!r}")

    # recover constant labels: unary symbol whose successor chain of exit
    # vertices grounds out at a root link
    def chain_ends_at_root_link(v: str) -> bool:
        seen = set()
        while isinstance(lab[v], FoInput):
            if v in seen:
                return False
            seen.add(v)
            v = args[v][0]
        return isinstance(lab[v], RootInput)

    for v in list(lab):
        lbl = lab[v]
        if isinstance(lbl, Atomic) and lbl.arity == 1 and chain_ends_at_root_link(args[v][0]):
            lab[v] = PrimedConst(lbl.name)
    return TermGraph(lab, args, root)


def print_fo(g: TermGraph) -> str:
    """Deterministic single-block document; constants written unprimed."""
    names = {v: f"n{i}" for i, v in enumerate(_body_discovery_order(g))}
    lines = [f"tg {{", f"  root {names[g.root]};"]
    for v in _body_discovery_order(g):
        lbl = g.lab[v]
        if isinstance(lbl, RootOutput):
            text = "out_r"
        elif isinstance(lbl, Output):
            text = "out"
        elif isinstance(lbl, FoInput):
            text = "in"
        elif isinstance(lbl, RootInput):
            text = "in_r"
        else:
            text = lbl.name
        succ = ", ".join(names[w] for w in g.args[v])
        lines.append(f"  {names[v]}: {text}" + (f"({succ})" if succ else "") + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(value, graph_name: str = "G") -> str:
    """Render a specification, a structural representation or a
    first-order graph as a DOT digraph.

    Definitions become clusters; argument edges are solid, call and
    return links dashed, back-links of exit vertices dotted.  The output
    is deterministic.
    """
    if isinstance(value, Rgs):
        return _dot_rgs(value, graph_name)
    if isinstance(value, Sntg):
        return _dot_sntg(value, graph_name)
    if isinstance(value, TermGraph):
        return _dot_fo(value, graph_name)
    raise TypeError(f"cannot render {type(value).__name__}")


def _dot_label(lbl) -> str:
    if isinstance(lbl, PrimedConst):
        return lbl.name + "'"
    if isinstance(lbl, FoInput):
        return "i"
    if isinstance(lbl, RootInput):
        return "i_r"
    if isinstance(lbl, RootOutput):
        return "o_r"
    if isinstance(lbl, Output):
        return "o"
    if isinstance(lbl, Input):
        return f"i{lbl.index}"
    return lbl.name


def _dot_rgs(r: Rgs, graph_name: str) -> str:
    deps = dependency_ars(r)
    order = _definition_order(r, deps)
    node: Dict[tuple, str] = {}
    for ci, sym in enumerate(order):
        for vi, v in enumerate(_body_discovery_order(r.rec[sym])):
            node[(sym, v)] = f"c{ci}_v{vi}"
    lines = [f"digraph {graph_name} {{"]
    lines.append('  __start__ [shape=point, label=""];')
    lines.append(f'  __root__ [label="{_dot_escape(r.root_symbol)}", shape=diamond];')
    lines.append("  __start__ -> __root__;")
    for ci, sym in enumerate(order):
        body = r.rec[sym]
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append(f'    label="{_dot_escape(sym)}/{r.signature.nested[sym]}";')
        for v in _body_discovery_order(body):
            shape = ", shape=diamond" if isinstance(body.lab[v], Nested) else ""
            lines.append(
                f'    {node[(sym, v)]} [label="{_dot_escape(_dot_label(body.lab[v]))}"{shape}];'
            )
        for v in _body_discovery_order(body):
            for w in body.args[v]:
                lines.append(f"    {node[(sym, v)]} -> {node[(sym, w)]};")
        lines.append("  }")
    # call links: the synthetic root occurrence plus every occurrence vertex
    lines.append(f"  __root__ -> {node[(r.root_symbol, r.rec[r.root_symbol].root)]} [style=dashed];")
    for step in deps.steps:
        target_root = node[(step.target, r.rec[step.target].root)]
        lines.append(f"  {node[(step.source, step.vertex)]} -> {target_root} [style=dashed];")
    # return links: from each input vertex to the matching occurrence successor
    for step in deps.steps:
        body = r.rec[step.target]
        occ_args = r.rec[step.source].args[step.vertex]
        for v in _body_discovery_order(body):
            lbl = body.lab[v]
            if isinstance(lbl, Input) and lbl.index <= len(occ_args):
                tgt = node[(step.source, occ_args[lbl.index - 1])]
                lines.append(f"  {node[(step.target, v)]} -> {tgt} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_sntg(s: Sntg, graph_name: str) -> str:
    g = s.tg
    order = sorted(g.lab, key=str)
    node = {v: f"n{i}" for i, v in enumerate(order)}
    # group bodies by the occurrence vertex that opens them
    scopes: Dict[str, List[str]] = {}
    top: List[str] = []
    for v in order:
        chain = s.anc[v]
        if chain:
            scopes.setdefault(chain[-1], []).append(v)
        else:
            top.append(v)
    lines = [f"digraph {graph_name} {{"]
    lines.append('  __start__ [shape=point, label=""];')
    lines.append(f"  __start__ -> {node[g.root]};")
    for v in top:
        shape = ", shape=diamond" if v in s.call else ""
        lines.append(f'  {node[v]} [label="{_dot_escape(_dot_label(g.lab[v]))}"{shape}];')
    for ci, occ in enumerate(sorted(scopes, key=str)):
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append(f'    label="{_dot_escape(str(g.lab[occ]))}";')
        for v in scopes[occ]:
            shape = ", shape=diamond" if v in s.call else ""
            lines.append(f'    {node[v]} [label="{_dot_escape(_dot_label(g.lab[v]))}"{shape}];')
        lines.append("  }")
    for v in order:
        for w in g.args[v]:
            lines.append(f"  {node[v]} -> {node[w]};")
    for v in order:
        if v in s.call:
            lines.append(f"  {node[v]} -> {node[s.call[v]]} [style=dashed];")
        if v in s.ret:
            lines.append(f"  {node[v]} -> {node[s.ret[v]]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_fo(g: TermGraph, graph_name: str) -> str:
    order = _body_discovery_order(g)
    node = {v: f"n{i}" for i, v in enumerate(order)}
    lines = [f"digraph {graph_name} {{"]
    lines.append('  __start__ [shape=point, label=""];')
    lines.append(f"  __start__ -> {node[g.root]};")
    for v in order:
        lines.append(f'  {node[v]} [label="{_dot_escape(_dot_label(g.lab[v]))}"];')
    for v in order:
        lbl = g.lab[v]
        for i, w in enumerate(g.args[v]):
            backlink = (isinstance(lbl, FoInput) and i == 1) or isinstance(lbl, RootInput)
            style = " [style=dotted]" if backlink else ""
            lines.append(f"  {node[v]} -> {node[w]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
