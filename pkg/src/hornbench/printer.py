"""Deterministic canonical printer.

The canonical form is the basis for checksums, so the output is bit-exact:
one command per line, LF endings, single spaces, no trailing whitespace.
Bound variables are renamed x0, x1, ... in order of first appearance in the
clause body (unused binders follow in declaration order), which makes the
printed bytes invariant under alpha-renaming.
"""

from __future__ import annotations

from .model import (
    App,
    ArraySort,
    Atom,
    Benchmark,
    BoolHead,
    BoolLit,
    Clause,
    ConjHead,
    DatatypeSort,
    IntLit,
    QueryFalse,
    RealLit,
    Sort,
    TRUE,
    Term,
    Var,
    and_spine,
    iter_subterms,
    clause_terms,
)
from .sexpr import print_symbol


def render_sort(sort: Sort) -> str:
    out: list[str] = []
    stack: list[object] = [sort]
    while stack:
        it = stack.pop()
        if isinstance(it, str):
            out.append(it)
        elif isinstance(it, ArraySort):
            stack.extend([")", it.element, " ", it.index, "(Array "])
        elif isinstance(it, DatatypeSort):
            out.append(print_symbol(it.name))
        else:
            out.append({"BoolSort": "Bool", "IntSort": "Int", "RealSort": "Real"}[type(it).__name__])
    return "".join(out)


def _render_term(t: Term, rename: dict[str, str]) -> str:
    out: list[str] = []
    stack: list[object] = [t]
    while stack:
        it = stack.pop()
        if isinstance(it, str):
            out.append(it)
        elif isinstance(it, Var):
            out.append(rename.get(it.name) or print_symbol(it.name))
        elif isinstance(it, IntLit):
            out.append(str(it.value) if it.value >= 0 else f"(- {-it.value})")
        elif isinstance(it, RealLit):
            v = it.value
            mag = -v if v < 0 else v
            body = f"{mag.numerator}.0" if mag.denominator == 1 else f"(/ {mag.numerator} {mag.denominator})"
            out.append(body if v >= 0 else f"(- {body})")
        elif isinstance(it, BoolLit):
            out.append("true" if it.value else "false")
        elif isinstance(it, App):
            head = f"(_ is {print_symbol(it.symbol)})" if it.is_tester else print_symbol(it.symbol)
            if not it.args:
                out.append(head)
            else:
                stack.append(")")
                for a in reversed(it.args):
                    stack.append(a)
                    stack.append(" ")
                stack.append("(" + head)
        else:
            raise TypeError(f"cannot print {it!r}")
    return "".join(out)


def _render_atom(atom: Atom, rename: dict[str, str]) -> str:
    name = print_symbol(atom.predicate.name)
    if not atom.args:
        return name
    return "(" + name + " " + " ".join(_render_term(a, rename) for a in atom.args) + ")"


def _clause_rename(clause: Clause) -> tuple[dict[str, str], list[str]]:
    """Map bound variable names to x0, x1, ... in order of first appearance;
    returns the map and the ordered original names."""
    order: list[str] = []
    seen: set[str] = set()
    for t in iter_subterms(*clause_terms(clause)):
        if isinstance(t, Var) and t.name not in seen:
            seen.add(t.name)
            order.append(t.name)
    for name, _sort in clause.bound_vars:
        if name not in seen:
            seen.add(name)
            order.append(name)
    rename = {name: f"x{i}" for i, name in enumerate(order)}
    return rename, order


def render_clause(clause: Clause) -> str:
    rename, order = _clause_rename(clause)
    elements = [_render_atom(a, rename) for a in clause.body_atoms]
    for conj in and_spine(clause.constraint):
        if conj != TRUE:
            elements.append(_render_term(conj, rename))

    head = clause.head
    if isinstance(head, QueryFalse):
        head_txt = "false"
    elif isinstance(head, Atom):
        head_txt = _render_atom(head, rename)
    elif isinstance(head, ConjHead):
        head_txt = "(and " + " ".join(_render_atom(a, rename) for a in head.atoms) + ")"
    elif isinstance(head, BoolHead):
        head_txt = _render_term(head.term, rename)
    else:
        raise TypeError(f"cannot print head {head!r}")

    if not elements:
        matrix = head_txt
    elif len(elements) == 1:
        matrix = f"(=> {elements[0]} {head_txt})"
    else:
        matrix = f"(=> (and {' '.join(elements)}) {head_txt})"

    if not clause.bound_vars:
        return matrix
    sort_of = dict(clause.bound_vars)
    binders = " ".join(f"({rename[name]} {render_sort(sort_of[name])})" for name in order)
    return f"(forall ({binders}) {matrix})"


def canonical_str(b: Benchmark) -> str:
    lines = [f"(set-logic {print_symbol(b.logic_tag) if b.logic_tag else 'HORN'})"]
    if b.datatypes:
        names = " ".join(f"({print_symbol(d.name)} 0)" for d in b.datatypes)
        bodies = []
        for d in b.datatypes:
            ctors = []
            for c in d.constructors:
                if c.selectors:
                    sels = " ".join(f"({print_symbol(n)} {render_sort(s)})" for n, s in c.selectors)
                    ctors.append(f"({print_symbol(c.name)} {sels})")
                else:
                    ctors.append(f"({print_symbol(c.name)})")
            bodies.append("(" + " ".join(ctors) + ")")
        lines.append(f"(declare-datatypes ({names}) ({' '.join(bodies)}))")
    for p in b.predicates:
        arg_txt = " ".join(render_sort(s) for s in p.arg_sorts)
        lines.append(f"(declare-fun {print_symbol(p.name)} ({arg_txt}) Bool)")
    for c in b.clauses:
        lines.append(f"(assert {render_clause(c)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def print_canonical(b: Benchmark) -> bytes:
    """Canonical byte serialization; equal benchmarks (up to alpha-renaming)
    print to equal bytes."""
    return canonical_str(b).encode("utf-8")
