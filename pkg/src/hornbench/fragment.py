"""Fragment conformance checking and normalization of Horn-like input.

Rules enforced per clause: (R1) the head is ``false`` or an atom whose
arguments are pairwise-distinct bound variables; (R2) the constraint is free
of uninterpreted predicates; (R3) body atoms match their declarations.
Benchmark level: (R4) the logic is HORN, (R5) exactly one check-sat.

Normalization applies, in order: head-argument repair (fresh variables plus
defining equations), conjunctive-head splitting, and query merging via an
auxiliary nullary predicate.  Each step preserves equisatisfiability; the
ground oracle is the independent witness used by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .model import (
    BOOL,
    App,
    Atom,
    Benchmark,
    BoolHead,
    Clause,
    ConjHead,
    PredicateDecl,
    QUERY_FALSE,
    QueryFalse,
    TRUE,
    Term,
    Var,
    conjoin,
    iter_subterms,
)


@dataclass(frozen=True, slots=True)
class Violation:
    clause_index: Optional[int]  # None for benchmark-level rules
    rule_id: str
    message: str


@dataclass(frozen=True, slots=True)
class ConformanceReport:
    violations: tuple[Violation, ...]
    query_count: int

    @property
    def conformant(self) -> bool:
        return not self.violations


@dataclass(frozen=True, slots=True)
class NormalizeOptions:
    merge_queries: bool = True
    split_conjunctive_heads: bool = True
    normalize_head_args: bool = True


DEFAULT_OPTIONS = NormalizeOptions()

FRESH_QUERY_PREDICATE_BASE = "CHC_COMP_UNUSED"


class NonTranslatableError(Exception):
    """A clause uses a construct outside the supported grammar."""

    def __init__(self, clause_index: int, reason: str):
        super().__init__(f"clause {clause_index}: {reason}")
        self.clause_index = clause_index
        self.reason = reason


def _predicate_apps(term: Term, predicate_names: frozenset[str]):
    for t in iter_subterms(term):
        if isinstance(t, App) and not t.is_tester and t.symbol in predicate_names:
            yield t


def check_fragment(b: Benchmark) -> ConformanceReport:
    """Check conformance with the competition fragment; violations are data,
    not failures."""
    violations: list[Violation] = []
    if b.logic_tag != "HORN":
        violations.append(Violation(None, "R4", f"logic is '{b.logic_tag or '(unset)'}', expected HORN"))
    if b.check_sat_count != 1:
        violations.append(Violation(None, "R5", f"expected exactly one check-sat, found {b.check_sat_count}"))

    pred_names = frozenset(p.name for p in b.predicates)
    declared = {p.name: p for p in b.predicates}
    query_count = 0
    for i, clause in enumerate(b.clauses):
        head = clause.head
        if isinstance(head, QueryFalse):
            query_count += 1
        elif isinstance(head, Atom):
            seen: set[str] = set()
            for arg in head.args:
                if not isinstance(arg, Var):
                    violations.append(Violation(i, "R1", "head argument is not a bound variable"))
                elif arg.name in seen:
                    violations.append(Violation(i, "R1", f"head argument '{arg.name}' is repeated"))
                else:
                    seen.add(arg.name)
            for arg in head.args:
                for app in _predicate_apps(arg, pred_names):
                    violations.append(Violation(i, "R2", f"predicate '{app.symbol}' occurs inside a head argument"))
        else:
            violations.append(Violation(i, "R1", "head must be false or a single predicate application"))

        for app in _predicate_apps(clause.constraint, pred_names):
            violations.append(Violation(i, "R2", f"predicate '{app.symbol}' occurs inside the constraint"))

        for atom in clause.body_atoms:
            decl = declared.get(atom.predicate.name)
            if decl is None:
                violations.append(Violation(i, "R3", f"body atom '{atom.predicate.name}' is not declared"))
                continue
            if len(atom.args) != decl.arity or tuple(a.sort for a in atom.args) != decl.arg_sorts:
                violations.append(Violation(i, "R3", f"body atom '{atom.predicate.name}' does not match its declaration"))
            for arg in atom.args:
                for app in _predicate_apps(arg, pred_names):
                    violations.append(Violation(i, "R2", f"predicate '{app.symbol}' occurs inside a body atom argument"))

    return ConformanceReport(tuple(violations), query_count)


def _fresh_names(taken: set[str], base: str = "v"):
    k = 0
    while True:
        name = f"{base}{k}"
        k += 1
        if name not in taken:
            taken.add(name)
            yield name


def _normalize_head_atom(atom: Atom, used_names: set[str], fresh) -> tuple[Atom, list[Term], list[tuple[str, object]]]:
    """Replace non-variable or repeated head arguments by fresh variables
    with defining equations."""
    new_args: list[Term] = []
    equations: list[Term] = []
    new_vars: list[tuple[str, object]] = []
    seen: set[str] = set()
    for arg in atom.args:
        if isinstance(arg, Var) and arg.name not in seen:
            seen.add(arg.name)
            new_args.append(arg)
            continue
        v = Var(next(fresh), arg.sort)
        new_args.append(v)
        new_vars.append((v.name, v.sort))
        equations.append(App("=", (v, arg), BOOL))
    return Atom(atom.predicate, tuple(new_args)), equations, new_vars


def normalize(b: Benchmark, opts: NormalizeOptions = DEFAULT_OPTIONS) -> Benchmark:
    """Translate a parsed Horn-like benchmark into the fragment.

    Raises NonTranslatableError for constructs the committed transformations
    cannot repair (non-atomic heads other than conjunctions of atoms, or
    predicates nested inside constraints).  With all options at their
    defaults the result passes check_fragment; disabling an option leaves
    the corresponding construct in place.
    """
    pred_names = frozenset(p.name for p in b.predicates)
    out_clauses: list[Clause] = []
    for i, clause in enumerate(b.clauses):
        head = clause.head
        if isinstance(head, BoolHead):
            raise NonTranslatableError(
                i, "head is not a predicate application, false, or a conjunction of predicate applications"
            )
        for root in (clause.constraint, *(a for atom in clause.body_atoms for a in atom.args)):
            for app in _predicate_apps(root, pred_names):
                raise NonTranslatableError(i, f"uninterpreted predicate '{app.symbol}' occurs inside a constraint")

        bound = list(clause.bound_vars)
        constraint = clause.constraint
        used_names = {n for n, _ in bound}
        fresh = _fresh_names(used_names)

        if opts.normalize_head_args and isinstance(head, (Atom, ConjHead)):
            atoms = head.atoms if isinstance(head, ConjHead) else (head,)
            fixed: list[Atom] = []
            eqs: list[Term] = []
            for atom in atoms:
                for arg in atom.args:
                    for app in _predicate_apps(arg, pred_names):
                        raise NonTranslatableError(i, f"uninterpreted predicate '{app.symbol}' occurs inside a head argument")
                new_atom, equations, new_vars = _normalize_head_atom(atom, used_names, fresh)
                fixed.append(new_atom)
                eqs.extend(equations)
                bound.extend(new_vars)
            if eqs:
                constraint = conjoin([constraint, *eqs])
            head = ConjHead(tuple(fixed)) if isinstance(head, ConjHead) else fixed[0]

        base = Clause(tuple(bound), clause.body_atoms, constraint, head)
        if opts.split_conjunctive_heads and isinstance(head, ConjHead):
            for atom in head.atoms:
                out_clauses.append(replace(base, head=atom))
        else:
            out_clauses.append(base)

    result = replace(b, logic_tag="HORN", clauses=tuple(out_clauses), check_sat_count=1, checksum=None)
    if opts.merge_queries:
        result = merge_queries(result)
    return result


def merge_queries(b: Benchmark) -> Benchmark:
    """Merge multiple query clauses into one by routing them through a fresh
    auxiliary nullary predicate; benchmarks with at most one query are
    returned unchanged."""
    queries = [i for i, c in enumerate(b.clauses) if c.is_query]
    if len(queries) <= 1:
        return b

    taken = {p.name for p in b.predicates}
    for d in b.datatypes:
        taken.add(d.name)
        for c in d.constructors:
            taken.add(c.name)
            taken.update(n for n, _ in c.selectors)
    name = FRESH_QUERY_PREDICATE_BASE
    k = 0
    while name in taken:
        name = f"{FRESH_QUERY_PREDICATE_BASE}{k}"
        k += 1
    aux = PredicateDecl(name, ())
    aux_atom = Atom(aux, ())

    clauses = [replace(c, head=aux_atom) if c.is_query else c for c in b.clauses]
    clauses.append(Clause((), (aux_atom,), TRUE, QUERY_FALSE))
    return replace(b, predicates=b.predicates + (aux,), clauses=tuple(clauses), checksum=None)
