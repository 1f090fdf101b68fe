"""Core data model for constrained Horn clause benchmarks.

Sorts, terms, clauses, and benchmarks are immutable values shared by the
parser, printer, normalizer, classifier, and oracle.  A clause is a
universally quantified implication: a conjunction of predicate atoms plus a
theory constraint implying a head.  Heads are normally a single atom or the
distinguished query head ``false``; two extra internal variants (ConjHead,
BoolHead) carry not-yet-conformant Horn-like input through the normalizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union


# --- sorts ---


class Sort:
    """Base class for sorts; concrete sorts are immutable dataclasses."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class BoolSort(Sort):
    pass


@dataclass(frozen=True, slots=True)
class IntSort(Sort):
    pass


@dataclass(frozen=True, slots=True)
class RealSort(Sort):
    pass


@dataclass(frozen=True, slots=True)
class ArraySort(Sort):
    index: Sort
    element: Sort


@dataclass(frozen=True, slots=True)
class DatatypeSort(Sort):
    name: str


BOOL = BoolSort()
INT = IntSort()
REAL = RealSort()


# --- terms ---


class Term:
    """Base class for terms; every term node carries its sort."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    sort: Sort


@dataclass(frozen=True, slots=True)
class IntLit(Term):
    value: int
    sort: Sort = INT


@dataclass(frozen=True, slots=True)
class RealLit(Term):
    value: Fraction
    sort: Sort = REAL


@dataclass(frozen=True, slots=True)
class BoolLit(Term):
    value: bool
    sort: Sort = BOOL


@dataclass(frozen=True, slots=True)
class App(Term):
    """Application of an interpreted symbol, predicate, constructor, or
    selector.  ``is_tester`` marks datatype tester applications, where
    ``symbol`` holds the constructor name and the application prints as
    ``((_ is C) t)``."""

    symbol: str
    args: tuple[Term, ...]
    sort: Sort
    is_tester: bool = False


TRUE = BoolLit(True)
FALSE = BoolLit(False)


# --- declarations ---


@dataclass(frozen=True, slots=True)
class PredicateDecl:
    name: str
    arg_sorts: tuple[Sort, ...]

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True, slots=True)
class Constructor:
    name: str
    selectors: tuple[tuple[str, Sort], ...]


@dataclass(frozen=True, slots=True)
class DatatypeDecl:
    name: str
    constructors: tuple[Constructor, ...]


# --- clauses ---


@dataclass(frozen=True, slots=True)
class Atom:
    predicate: PredicateDecl
    args: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class QueryFalse:
    """Distinguished clause head marking a query (head ``false``)."""


@dataclass(frozen=True, slots=True)
class ConjHead:
    """Conjunction of atoms in head position; non-conformant transit state
    eliminated by head splitting in the normalizer."""

    atoms: tuple[Atom, ...]


@dataclass(frozen=True, slots=True)
class BoolHead:
    """Arbitrary Bool term in head position; non-conformant and not
    translatable by the committed transformations."""

    term: Term


QUERY_FALSE = QueryFalse()

Head = Union[Atom, QueryFalse, ConjHead, BoolHead]


@dataclass(frozen=True, slots=True)
class Clause:
    bound_vars: tuple[tuple[str, Sort], ...]
    body_atoms: tuple[Atom, ...]
    constraint: Term
    head: Head

    @property
    def is_linear(self) -> bool:
        return len(self.body_atoms) <= 1

    @property
    def is_query(self) -> bool:
        return isinstance(self.head, QueryFalse)


@dataclass(frozen=True, slots=True)
class Origin:
    repository: str = ""
    path: str = ""


@dataclass(frozen=True, slots=True)
class Benchmark:
    logic_tag: str
    datatypes: tuple[DatatypeDecl, ...]
    predicates: tuple[PredicateDecl, ...]
    clauses: tuple[Clause, ...]
    origin: Origin = field(default_factory=Origin)
    checksum: Optional[str] = None
    check_sat_count: int = 1

    def predicate(self, name: str) -> PredicateDecl:
        for p in self.predicates:
            if p.name == name:
                return p
        raise KeyError(name)


# --- reserved / interpreted symbols ---

LOGIC_SYMBOLS = frozenset({"and", "or", "not", "=>", "=", "distinct", "ite"})
INT_ARITH_SYMBOLS = frozenset({"+", "-", "*", "div", "mod", "abs"})
REAL_ONLY_SYMBOLS = frozenset({"/"})
COMPARE_SYMBOLS = frozenset({"<", "<=", ">", ">="})
ARRAY_SYMBOLS = frozenset({"select", "store"})

RESERVED_SYMBOLS = (
    LOGIC_SYMBOLS
    | INT_ARITH_SYMBOLS
    | REAL_ONLY_SYMBOLS
    | COMPARE_SYMBOLS
    | ARRAY_SYMBOLS
    | frozenset({"true", "false", "forall", "exists", "let", "as", "_", "is", "!"})
)


# --- operations ---


def count_nonlinear_clauses(b: Benchmark) -> int:
    """Number of clauses with two or more body atoms."""
    return sum(1 for c in b.clauses if not c.is_linear)


def predicate_arity_map(b: Benchmark) -> dict[str, int]:
    """One entry per declared predicate, mapping name to arity."""
    return {p.name: p.arity for p in b.predicates}


def iter_subterms(*roots: Term) -> Iterator[Term]:
    """Preorder traversal of one or more terms, left to right, iterative so
    deeply nested input cannot overflow the interpreter stack."""
    stack = list(reversed(roots))
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, App):
            stack.extend(reversed(t.args))


def clause_terms(c: Clause) -> Iterator[Term]:
    """All top-level terms of a clause: atom arguments, the constraint, and
    head arguments (head term for the internal head variants)."""
    for atom in c.body_atoms:
        yield from atom.args
    yield c.constraint
    head = c.head
    if isinstance(head, Atom):
        yield from head.args
    elif isinstance(head, ConjHead):
        for atom in head.atoms:
            yield from atom.args
    elif isinstance(head, BoolHead):
        yield head.term


def and_spine(t: Term) -> list[Term]:
    """Flatten nested ``and`` applications into a list of conjuncts."""
    out: list[Term] = []
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, App) and cur.symbol == "and":
            stack.extend(reversed(cur.args))
        else:
            out.append(cur)
    # stack pops reversed groups in order; out is already left-to-right
    return out


def conjoin(terms: list[Term]) -> Term:
    """Conjunction of Bool terms: flattens nested ands, drops literal true,
    returns true for the empty conjunction and the sole conjunct alone."""
    flat: list[Term] = []
    for t in terms:
        for c in and_spine(t):
            if c != TRUE:
                flat.append(c)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return App("and", tuple(flat), BOOL)


def fold_term(t: Term, fn) -> object:
    """Iterative post-order fold: ``fn(term, child_values)`` is called for
    every node with the already-folded argument values."""
    results: list[object] = []
    work: list[tuple[bool, Term]] = [(False, t)]
    while work:
        done, cur = work.pop()
        if done or not isinstance(cur, App) or not cur.args:
            if isinstance(cur, App) and cur.args:
                n = len(cur.args)
                children = results[-n:]
                del results[-n:]
                results.append(fn(cur, children))
            else:
                results.append(fn(cur, []))
        else:
            work.append((True, cur))
            work.extend((False, a) for a in reversed(cur.args))
    return results[0]
