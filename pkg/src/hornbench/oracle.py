"""Brute-force bounded-domain decision procedure for Horn clause benchmarks.

Instantiates every clause over all valuations of its bound variables from a
small finite domain, evaluates constraints, and computes the least fixpoint
of derivable ground atoms; unsat iff the query head becomes derivable.  A
bounded derivation of false is a real derivation, so unsat verdicts are
sound; the procedure is used as the independent test witness that the
normalizer transformations preserve equisatisfiability, never as a general
solver.  Reals and arrays are out of scope; algebraic datatype values are
enumerated up to a fixed constructor depth.

Pre-normalization constructs are given their least-model reading so the
oracle can compare a benchmark with its normalized form: a conjunctive head
derives each conjunct, a Bool head that evaluates to true is vacuous and one
that evaluates to false acts as a query, and head-atom argument terms are
evaluated under the valuation.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass
from typing import Optional

from .model import (
    App,
    ArraySort,
    Atom,
    Benchmark,
    BoolHead,
    BoolLit,
    BOOL,
    Clause,
    ConjHead,
    DatatypeSort,
    INT,
    IntLit,
    QueryFalse,
    REAL,
    RealLit,
    Sort,
    Term,
    Var,
    clause_terms,
    iter_subterms,
)

SAT = "sat"
UNSAT = "unsat"
OUT_OF_SCOPE = "out_of_scope"

_MAX_INT_WIDTH = 32
_MAX_ADT_DEPTH = 3
_MAX_GROUNDINGS = 500_000


@dataclass(frozen=True, slots=True)
class FiniteDomain:
    int_lo: int = 0
    int_hi: int = 7
    adt_depth: int = 2

    def __post_init__(self) -> None:
        if self.int_hi - self.int_lo > _MAX_INT_WIDTH:
            raise ValueError(f"integer range wider than {_MAX_INT_WIDTH}")
        if not 1 <= self.adt_depth <= _MAX_ADT_DEPTH:
            raise ValueError(f"adt depth must be in 1..{_MAX_ADT_DEPTH}")
        if self.int_hi < self.int_lo:
            raise ValueError("empty integer range")


class _OutOfScope(Exception):
    pass


def _euclidean_div(x: int, y: int) -> int:
    if y == 0:
        return 0
    return x // y if y > 0 else -(x // -y)


def _euclidean_mod(x: int, y: int) -> int:
    if y == 0:
        return x
    return x - y * _euclidean_div(x, y)


def _adt_values(b: Benchmark, depth: int) -> dict[str, list[tuple]]:
    """Enumerate datatype values up to the given constructor depth; mutual
    recursion is handled by iterating depth levels over all datatypes."""
    values: dict[str, list[tuple]] = {d.name: [] for d in b.datatypes}
    for _level in range(depth):
        nxt: dict[str, list[tuple]] = {}
        for d in b.datatypes:
            vals: list[tuple] = []
            for c in d.constructors:
                component_domains = []
                ok = True
                for _sel, sort in c.selectors:
                    if isinstance(sort, DatatypeSort):
                        component_domains.append(values[sort.name])
                    elif sort == BOOL:
                        component_domains.append([False, True])
                    else:
                        # integer components would explode the term domain
                        ok = False
                        break
                if not ok:
                    raise _OutOfScope()
                for combo in itertools.product(*component_domains):
                    vals.append((c.name, *combo))
            nxt[d.name] = vals
        values = nxt
    return values


def _sort_domain(sort: Sort, dom: FiniteDomain, adt_values: dict[str, list[tuple]]) -> list:
    if sort == BOOL:
        return [False, True]
    if sort == INT:
        return list(range(dom.int_lo, dom.int_hi + 1))
    if isinstance(sort, DatatypeSort):
        return adt_values[sort.name]
    raise _OutOfScope()


def _check_scope(b: Benchmark) -> None:
    for p in b.predicates:
        for s in p.arg_sorts:
            _scope_sort(s)
    for c in b.clauses:
        for _n, s in c.bound_vars:
            _scope_sort(s)
        for t in iter_subterms(*clause_terms(c)):
            _scope_sort(t.sort)
            if isinstance(t, RealLit):
                raise _OutOfScope()


def _scope_sort(s: Sort) -> None:
    if s == REAL or isinstance(s, ArraySort):
        raise _OutOfScope()


def _selector_map(b: Benchmark) -> dict[str, tuple[str, int, Sort]]:
    out: dict[str, tuple[str, int, Sort]] = {}
    for d in b.datatypes:
        for c in d.constructors:
            for i, (sel, sort) in enumerate(c.selectors):
                out[sel] = (c.name, i, sort)
    return out


def _evaluate(t: Term, env: dict[str, object], ctx: "_EvalContext") -> object:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, BoolLit):
        return t.value
    if isinstance(t, RealLit):
        raise _OutOfScope()
    assert isinstance(t, App)
    sym = t.symbol
    if t.is_tester:
        val = _evaluate(t.args[0], env, ctx)
        return val[0] == sym
    if sym in ctx.predicate_names:
        raise _OutOfScope()  # predicate nested inside a constraint
    if sym in ctx.constructors:
        return (sym, *(_evaluate(a, env, ctx) for a in t.args))
    if sym in ctx.selectors:
        ctor, idx, result_sort = ctx.selectors[sym]
        val = _evaluate(t.args[0], env, ctx)
        if val[0] == ctor:
            return val[idx + 1]
        return ctx.default_value(result_sort)

    args = [_evaluate(a, env, ctx) for a in t.args]
    if sym == "and":
        return all(args)
    if sym == "or":
        return any(args)
    if sym == "not":
        return not args[0]
    if sym == "=>":
        return any(not v for v in args[:-1]) or bool(args[-1])
    if sym == "=":
        return all(v == args[0] for v in args[1:])
    if sym == "distinct":
        return len(set(args)) == len(args)
    if sym == "ite":
        return args[1] if args[0] else args[2]
    if sym == "+":
        return sum(args)
    if sym == "*":
        out = 1
        for v in args:
            out *= v
        return out
    if sym == "-":
        if len(args) == 1:
            return -args[0]
        out = args[0]
        for v in args[1:]:
            out -= v
        return out
    if sym == "div":
        return _euclidean_div(args[0], args[1])
    if sym == "mod":
        return _euclidean_mod(args[0], args[1])
    if sym == "abs":
        return abs(args[0])
    if sym in ("<", "<=", ">", ">="):
        op = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}[sym]
        return all(op(a, b) for a, b in zip(args, args[1:]))
    raise _OutOfScope()


@dataclass
class _EvalContext:
    predicate_names: frozenset[str]
    constructors: frozenset[str]
    selectors: dict[str, tuple[str, int, Sort]]
    dom: FiniteDomain
    adt_values: dict[str, list[tuple]]

    def default_value(self, sort: Sort):
        vals = _sort_domain(sort, self.dom, self.adt_values)
        if not vals:
            raise _OutOfScope()
        return vals[0]


_FALSE_HEAD = None


def solve_ground(b: Benchmark, dom: Optional[FiniteDomain] = None) -> str:
    """Decide bounded-domain satisfiability: 'sat', 'unsat', or
    'out_of_scope' when the benchmark uses excluded theories or the
    instantiation would exceed the tractable bound."""
    dom = dom or FiniteDomain()
    try:
        _check_scope(b)
        adt_values = _adt_values(b, dom.adt_depth)
        ctx = _EvalContext(
            predicate_names=frozenset(p.name for p in b.predicates),
            constructors=frozenset(c.name for d in b.datatypes for c in d.constructors),
            selectors=_selector_map(b),
            dom=dom,
            adt_values=adt_values,
        )

        total = 0
        for clause in b.clauses:
            size = 1
            for _n, sort in clause.bound_vars:
                size *= len(_sort_domain(sort, dom, adt_values))
            total += size
            if total > _MAX_GROUNDINGS:
                raise _OutOfScope()

        rules: list[tuple[tuple, object]] = []
        facts: set = set()
        for clause in b.clauses:
            names = [n for n, _s in clause.bound_vars]
            domains = [_sort_domain(s, dom, adt_values) for _n, s in clause.bound_vars]
            for combo in itertools.product(*domains):
                env = dict(zip(names, combo))
                if not _evaluate(clause.constraint, env, ctx):
                    continue
                body = tuple(
                    (a.predicate.name, tuple(_evaluate(arg, env, ctx) for arg in a.args))
                    for a in clause.body_atoms
                )
                for head in _ground_heads(clause, env, ctx):
                    rules.append((body, head))

        # least fixpoint of derivable ground atoms
        changed = True
        while changed:
            changed = False
            remaining = []
            for body, head in rules:
                if all(atom in facts for atom in body):
                    if head is _FALSE_HEAD:
                        return UNSAT
                    if head not in facts:
                        facts.add(head)
                        changed = True
                else:
                    remaining.append((body, head))
            rules = remaining
        return SAT
    except (_OutOfScope, RecursionError):
        return OUT_OF_SCOPE


def _ground_heads(clause: Clause, env: dict, ctx: _EvalContext):
    head = clause.head
    if isinstance(head, QueryFalse):
        yield _FALSE_HEAD
    elif isinstance(head, Atom):
        yield (head.predicate.name, tuple(_evaluate(a, env, ctx) for a in head.args))
    elif isinstance(head, ConjHead):
        for atom in head.atoms:
            yield (atom.predicate.name, tuple(_evaluate(a, env, ctx) for a in atom.args))
    elif isinstance(head, BoolHead):
        # least-model reading: a true head is vacuous, a false head queries
        if not _evaluate(head.term, env, ctx):
            yield _FALSE_HEAD
    else:
        raise _OutOfScope()
