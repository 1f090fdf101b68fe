"""Track classification: theory signature, transition-system shape, and the
decision procedure assigning each conformant benchmark to a track."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import (
    App,
    ArraySort,
    Atom,
    Benchmark,
    BoolLit,
    Clause,
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
    count_nonlinear_clauses,
    fold_term,
    iter_subterms,
)


class Track(str, Enum):
    LIA_NONLIN = "LIA-nonlin"
    LIA_LIN = "LIA-lin"
    LIA_NONLIN_ARRAYS = "LIA-nonlin-arrays"
    LIA_LIN_ARRAYS = "LIA-lin-arrays"
    LRA_TS = "LRA-TS"
    ADT_NONLIN = "ADT-nonlin"
    UNCLASSIFIED = "Unclassified"

    def __str__(self) -> str:  # CLI output uses the plain value
        return self.value


TRACK_BY_VALUE = {t.value: t for t in Track}


@dataclass(frozen=True, slots=True)
class TheorySignature:
    uses_int: bool
    uses_real: bool
    uses_arrays: bool
    uses_adt: bool
    arithmetic_linear: bool


def _scan_sort(sort: Sort, flags: dict) -> None:
    stack = [sort]
    while stack:
        s = stack.pop()
        if s == INT:
            flags["int"] = True
        elif s == REAL:
            flags["real"] = True
        elif isinstance(s, ArraySort):
            flags["arrays"] = True
            stack.append(s.index)
            stack.append(s.element)
        elif isinstance(s, DatatypeSort):
            flags["adt"] = True


def _const_value(t: Term):
    """Fold a term to a literal numeric constant, or None."""

    def step(node: Term, children: list):
        if isinstance(node, IntLit):
            return node.value
        if isinstance(node, RealLit):
            return node.value
        if isinstance(node, App) and all(c is not None for c in children):
            sym = node.symbol
            if sym == "+":
                return sum(children)
            if sym == "*":
                out = 1
                for c in children:
                    out *= c
                return out
            if sym == "-":
                if len(children) == 1:
                    return -children[0]
                out = children[0]
                for c in children[1:]:
                    out -= c
                return out
        return None

    return fold_term(t, step)


def theory_signature(b: Benchmark) -> TheorySignature:
    """Flags computed from sorts and interpreted symbols occurring in the
    clauses.  Arithmetic is linear when every multiplication has at most one
    non-constant operand (after constant folding) and no division or modulo
    by a non-constant occurs."""
    flags = {"int": False, "real": False, "arrays": False, "adt": False}
    linear = True
    for clause in b.clauses:
        for _n, sort in clause.bound_vars:
            _scan_sort(sort, flags)
        for t in iter_subterms(*clause_terms(clause)):
            _scan_sort(t.sort, flags)
            if not isinstance(t, App):
                continue
            if t.is_tester:
                flags["adt"] = True
            sym = t.symbol
            if sym in ("select", "store"):
                flags["arrays"] = True
            elif sym == "/":
                flags["real"] = True
            if sym == "*":
                nonconst = sum(1 for a in t.args if _const_value(a) is None)
                if nonconst > 1:
                    linear = False
            elif sym in ("div", "mod", "/"):
                if any(_const_value(a) is None for a in t.args[1:]):
                    linear = False
    return TheorySignature(
        uses_int=flags["int"],
        uses_real=flags["real"],
        uses_arrays=flags["arrays"],
        uses_adt=flags["adt"],
        arithmetic_linear=linear,
    )


def is_transition_system(b: Benchmark) -> bool:
    """Exactly one relation symbol and exactly three linear clauses: an
    initial-state clause, a transition clause, and an error clause."""
    if len(b.predicates) != 1 or len(b.clauses) != 3:
        return False
    pred = b.predicates[0]
    roles = {"init": 0, "trans": 0, "error": 0}
    for c in b.clauses:
        if not c.is_linear:
            return False
        head = c.head
        if isinstance(head, Atom) and head.predicate.name == pred.name:
            if not c.body_atoms:
                roles["init"] += 1
            elif c.body_atoms[0].predicate.name == pred.name:
                roles["trans"] += 1
            else:
                return False
        elif isinstance(head, QueryFalse):
            if len(c.body_atoms) == 1 and c.body_atoms[0].predicate.name == pred.name:
                roles["error"] += 1
            else:
                return False
        else:
            return False
    return roles == {"init": 1, "trans": 1, "error": 1}


def classify(b: Benchmark) -> Track:
    """Assign a conformant benchmark to its track, or Unclassified when no
    track admits it.  Theory-free benchmarks fold into the LIA tracks."""
    sig = theory_signature(b)
    nonlinear = count_nonlinear_clauses(b) > 0
    if sig.uses_adt and not (sig.uses_arrays or sig.uses_real) and sig.arithmetic_linear and nonlinear:
        return Track.ADT_NONLIN
    if (
        sig.uses_real
        and not sig.uses_int
        and not sig.uses_arrays
        and not sig.uses_adt
        and sig.arithmetic_linear
        and is_transition_system(b)
    ):
        return Track.LRA_TS
    if not sig.uses_real and not sig.uses_adt and sig.arithmetic_linear:
        if sig.uses_arrays:
            return Track.LIA_NONLIN_ARRAYS if nonlinear else Track.LIA_LIN_ARRAYS
        return Track.LIA_NONLIN if nonlinear else Track.LIA_LIN
    return Track.UNCLASSIFIED
