"""Parser for the SMT-LIB 2.6 fragment used by Horn clause benchmarks.

Recognized commands: set-logic, set-info, declare-fun, declare-datatypes,
assert, check-sat, exit, and get-model (ignored with a warning).  Asserted
formulas must be universally quantified implications, bare heads, or the
negated-existential query form, which is normalized to a query clause on
the fly.  Parsing is total: every input yields either a Benchmark or at
least one error diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .model import (
    ARRAY_SYMBOLS,
    BOOL,
    INT,
    REAL,
    RESERVED_SYMBOLS,
    App,
    ArraySort,
    Atom,
    Benchmark,
    BoolHead,
    BoolLit,
    Clause,
    ConjHead,
    Constructor,
    DatatypeDecl,
    DatatypeSort,
    Head,
    IntLit,
    Origin,
    PredicateDecl,
    QUERY_FALSE,
    RealLit,
    Sort,
    Term,
    TRUE,
    Var,
    and_spine,
    conjoin,
)
from .sexpr import (
    NO_SPAN,
    ParseDiagnostic,
    SAtom,
    SExpr,
    SList,
    SourceSpan,
    read_forms,
)


@dataclass
class ParseResult:
    benchmark: Optional[Benchmark]
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return self.benchmark is not None

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


class _Err(Exception):
    def __init__(self, span: SourceSpan, message: str, code: str):
        super().__init__(message)
        self.diagnostic = ParseDiagnostic(span, "error", message, code)


def _span(sx: SExpr) -> SourceSpan:
    return sx.span


@dataclass
class _SymbolTable:
    predicates: dict[str, PredicateDecl] = field(default_factory=dict)
    datatypes: dict[str, DatatypeDecl] = field(default_factory=dict)
    constructors: dict[str, tuple[DatatypeSort, Constructor]] = field(default_factory=dict)
    selectors: dict[str, tuple[DatatypeSort, Sort]] = field(default_factory=dict)

    def declared(self, name: str) -> bool:
        return (
            name in self.predicates
            or name in self.datatypes
            or name in self.constructors
            or name in self.selectors
        )


def _parse_sort(sx: SExpr, symtab: _SymbolTable) -> Sort:
    results: list[Sort] = []
    work: list[tuple[bool, SExpr]] = [(False, sx)]
    while work:
        done, cur = work.pop()
        if isinstance(cur, SAtom):
            if cur.kind != "symbol":
                raise _Err(cur.span, "expected a sort", "bad-sort")
            name = cur.text
            if name == "Bool":
                results.append(BOOL)
            elif name == "Int":
                results.append(INT)
            elif name == "Real":
                results.append(REAL)
            elif name in symtab.datatypes:
                results.append(DatatypeSort(name))
            else:
                raise _Err(cur.span, f"unknown sort '{name}'", "unknown-sort")
        elif not done:
            items = cur.items
            if (
                len(items) != 3
                or not isinstance(items[0], SAtom)
                or items[0].kind != "symbol"
                or items[0].text != "Array"
            ):
                raise _Err(cur.span, "expected a sort (only Array takes parameters)", "bad-sort")
            work.append((True, cur))
            work.append((False, items[2]))
            work.append((False, items[1]))
        else:
            element = results.pop()
            index = results.pop()
            results.append(ArraySort(index, element))
    return results[0]


def _numeric(sort: Sort) -> bool:
    return sort == INT or sort == REAL


def _sort_name(sort: Sort) -> str:
    if sort == BOOL:
        return "Bool"
    if sort == INT:
        return "Int"
    if sort == REAL:
        return "Real"
    if isinstance(sort, ArraySort):
        return f"(Array {_sort_name(sort.index)} {_sort_name(sort.element)})"
    if isinstance(sort, DatatypeSort):
        return sort.name
    return repr(sort)


def _apply(sym: str, args: list[Term], span: SourceSpan, symtab: _SymbolTable) -> Term:
    """Sort-check and build an application of an interpreted symbol,
    predicate, constructor, or selector."""
    sorts = [a.sort for a in args]
    n = len(args)

    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise _Err(span, msg, "sort-mismatch")

    if sym in ("and", "or"):
        need(n >= 1 and all(s == BOOL for s in sorts), f"'{sym}' expects Bool arguments")
        if n == 1:
            return args[0]
        return App(sym, tuple(args), BOOL)
    if sym == "not":
        need(n == 1 and sorts[0] == BOOL, "'not' expects one Bool argument")
        return App(sym, tuple(args), BOOL)
    if sym == "=>":
        need(n >= 2 and all(s == BOOL for s in sorts), "'=>' expects Bool arguments")
        return App(sym, tuple(args), BOOL)
    if sym in ("=", "distinct"):
        need(n >= 2 and all(s == sorts[0] for s in sorts), f"'{sym}' expects arguments of equal sort")
        return App(sym, tuple(args), BOOL)
    if sym == "ite":
        need(n == 3 and sorts[0] == BOOL and sorts[1] == sorts[2], "'ite' expects (Bool T T)")
        return App(sym, tuple(args), sorts[1])
    if sym in ("+", "*"):
        need(
            n >= 1 and _numeric(sorts[0]) and all(s == sorts[0] for s in sorts),
            f"'{sym}' expects numeric arguments of equal sort",
        )
        if n == 1:
            return args[0]
        return App(sym, tuple(args), sorts[0])
    if sym == "-":
        if n == 1:
            need(_numeric(sorts[0]), "'-' expects a numeric argument")
            a = args[0]
            if isinstance(a, IntLit):
                return IntLit(-a.value)
            if isinstance(a, RealLit):
                return RealLit(-a.value)
            return App(sym, tuple(args), sorts[0])
        need(
            n >= 2 and _numeric(sorts[0]) and all(s == sorts[0] for s in sorts),
            "'-' expects numeric arguments of equal sort",
        )
        return App(sym, tuple(args), sorts[0])
    if sym in ("div", "mod"):
        need(n == 2 and sorts == [INT, INT], f"'{sym}' expects two Int arguments")
        return App(sym, tuple(args), INT)
    if sym == "abs":
        need(n == 1 and sorts[0] == INT, "'abs' expects one Int argument")
        return App(sym, tuple(args), INT)
    if sym == "/":
        need(n == 2, "'/' expects two arguments")
        a, b = args
        if isinstance(a, IntLit) and isinstance(b, IntLit) and b.value != 0:
            return RealLit(Fraction(a.value, b.value))
        if isinstance(a, RealLit) and isinstance(b, RealLit) and b.value != 0:
            return RealLit(a.value / b.value)
        need(sorts == [REAL, REAL], "'/' expects two Real arguments")
        return App(sym, tuple(args), REAL)
    if sym in ("<", "<=", ">", ">="):
        need(
            n >= 2 and _numeric(sorts[0]) and all(s == sorts[0] for s in sorts),
            f"'{sym}' expects numeric arguments of equal sort",
        )
        return App(sym, tuple(args), BOOL)
    if sym == "select":
        need(n == 2 and isinstance(sorts[0], ArraySort), "'select' expects an array and an index")
        need(sorts[1] == sorts[0].index, "'select' index sort mismatch")
        return App(sym, tuple(args), sorts[0].element)
    if sym == "store":
        need(n == 3 and isinstance(sorts[0], ArraySort), "'store' expects an array, index, and element")
        need(
            sorts[1] == sorts[0].index and sorts[2] == sorts[0].element,
            "'store' index or element sort mismatch",
        )
        return App(sym, tuple(args), sorts[0])

    if sym in symtab.constructors:
        dt_sort, ctor = symtab.constructors[sym]
        want = [s for _, s in ctor.selectors]
        if sorts != want:
            raise _Err(
                span,
                f"constructor '{sym}' expects ({' '.join(_sort_name(s) for s in want)})",
                "sort-mismatch",
            )
        return App(sym, tuple(args), dt_sort)
    if sym in symtab.selectors:
        dt_sort, result = symtab.selectors[sym]
        need(n == 1 and sorts[0] == dt_sort, f"selector '{sym}' expects one {dt_sort.name} argument")
        return App(sym, tuple(args), result)
    if sym in symtab.predicates:
        decl = symtab.predicates[sym]
        if len(args) != decl.arity:
            raise _Err(span, f"'{sym}' expects {decl.arity} arguments, got {n}", "arity-mismatch")
        if sorts != list(decl.arg_sorts):
            raise _Err(span, f"argument sorts of '{sym}' do not match its declaration", "sort-mismatch")
        return App(sym, tuple(args), BOOL)
    raise _Err(span, f"unknown symbol '{sym}' in application", "unbound-symbol")


def _resolve_symbol(
    name: str, span: SourceSpan, binders: dict[str, Sort], env: dict[str, Term], symtab: _SymbolTable
) -> Term:
    if name in env:
        return env[name]
    if name in binders:
        return Var(name, binders[name])
    if name == "true":
        return TRUE
    if name == "false":
        return BoolLit(False)
    if name in symtab.constructors:
        dt_sort, ctor = symtab.constructors[name]
        if ctor.selectors:
            raise _Err(span, f"constructor '{name}' expects arguments", "arity-mismatch")
        return App(name, (), dt_sort)
    if name in symtab.predicates:
        decl = symtab.predicates[name]
        if decl.arity:
            raise _Err(span, f"'{name}' expects {decl.arity} arguments", "arity-mismatch")
        return App(name, (), BOOL)
    raise _Err(span, f"unbound symbol '{name}'", "unbound-symbol")


def _tester_head(head: SExpr) -> Optional[str]:
    """Recognize the (_ is C) application head; returns the constructor name."""
    if not isinstance(head, SList) or len(head.items) != 3:
        return None
    a, b, c = head.items
    if (
        isinstance(a, SAtom) and a.kind == "symbol" and a.text == "_"
        and isinstance(b, SAtom) and b.kind == "symbol" and b.text == "is"
        and isinstance(c, SAtom) and c.kind == "symbol"
    ):
        return c.text
    return None


def _analyze_term(
    sx: SExpr, binders: dict[str, Sort], symtab: _SymbolTable, env: Optional[dict[str, Term]] = None
) -> Term:
    """Iterative bottom-up analysis of a term s-expression into a sorted
    Term.  `let` bindings are expanded in place; annotation wrappers are
    discarded."""
    results: list[Term] = []
    # work items: ("t", sexp, env) | ("app", span, sym, n) | ("tester", span, ctor, dt?)
    #           | ("let", body, names, env, n)
    work: list[tuple] = [("t", sx, env or {})]
    while work:
        item = work.pop()
        tag = item[0]
        if tag == "t":
            _, cur, cenv = item
            if isinstance(cur, SAtom):
                if cur.kind == "symbol":
                    results.append(_resolve_symbol(cur.text, cur.span, binders, cenv, symtab))
                elif cur.kind == "numeral":
                    results.append(IntLit(int(cur.text)))
                elif cur.kind == "decimal":
                    results.append(RealLit(Fraction(cur.text)))
                else:
                    raise _Err(cur.span, f"unexpected {cur.kind} in term position", "bad-term")
                continue
            items = cur.items
            if not items:
                raise _Err(cur.span, "empty application", "bad-term")
            head = items[0]
            tester = _tester_head(head)
            if tester is not None:
                if len(items) != 2:
                    raise _Err(cur.span, "tester expects exactly one argument", "arity-mismatch")
                work.append(("tester", cur.span, tester))
                work.append(("t", items[1], cenv))
                continue
            if not isinstance(head, SAtom) or head.kind != "symbol":
                raise _Err(cur.span, "application head must be a symbol", "bad-term")
            sym = head.text
            if sym == "let":
                if len(items) != 3 or not isinstance(items[1], SList):
                    raise _Err(cur.span, "malformed let", "bad-term")
                names = []
                bindings = items[1].items
                for binding in bindings:
                    if (
                        not isinstance(binding, SList)
                        or len(binding.items) != 2
                        or not isinstance(binding.items[0], SAtom)
                        or binding.items[0].kind != "symbol"
                    ):
                        raise _Err(items[1].span, "malformed let binding", "bad-term")
                    names.append(binding.items[0].text)
                work.append(("let", items[2], names, cenv, len(names)))
                for binding in reversed(bindings):
                    work.append(("t", binding.items[1], cenv))
                continue
            if sym in ("forall", "exists"):
                raise _Err(cur.span, "quantifiers may not occur inside terms", "nested-quantifier")
            if sym == "!":
                if len(items) < 2:
                    raise _Err(cur.span, "malformed annotation", "bad-term")
                work.append(("t", items[1], cenv))
                continue
            if sym in ("as", "_"):
                raise _Err(cur.span, "qualified or indexed identifiers are not supported", "unsupported")
            work.append(("app", cur.span, sym, len(items) - 1))
            for arg in reversed(items[1:]):
                work.append(("t", arg, cenv))
        elif tag == "app":
            _, span, sym, n = item
            args = results[-n:]
            del results[-n:]
            results.append(_apply(sym, args, span, symtab))
        elif tag == "tester":
            _, span, ctor = item
            arg = results.pop()
            if ctor not in symtab.constructors:
                raise _Err(span, f"unknown constructor '{ctor}' in tester", "unbound-symbol")
            dt_sort, _c = symtab.constructors[ctor]
            if arg.sort != dt_sort:
                raise _Err(span, f"tester argument must have sort {dt_sort.name}", "sort-mismatch")
            results.append(App(ctor, (arg,), BOOL, is_tester=True))
        else:  # let
            _, body, names, cenv, n = item
            values = results[-n:]
            del results[-n:]
            newenv = dict(cenv)
            newenv.update(zip(names, values))
            work.append(("t", body, newenv))
    return results[0]


def _parse_binders(sx: SExpr, symtab: _SymbolTable) -> tuple[tuple[str, Sort], ...]:
    if not isinstance(sx, SList) or not sx.items:
        raise _Err(_span(sx), "expected a non-empty list of sorted variables", "bad-binder")
    out: list[tuple[str, Sort]] = []
    seen: set[str] = set()
    for b in sx.items:
        if (
            not isinstance(b, SList)
            or len(b.items) != 2
            or not isinstance(b.items[0], SAtom)
            or b.items[0].kind != "symbol"
        ):
            raise _Err(_span(b), "malformed sorted variable", "bad-binder")
        name = b.items[0].text
        if name in seen:
            raise _Err(_span(b), f"duplicate bound variable '{name}'", "bad-binder")
        if name in RESERVED_SYMBOLS:
            raise _Err(_span(b), f"'{name}' is reserved and cannot be a variable", "bad-binder")
        seen.add(name)
        out.append((name, _parse_sort(b.items[1], symtab)))
    return tuple(out)


def _split_body(term: Term, symtab: _SymbolTable) -> tuple[tuple[Atom, ...], Term]:
    """Partition a premise into predicate atoms (in order of appearance) and
    the remaining theory constraint.  Predicate applications nested below
    non-conjunctive structure stay inside the constraint; the fragment
    checker reports them."""
    atoms: list[Atom] = []
    rest: list[Term] = []
    for conj in and_spine(term):
        if isinstance(conj, App) and not conj.is_tester and conj.symbol in symtab.predicates:
            atoms.append(Atom(symtab.predicates[conj.symbol], conj.args))
        else:
            rest.append(conj)
    return tuple(atoms), conjoin(rest)


def _classify_head(term: Term, symtab: _SymbolTable) -> Head:
    if isinstance(term, BoolLit) and term.value is False:
        return QUERY_FALSE
    if isinstance(term, App) and not term.is_tester and term.symbol in symtab.predicates:
        return Atom(symtab.predicates[term.symbol], term.args)
    if isinstance(term, App) and term.symbol == "and":
        conjuncts = and_spine(term)
        if all(
            isinstance(c, App) and not c.is_tester and c.symbol in symtab.predicates
            for c in conjuncts
        ):
            return ConjHead(tuple(Atom(symtab.predicates[c.symbol], c.args) for c in conjuncts))
    return BoolHead(term)


def _strip_annotation(sx: SExpr) -> SExpr:
    while (
        isinstance(sx, SList)
        and len(sx.items) >= 2
        and isinstance(sx.items[0], SAtom)
        and sx.items[0].kind == "symbol"
        and sx.items[0].text == "!"
    ):
        sx = sx.items[1]
    return sx


def _head_symbol(sx: SExpr) -> Optional[str]:
    if isinstance(sx, SList) and sx.items and isinstance(sx.items[0], SAtom) and sx.items[0].kind == "symbol":
        return sx.items[0].text
    return None


def _analyze_clause(sx: SExpr, symtab: _SymbolTable) -> Clause:
    sx = _strip_annotation(sx)
    sym = _head_symbol(sx)

    # negated-existential query form, normalized on the fly
    if sym == "not" and len(sx.items) == 2:
        inner = _strip_annotation(sx.items[1])
        if _head_symbol(inner) == "exists":
            if len(inner.items) != 3:
                raise _Err(inner.span, "malformed exists", "bad-clause")
            bound = _parse_binders(inner.items[1], symtab)
            binders = dict(bound)
            body = _analyze_term(inner.items[2], binders, symtab)
            if body.sort != BOOL:
                raise _Err(inner.span, "query body must be Bool", "sort-mismatch")
            atoms, constraint = _split_body(body, symtab)
            return Clause(bound, atoms, constraint, QUERY_FALSE)

    if sym == "forall":
        if len(sx.items) != 3:
            raise _Err(sx.span, "malformed forall", "bad-clause")
        bound = _parse_binders(sx.items[1], symtab)
        matrix = _strip_annotation(sx.items[2])
    else:
        bound = ()
        matrix = sx

    binders = dict(bound)
    msym = _head_symbol(matrix)
    if msym == "=>":
        if len(matrix.items) != 3:
            raise _Err(matrix.span, "clause implication must have exactly two operands", "bad-clause")
        premise = _analyze_term(matrix.items[1], binders, symtab)
        if premise.sort != BOOL:
            raise _Err(matrix.items[1].span, "clause body must be Bool", "sort-mismatch")
        atoms, constraint = _split_body(premise, symtab)
        head_term = _analyze_term(matrix.items[2], binders, symtab)
    else:
        atoms, constraint = (), TRUE
        head_term = _analyze_term(matrix, binders, symtab)
    if head_term.sort != BOOL:
        raise _Err(_span(matrix), "clause head must be Bool", "sort-mismatch")
    head = _classify_head(head_term, symtab)
    if isinstance(head, BoolHead) and isinstance(head.term, BoolLit) and head.term.value and not atoms and constraint == TRUE and not bound:
        raise _Err(_span(sx), "clause must be a universally quantified implication", "bad-clause")
    return Clause(bound, atoms, constraint, head)


_LEGACY_COMMANDS = {"declare-rel", "rule", "query"}
_KNOWN_COMMANDS = {
    "set-logic",
    "set-info",
    "declare-fun",
    "declare-datatypes",
    "assert",
    "check-sat",
    "exit",
    "get-model",
}


def parse_script(data: Union[bytes, str], origin: Optional[Origin] = None) -> ParseResult:
    """Parse a full SMT-LIB script into a Benchmark.

    Returns a ParseResult holding the Benchmark (None when any error
    diagnostic was produced) together with all diagnostics, warnings
    included.  Never raises on malformed input."""
    diags: list[ParseDiagnostic] = []
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            span = SourceSpan(e.start, e.end, 1, e.start + 1)
            return ParseResult(None, [ParseDiagnostic(span, "error", "input is not valid UTF-8", "encoding")])
    else:
        text = data

    try:
        return _parse_forms(text, origin or Origin(), diags)
    except RecursionError:
        diags.append(ParseDiagnostic(NO_SPAN, "error", "input exceeds supported nesting depth", "max-depth"))
        return ParseResult(None, diags)


def _parse_forms(text: str, origin: Origin, diags: list[ParseDiagnostic]) -> ParseResult:
    forms, reader_diags = read_forms(text)
    diags.extend(reader_diags)

    symtab = _SymbolTable()
    logic: Optional[str] = None
    datatypes: list[DatatypeDecl] = []
    clauses: list[Clause] = []
    check_sats = 0

    for form in forms:
        if not isinstance(form, SList) or not form.items:
            diags.append(ParseDiagnostic(_span(form), "error", "top-level form is not a command", "bad-command"))
            continue
        head = form.items[0]
        if not isinstance(head, SAtom) or head.kind != "symbol":
            diags.append(ParseDiagnostic(_span(form), "error", "top-level form is not a command", "bad-command"))
            continue
        cmd = head.text
        args = form.items[1:]
        try:
            if cmd == "set-logic":
                if len(args) != 1 or not isinstance(args[0], SAtom) or args[0].kind != "symbol":
                    raise _Err(form.span, "malformed set-logic", "bad-command")
                if logic is not None:
                    raise _Err(form.span, "duplicate set-logic", "bad-command")
                logic = args[0].text
                if logic != "HORN":
                    diags.append(
                        ParseDiagnostic(form.span, "warning", f"logic is '{logic}', expected HORN", "logic-not-horn")
                    )
            elif cmd == "set-info":
                pass
            elif cmd == "declare-fun":
                _declare_fun(form, args, symtab)
            elif cmd == "declare-datatypes":
                datatypes.extend(_declare_datatypes(form, args, symtab))
            elif cmd == "assert":
                if len(args) != 1:
                    raise _Err(form.span, "assert expects exactly one formula", "bad-command")
                clauses.append(_analyze_clause(args[0], symtab))
            elif cmd == "check-sat":
                check_sats += 1
            elif cmd == "exit":
                pass
            elif cmd == "get-model":
                diags.append(ParseDiagnostic(form.span, "warning", "get-model is ignored", "ignored-command"))
            elif cmd in _LEGACY_COMMANDS:
                raise _Err(
                    form.span,
                    f"legacy Datalog command '{cmd}' is not part of the fragment",
                    "legacy-datalog-command",
                )
            else:
                raise _Err(form.span, f"unknown command '{cmd}'", "unknown-command")
        except _Err as e:
            diags.append(e.diagnostic)

    if logic is None:
        diags.append(ParseDiagnostic(NO_SPAN, "warning", "missing set-logic command", "missing-set-logic"))
    if check_sats != 1:
        diags.append(
            ParseDiagnostic(NO_SPAN, "warning", f"expected exactly one check-sat, found {check_sats}", "check-sat-count")
        )

    if any(d.severity == "error" for d in diags):
        return ParseResult(None, diags)
    bench = Benchmark(
        logic_tag=logic or "",
        datatypes=tuple(datatypes),
        predicates=tuple(symtab.predicates.values()),
        clauses=tuple(clauses),
        origin=origin,
        check_sat_count=check_sats,
    )
    return ParseResult(bench, diags)


def _declare_name(sx: SExpr, symtab: _SymbolTable, what: str) -> str:
    if not isinstance(sx, SAtom) or sx.kind != "symbol":
        raise _Err(_span(sx), f"malformed {what} name", "bad-command")
    name = sx.text
    if name in RESERVED_SYMBOLS:
        raise _Err(sx.span, f"'{name}' is reserved", "reserved-symbol")
    if symtab.declared(name):
        raise _Err(sx.span, f"'{name}' is already declared", "redeclared-symbol")
    return name


def _declare_fun(form: SList, args: list[SExpr], symtab: _SymbolTable) -> None:
    if len(args) != 3 or not isinstance(args[1], SList):
        raise _Err(form.span, "malformed declare-fun", "bad-command")
    name = _declare_name(args[0], symtab, "declare-fun")
    arg_sorts = tuple(_parse_sort(s, symtab) for s in args[1].items)
    result = _parse_sort(args[2], symtab)
    if result != BOOL:
        raise _Err(
            form.span,
            "only Bool-valued declarations (uninterpreted predicates) are supported",
            "non-bool-declaration",
        )
    symtab.predicates[name] = PredicateDecl(name, arg_sorts)


def _declare_datatypes(form: SList, args: list[SExpr], symtab: _SymbolTable) -> list[DatatypeDecl]:
    if len(args) != 2 or not isinstance(args[0], SList) or not isinstance(args[1], SList):
        raise _Err(form.span, "malformed declare-datatypes", "bad-command")
    names_arities = args[0].items
    bodies = args[1].items
    if len(names_arities) != len(bodies) or not names_arities:
        raise _Err(form.span, "declare-datatypes name and body counts differ", "bad-command")
    names: list[str] = []
    for na in names_arities:
        if (
            not isinstance(na, SList)
            or len(na.items) != 2
            or not isinstance(na.items[1], SAtom)
            or na.items[1].kind != "numeral"
        ):
            raise _Err(_span(na), "malformed datatype declaration", "bad-command")
        name = _declare_name(na.items[0], symtab, "datatype")
        if na.items[1].text != "0":
            raise _Err(na.span, "parametric datatypes are not supported", "unsupported")
        names.append(name)
    # pre-register the names so constructors can be recursive / mutually recursive
    for name in names:
        symtab.datatypes[name] = DatatypeDecl(name, ())
    decls: list[DatatypeDecl] = []
    for name, body in zip(names, bodies):
        if not isinstance(body, SList) or not body.items:
            raise _Err(_span(body), "datatype needs at least one constructor", "bad-command")
        dt_sort = DatatypeSort(name)
        ctors: list[Constructor] = []
        for ctor_sx in body.items:
            if not isinstance(ctor_sx, SList) or not ctor_sx.items:
                raise _Err(_span(ctor_sx), "malformed constructor declaration", "bad-command")
            cname = _declare_name(ctor_sx.items[0], symtab, "constructor")
            selectors: list[tuple[str, Sort]] = []
            for sel_sx in ctor_sx.items[1:]:
                if not isinstance(sel_sx, SList) or len(sel_sx.items) != 2:
                    raise _Err(_span(sel_sx), "malformed selector declaration", "bad-command")
                sel_name = _declare_name(sel_sx.items[0], symtab, "selector")
                sel_sort = _parse_sort(sel_sx.items[1], symtab)
                selectors.append((sel_name, sel_sort))
                symtab.selectors[sel_name] = (dt_sort, sel_sort)
            ctor = Constructor(cname, tuple(selectors))
            symtab.constructors[cname] = (dt_sort, ctor)
            ctors.append(ctor)
        decl = DatatypeDecl(name, tuple(ctors))
        symtab.datatypes[name] = decl
        decls.append(decl)
    return decls


def parse_file(path: Union[str, Path], repository: str = "") -> ParseResult:
    p = Path(path)
    return parse_script(p.read_bytes(), Origin(repository=repository, path=str(p)))
