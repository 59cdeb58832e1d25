"""Concrete syntax: model DSL, guard expressions and formulas.

Guards use counter references ``#action``, the comparisons ``= < <= > >=
!=`` and the connectives ``! && || ->``; multiplication is restricted to
constant times counter.  A ``#`` not immediately followed by a name
starts a line comment.  Formulas follow

    state ::= "true" | IDENT | "!" state | state "&" state
            | state "|" state | "(" state ")"
            | quants "<<" term "," term ">>" path
    quants ::= (("E"|"A") ("y1"|"y2")){0,2}
    path  ::= "X" state | "G" state | "F" state | "(" state "U" state ")"
    term  ::= NAT | "y1" | "y2" | "z" NAT
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import logic
from .logic import (EXISTS, FORALL, AndF, Coop, Globally, Nat, Next, NotF,
                    OrF, Param, Prop, Quant, StateFormula, Term, Top, Until,
                    Y1, Y2, check_syntax, eventually)
from .model import (IDLE, ActionTable, HdmasModel, counter_name)
from .presburger import (DVD, EQ, And, AtomF, Exists, FalseF, Forall,
                         Implies, LinTerm, Not, Or, PresFormula, TrueF,
                         atom_eq, atom_ge, atom_gt, atom_le, atom_lt, atom_ne,
                         conj, disj, implies, neg, free_vars,
                         is_quantifier_free, var)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class SemanticError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# lexer

_SYMBOLS = ["<->", "<<", ">>", "->", "&&", "||", "<=", ">=", "!=",
            "{", "}", "(", ")", ";", ":", ",", "=", "<", ">", "!",
            "&", "|", "*", "+"]
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NAT = re.compile(r"[0-9]+")

RESERVED = {"true", "else", "E", "A", "X", "G", "F", "U",
            "actions", "props", "state", "guard", "avail", "label"}


@dataclass(frozen=True)
class Token:
    kind: str  # name | nat | counter | sym | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            m = _NAME.match(text, i + 1)
            if m:
                out.append(Token("counter", m.group(), line, col))
                col += 1 + len(m.group())
                i = m.end()
                continue
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _NAT.match(text, i)
        if m:
            out.append(Token("nat", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            out.append(Token("name", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                out.append(Token("sym", sym, line, col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("eof", "", line, col))
    return out


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        return None


# ---------------------------------------------------------------------------
# guard expressions


def _parse_guard_sum(ts: _Stream) -> LinTerm:
    total = _parse_guard_prod(ts)
    while ts.accept("sym", "+"):
        total = total.add(_parse_guard_prod(ts))
    return total


def _parse_guard_prod(ts: _Stream) -> LinTerm:
    tok = ts.peek()
    if tok.kind == "nat":
        ts.next()
        value = int(tok.text)
        if ts.accept("sym", "*"):
            ctr = ts.expect("counter")
            return var("#" + ctr.text).scale(value)
        return LinTerm((), value)
    if tok.kind == "counter":
        ts.next()
        return var("#" + tok.text)
    raise ParseError(f"expected a number or counter, found {tok.text!r}",
                     tok.line, tok.col)


_CMP = {"=": atom_eq, "<": atom_lt, "<=": atom_le,
        ">": atom_gt, ">=": atom_ge, "!=": atom_ne}


def _parse_guard_atom(ts: _Stream) -> PresFormula:
    if ts.accept("sym", "!"):
        return neg(_parse_guard_atom(ts))
    if ts.accept("sym", "("):
        inner = _parse_guard_expr(ts)
        ts.expect("sym", ")")
        return inner
    lhs = _parse_guard_sum(ts)
    tok = ts.peek()
    if tok.kind == "sym" and tok.text in _CMP:
        ts.next()
        rhs = _parse_guard_sum(ts)
        return _CMP[tok.text](lhs, rhs)
    raise ParseError(f"expected a comparison, found {tok.text!r}", tok.line, tok.col)


def _parse_guard_expr(ts: _Stream) -> PresFormula:
    lhs = _parse_guard_or(ts)
    if ts.accept("sym", "->"):
        return implies(lhs, _parse_guard_expr(ts))
    return lhs


def _parse_guard_or(ts: _Stream) -> PresFormula:
    out = _parse_guard_and(ts)
    while ts.accept("sym", "||"):
        out = disj((out, _parse_guard_and(ts)))
    return out


def _parse_guard_and(ts: _Stream) -> PresFormula:
    out = _parse_guard_atom(ts)
    while ts.accept("sym", "&&"):
        out = conj((out, _parse_guard_atom(ts)))
    return out


def parse_guard(text: str) -> PresFormula:
    ts = _Stream(tokenize(text))
    out = _parse_guard_expr(ts)
    ts.expect("eof")
    return out


# ---------------------------------------------------------------------------
# guard and formula printing


def _term_sides(t: LinTerm) -> tuple[str, str]:
    def monomial(v: str, c: int) -> str:
        return v if c == 1 else f"{c}*{v}"

    left = [monomial(v, c) for v, c in t.coeffs if c > 0]
    right = [monomial(v, -c) for v, c in t.coeffs if c < 0]
    if t.const > 0:
        left.append(str(t.const))
    elif t.const < 0:
        right.append(str(-t.const))
    return (" + ".join(left) or "0", " + ".join(right) or "0")


def _signed_term(t: LinTerm) -> str:
    parts = []
    for v, c in t.coeffs:
        name = v
        parts.append(name if c == 1 else f"{c}*{name}")
    if t.const or not parts:
        parts.append(str(t.const))
    return " + ".join(parts)


def guard_to_str(phi: PresFormula) -> str:
    """Render arithmetic formulas in the guard concrete syntax.

    Quantifiers and divisibility atoms (which only arise internally) use a
    display-only extension of the syntax.
    """
    if isinstance(phi, TrueF):
        return "0 = 0"
    if isinstance(phi, FalseF):
        return "0 < 0"
    if isinstance(phi, AtomF):
        a = phi.atom
        if a.kind == DVD:
            return f"({a.divisor} | {_signed_term(a.term)})"
        lhs, rhs = _term_sides(a.term)
        op = "=" if a.kind == EQ else "<"
        return f"{lhs} {op} {rhs}"
    if isinstance(phi, Not):
        return f"!({guard_to_str(phi.arg)})"
    if isinstance(phi, And):
        return " && ".join(_guard_paren(a, (Or, Implies)) for a in phi.args)
    if isinstance(phi, Or):
        return " || ".join(_guard_paren(a, (Implies,)) for a in phi.args)
    if isinstance(phi, Implies):
        return f"{_guard_paren(phi.lhs, (Implies,))} -> {guard_to_str(phi.rhs)}"
    if isinstance(phi, Exists):
        return f"E {phi.var}. ({guard_to_str(phi.body)})"
    if isinstance(phi, Forall):
        return f"A {phi.var}. ({guard_to_str(phi.body)})"
    raise TypeError(phi)


def _guard_paren(phi: PresFormula, wrap: tuple) -> str:
    text = guard_to_str(phi)
    return f"({text})" if isinstance(phi, wrap) else text


def term_to_str(t: Term) -> str:
    if isinstance(t, Nat):
        return str(t.value)
    if isinstance(t, Param):
        return f"z{t.index}"
    return f"y{t.index}"


def formula_to_str(phi) -> str:
    """Printer inverse to parse_formula on grammar-conforming shapes."""
    return _fmt_state(phi, 0)


def _fmt_state(phi: StateFormula, level: int) -> str:
    # level: 0 top, 1 inside |, 2 inside &, 3 unary operand
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, NotF):
        return "!" + _fmt_state(phi.arg, 3)
    if isinstance(phi, OrF):
        # the parser folds left, so right-nested chains get parentheses
        text = f"{_fmt_state(phi.lhs, 1)} | {_fmt_state(phi.rhs, 2)}"
        return f"({text})" if level >= 2 else text
    if isinstance(phi, AndF):
        text = f"{_fmt_state(phi.lhs, 2)} & {_fmt_state(phi.rhs, 3)}"
        return f"({text})" if level >= 3 else text
    if isinstance(phi, (Coop, Quant)):
        prefix = ""
        inner = phi
        if isinstance(phi, Quant):
            prefix = " ".join(f"{q} y{i}" for q, i in phi.prefix) + " "
            inner = phi.body
        if not isinstance(inner, Coop):
            return f"({prefix.strip()} ({_fmt_state(inner, 0)}))"
        text = (f"{prefix}<<{term_to_str(inner.t1)},{term_to_str(inner.t2)}>> "
                f"{_fmt_path(inner.objective)}")
        return f"({text})" if level >= 1 else text
    raise TypeError(phi)


def _fmt_path(chi) -> str:
    if isinstance(chi, Next):
        return "X " + _fmt_state(chi.arg, 3)
    if isinstance(chi, Globally):
        return "G " + _fmt_state(chi.arg, 3)
    if isinstance(chi, Until):
        if chi.lhs == Top():
            return "F " + _fmt_state(chi.rhs, 3)
        return f"({_fmt_state(chi.lhs, 0)} U {_fmt_state(chi.rhs, 0)})"
    raise TypeError(chi)


# ---------------------------------------------------------------------------
# formulas


_Z_PATTERN = re.compile(r"z([0-9]+)$")


def _parse_term(ts: _Stream) -> Term:
    tok = ts.peek()
    if tok.kind == "nat":
        ts.next()
        return Nat(int(tok.text))
    if tok.kind == "name":
        if tok.text == "y1":
            ts.next()
            return Y1
        if tok.text == "y2":
            ts.next()
            return Y2
        m = _Z_PATTERN.match(tok.text)
        if m:
            ts.next()
            index = int(m.group(1))
            if index < 1:
                raise ParseError("parameter indices start at 1", tok.line, tok.col)
            return Param(index)
    raise ParseError(f"expected a term, found {tok.text!r}", tok.line, tok.col)


def _parse_quants(ts: _Stream) -> tuple:
    prefix = []
    while len(prefix) < 2:
        tok = ts.peek()
        follow = ts.peek(1)
        if tok.kind == "name" and tok.text in ("E", "A") \
                and follow.kind == "name" and follow.text in ("y1", "y2"):
            ts.next()
            ts.next()
            prefix.append((EXISTS if tok.text == "E" else FORALL,
                           1 if follow.text == "y1" else 2))
        else:
            break
    return tuple(prefix)


def _parse_path(ts: _Stream) -> logic.PathFormula:
    tok = ts.peek()
    if tok.kind == "name" and tok.text in ("X", "G", "F"):
        ts.next()
        arg = _parse_formula_expr(ts)
        if tok.text == "X":
            return Next(arg)
        if tok.text == "G":
            return Globally(arg)
        return eventually(arg)
    if tok.kind == "sym" and tok.text == "(":
        ts.next()
        lhs = _parse_formula_expr(ts)
        ts.expect("name", "U")
        rhs = _parse_formula_expr(ts)
        ts.expect("sym", ")")
        return Until(lhs, rhs)
    raise ParseError(f"expected a temporal operator, found {tok.text!r}",
                     tok.line, tok.col)


def _parse_formula_unary(ts: _Stream) -> StateFormula:
    tok = ts.peek()
    if ts.accept("sym", "!"):
        return NotF(_parse_formula_unary(ts))
    quants = _parse_quants(ts)
    if quants or (tok.kind == "sym" and tok.text == "<<"):
        ts.expect("sym", "<<")
        t1 = _parse_term(ts)
        ts.expect("sym", ",")
        t2 = _parse_term(ts)
        ts.expect("sym", ">>")
        coop = Coop(t1, t2, _parse_path(ts))
        if t1 == Y2:
            raise SemanticError("y2 cannot stand in the first position",
                                tok.line, tok.col)
        if t2 == Y1:
            raise SemanticError("y1 cannot stand in the second position",
                                tok.line, tok.col)
        return Quant(quants, coop) if quants else coop
    if ts.accept("sym", "("):
        inner = _parse_formula_expr(ts)
        ts.expect("sym", ")")
        return inner
    if tok.kind == "name" and tok.text == "true":
        ts.next()
        return Top()
    if tok.kind == "name" and tok.text not in RESERVED \
            and tok.text not in ("y1", "y2") and not _Z_PATTERN.match(tok.text):
        ts.next()
        return Prop(tok.text)
    raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                     tok.line, tok.col)


def _parse_formula_and(ts: _Stream) -> StateFormula:
    out = _parse_formula_unary(ts)
    while ts.accept("sym", "&"):
        out = AndF(out, _parse_formula_unary(ts))
    return out


def _parse_formula_or(ts: _Stream) -> StateFormula:
    out = _parse_formula_and(ts)
    while ts.accept("sym", "|"):
        out = OrF(out, _parse_formula_and(ts))
    return out


def _parse_formula_expr(ts: _Stream) -> StateFormula:
    lhs = _parse_formula_or(ts)
    if ts.accept("sym", "->"):
        rhs = _parse_formula_expr(ts)
        return OrF(NotF(lhs), rhs)
    if ts.accept("sym", "<->"):
        rhs = _parse_formula_expr(ts)
        return AndF(OrF(NotF(lhs), rhs), OrF(NotF(rhs), lhs))
    return lhs


def parse_formula(text: str) -> StateFormula:
    """Parse a state formula; the result passes the syntactic checks."""
    ts = _Stream(tokenize(text))
    out = _parse_formula_expr(ts)
    ts.expect("eof")
    issues = check_syntax(out)
    if issues:
        raise SemanticError("; ".join(str(i) for i in issues))
    return out


# ---------------------------------------------------------------------------
# model DSL


@dataclass
class ModelDocument:
    """Parsed model plus the source and per-declaration source positions."""

    source: str
    model: HdmasModel
    spans: dict = field(default_factory=dict)


_NAME_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _check_name(tok: Token, what: str) -> str:
    if tok.text in RESERVED or tok.text in ("y1", "y2") or _Z_PATTERN.match(tok.text):
        raise SemanticError(f"{tok.text!r} is reserved and cannot name a {what}",
                            tok.line, tok.col)
    return tok.text


def parse_model(text: str) -> ModelDocument:
    """Parse the model DSL; idle is implicitly available everywhere."""
    ts = _Stream(tokenize(text))
    actions: list[str] = []
    props: list[str] = []
    states: list[str] = []
    avail: dict[str, frozenset[str]] = {}
    labels: dict[str, frozenset[str]] = {}
    guard_texts: dict[tuple[str, str], PresFormula] = {}
    else_edges: dict[str, str] = {}
    spans: dict = {}

    def names_until(stop: str) -> list[Token]:
        got = []
        while ts.peek().kind == "name":
            got.append(ts.next())
        ts.expect("sym", stop)
        return got

    while ts.peek().kind != "eof":
        tok = ts.expect("name")
        if tok.text == "actions":
            if actions:
                raise SemanticError("duplicate actions declaration", tok.line, tok.col)
            for t in names_until(";"):
                name = _check_name(t, "action")
                if name in actions:
                    raise SemanticError(f"duplicate action {name!r}", t.line, t.col)
                actions.append(name)
                spans[("action", name)] = (t.line, t.col)
            if not actions:
                raise SemanticError("at least one action is required",
                                    tok.line, tok.col)
        elif tok.text == "props":
            for t in names_until(";"):
                name = _check_name(t, "proposition")
                if name in props:
                    raise SemanticError(f"duplicate proposition {name!r}",
                                        t.line, t.col)
                props.append(name)
                spans[("prop", name)] = (t.line, t.col)
        elif tok.text == "state":
            t = ts.expect("name")
            name = _check_name(t, "state")
            if name in states:
                raise SemanticError(f"duplicate state {name!r}", t.line, t.col)
            states.append(name)
            spans[("state", name)] = (t.line, t.col)
            ts.expect("sym", "{")
            ts.expect("name", "avail")
            ts.expect("sym", ":")
            listed = names_until(";")
            ts.expect("name", "label")
            ts.expect("sym", ":")
            labelled = names_until(";")
            ts.expect("sym", "}")
            for a in listed:
                if a.text not in actions:
                    raise SemanticError(f"unknown action {a.text!r}", a.line, a.col)
            for p in labelled:
                if p.text not in props:
                    raise SemanticError(f"unknown proposition {p.text!r}",
                                        p.line, p.col)
            avail[name] = frozenset(a.text for a in listed) | {IDLE}
            labels[name] = frozenset(p.text for p in labelled)
        elif tok.text == "guard":
            src = ts.expect("name")
            ts.expect("sym", "->")
            dst = ts.expect("name")
            ts.expect("sym", ":")
            spans[("guard", src.text, dst.text)] = (src.line, src.col)
            if src.text not in states:
                raise SemanticError(f"unknown state {src.text!r}", src.line, src.col)
            if dst.text not in states:
                raise SemanticError(f"unknown state {dst.text!r}", dst.line, dst.col)
            if (src.text, dst.text) in guard_texts or \
                    else_edges.get(src.text) == dst.text:
                raise SemanticError(f"duplicate guard {src.text} -> {dst.text}",
                                    src.line, src.col)
            if ts.peek().kind == "name" and ts.peek().text == "else":
                ts.next()
                if src.text in else_edges:
                    raise SemanticError(f"state {src.text!r} already has an "
                                        "else edge", src.line, src.col)
                else_edges[src.text] = dst.text
            else:
                guard_texts[(src.text, dst.text)] = _parse_guard_expr(ts)
            ts.expect("sym", ";")
        else:
            raise ParseError(f"unexpected declaration {tok.text!r}",
                             tok.line, tok.col)

    if not states:
        raise SemanticError("a model needs at least one state")

    # expand else edges into the conjunction of the negated sibling guards
    for src, dst in else_edges.items():
        siblings = [g for (s, _), g in guard_texts.items() if s == src]
        guard_texts[(src, dst)] = conj(tuple(neg(g) for g in siblings))

    table = ActionTable(tuple(actions))
    model = HdmasModel(states=tuple(states), table=table, avail=avail,
                       guards=guard_texts, props=tuple(props), labels=labels)

    for (src, dst), g in guard_texts.items():
        line, col = spans.get(("guard", src, dst), (0, 0))
        if not is_quantifier_free(g):
            raise SemanticError("guards must be quantifier-free", line, col)
        legal = {counter_name(a) for a in model.avail[src]} - {counter_name(IDLE)}
        stray = free_vars(g) - legal
        if stray:
            raise SemanticError(
                f"guard {src} -> {dst} uses counters unavailable at {src}: "
                + ", ".join(sorted(stray)), line, col)

    return ModelDocument(source=text, model=model, spans=spans)


def model_to_text(model: HdmasModel) -> str:
    """Render a model back into the DSL; inverse of parse_model."""
    lines = ["actions " + " ".join(model.table.actions) + ";"]
    if model.props:
        lines.append("props " + " ".join(model.props) + ";")
    for s in model.states:
        listed = " ".join(a for a in model.table.actions if a in model.avail[s])
        labelled = " ".join(p for p in model.props if p in model.labels[s])
        avail_part = f"avail: {listed};" if listed else "avail: ;"
        label_part = f"label: {labelled};" if labelled else "label: ;"
        lines.append(f"state {s} {{ {avail_part} {label_part} }}")
    for (src, dst), g in model.guards.items():
        lines.append(f"guard {src} -> {dst} : {guard_to_str(g)};")
    return "\n".join(lines) + "\n"
