"""Text input: polynomials, map files and matrix files.

Polynomial grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

``^`` binds tightest, so ``-x^2`` is ``-(x^2)``.  Division is only allowed
by a nonzero constant, which covers rational literals such as ``3/2``.
``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .poly import Polynomial, scalar


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<INT>\d+)|(?P<NAME>[A-Za-z][A-Za-z0-9_]*)|(?P<OP>[-+*/^()])")


def tokenize(text: str, line0: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = line0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind is not None:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("END", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], names: Sequence[str]):
        self.toks = tokens
        self.i = 0
        self.index = {name: j for j, name in enumerate(names)}
        if len(self.index) != len(names):
            raise ValueError("duplicate variable names")
        self.n = len(names)

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def parse(self) -> Polynomial:
        if self.peek().kind == "END":
            self.fail("empty expression")
        p = self.expr()
        if self.peek().kind != "END":
            self.fail(f"unexpected {self.peek().text!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek().kind == "OP" and self.peek().text in "+-":
            op = self.take().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.take()
            q = self.unary()
            if op.text == "*":
                p = p * q
            else:
                if not q.is_constant():
                    self.fail("division by a non-constant expression", op)
                if q.is_zero():
                    self.fail("zero denominator", op)
                p = p / q.constant_term()
        return p

    def unary(self) -> Polynomial:
        t = self.peek()
        if t.kind == "OP" and t.text in "+-":
            self.take()
            p = self.unary()
            return -p if t.text == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.take()
            t = self.take()
            if t.kind != "INT":
                self.fail("exponent must be a non-negative integer literal", t)
            return base ** int(t.text)
        return base

    def atom(self) -> Polynomial:
        t = self.take()
        if t.kind == "INT":
            return Polynomial.constant(self.n, scalar(int(t.text)))
        if t.kind == "NAME":
            j = self.index.get(t.text)
            if j is None:
                self.fail(f"unknown variable {t.text!r}", t)
            return Polynomial.variable(self.n, j)
        if t.kind == "OP" and t.text == "(":
            p = self.expr()
            close = self.take()
            if close.kind != "OP" or close.text != ")":
                self.fail("expected ')'", close)
            return p
        self.fail("expected a number, variable or '('" if t.kind != "END" else "unexpected end of input", t)


def parse_polynomial(text: str, names: Sequence[str], line: int = 1) -> Polynomial:
    """Parse ``text`` as a polynomial in the variables ``names`` (in order)."""
    return _Parser(tokenize(text, line), list(names)).parse()


def render_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    return p.to_str(names)


# -- map files --------------------------------------------------------------

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_map_text(text: str) -> tuple[list[str], list[Polynomial]]:
    """Parse a map file: ``vars x1 .. xn`` then ``Fi = <polynomial>`` lines."""
    names: list[str] | None = None
    comps: dict[int, Polynomial] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if names is None:
            head, *rest = line.split()
            if head != "vars" or not rest:
                raise ParseError("first line must be 'vars x1 ... xn'", lineno, 1)
            for name in rest:
                if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
                    raise ParseError(f"bad variable name {name!r}", lineno, raw.index(name) + 1)
            if len(set(rest)) != len(rest):
                raise ParseError("duplicate variable names", lineno, 1)
            names = rest
            continue
        m = re.fullmatch(r"\s*F(\d+)\s*=(.*)", raw.split("#", 1)[0])
        if m is None:
            raise ParseError("expected 'Fi = <polynomial>'", lineno, 1)
        i = int(m.group(1))
        if not 1 <= i <= len(names):
            raise ParseError(f"component index {i} out of range 1..{len(names)}", lineno, 1)
        if i in comps:
            raise ParseError(f"component F{i} given twice", lineno, 1)
        body = m.group(2)
        try:
            comps[i] = parse_polynomial(body, names)
        except ParseError as exc:
            offset = m.start(2)
            raise ParseError(exc.reason, lineno, exc.col + offset) from None
    if names is None:
        raise ParseError("empty map file", 1, 1)
    missing = [i for i in range(1, len(names) + 1) if i not in comps]
    if missing:
        raise ParseError(f"missing components: {', '.join(f'F{i}' for i in missing)}", 1, 1)
    return names, [comps[i] for i in range(1, len(names) + 1)]


def render_map_text(components: Sequence[Polynomial], names: Sequence[str] | None = None) -> str:
    n = len(components)
    names = [f"x{j + 1}" for j in range(n)] if names is None else list(names)
    lines = ["vars " + " ".join(names)]
    lines += [f"F{i + 1} = {p.to_str(names)}" for i, p in enumerate(components)]
    return "\n".join(lines) + "\n"


# -- matrix files -----------------------------------------------------------

def _parse_rational(tok: str, lineno: int):
    if not re.fullmatch(r"[-+]?\d+(/\d+)?", tok):
        raise ParseError(f"bad rational {tok!r}", lineno, 1)
    if "/" in tok and int(tok.split("/")[1]) == 0:
        raise ParseError("zero denominator", lineno, 1)
    return scalar(tok)


def _data_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line:
            out.append((lineno, line.split()))
    return out


def parse_power_linear_text(text: str):
    """Power-linear data file: ``n``, then ``d1 .. dn``, then n rows of A."""
    lines = _data_lines(text)
    if len(lines) < 2:
        raise ParseError("expected 'n', exponent line and matrix rows", 1, 1)
    lineno, head = lines[0]
    if len(head) != 1 or not head[0].isdigit() or int(head[0]) < 1:
        raise ParseError("first line must be a positive dimension n", lineno, 1)
    n = int(head[0])
    lineno, dtoks = lines[1]
    if len(dtoks) != n or not all(t.isdigit() for t in dtoks):
        raise ParseError(f"exponent line must hold {n} non-negative integers", lineno, 1)
    degrees = [int(t) for t in dtoks]
    rows = lines[2:]
    if len(rows) != n:
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}", lines[-1][0], 1)
    A = []
    for lineno, toks in rows:
        if len(toks) != n:
            raise ParseError(f"row must hold {n} entries", lineno, 1)
        A.append([_parse_rational(t, lineno) for t in toks])
    return A, degrees


def parse_matrix_text(text: str) -> list[list]:
    """Plain matrix file: a ``rows cols`` header line, then the rows."""
    lines = _data_lines(text)
    if not lines:
        raise ParseError("empty matrix file", 1, 1)
    first_no, first = lines[0]
    if len(first) != 2 or not all(t.isdigit() for t in first):
        raise ParseError("first line must be 'rows cols'", first_no, 1)
    nrows, ncols = int(first[0]), int(first[1])
    rows = lines[1:]
    if len(rows) != nrows:
        raise ParseError(f"header says {nrows} rows, found {len(rows)}", first_no, 1)
    out = []
    for ln, toks in rows:
        if len(toks) != ncols:
            raise ParseError(f"row must hold {ncols} entries", ln, 1)
        out.append([_parse_rational(t, ln) for t in toks])
    return out


def render_matrix_text(M) -> str:
    rows = [list(r) for r in M]
    cols = len(rows[0]) if rows else 0
    lines = [f"{len(rows)} {cols}"]
    lines += [" ".join(str(scalar(v)) for v in r) for r in rows]
    return "\n".join(lines) + "\n"
