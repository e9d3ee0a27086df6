"""Lexer and recursive-descent parser for the surface language.

Surface syntax (statements separated by ";", comments run "//" to end of
line):

    skip
    X = e       X += e      X -= e      name[e] = e'   (also += / -=)
    begin P end
    if b then P [else Q] end
    while b do P end
    var X = e
    arr[n] name
    proc name is P end
    remove X = e | remove arr[n] name | remove proc name is P end
    call name
    par { P } { Q }         S par S

Boolean expressions: T, F, !b, b && b, e == e', e > e', e < e' (sugar for
the flipped >), parenthesized. Arithmetic: integer literals, names, array
reads name[e], + and -, parenthesized.

The parser emits trees without construct ids, paths, uids or stacks; the
preprocessor assigns all of those.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .lang import (
    And,
    ArrDecl,
    ArrRead,
    ArrRemove,
    Assign,
    BExpr,
    BinOp,
    Block,
    BoolLit,
    Call,
    Cmp,
    AExpr,
    Empty,
    If,
    Not,
    Num,
    Par,
    ProcDecl,
    ProcRemove,
    Program,
    Single,
    Skip,
    Span,
    Var,
    VarDecl,
    VarRemove,
    While,
    seq_from_list,
)

KEYWORDS = {
    "begin", "end", "var", "arr", "proc", "remove", "call",
    "if", "then", "else", "while", "do", "par", "skip", "is", "T", "F",
}

FORBIDDEN = {"runc", "abort"}

SYMBOLS = ["+=", "-=", "==", "&&", "<", ">", "=", "+", "-", "(", ")", "[", "]", "{", "}", ";", "!"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "num" | "sym" | "kw" | "eof"
    text: str
    line: int
    col: int


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            start = i
            while i < n and src[i].isdigit():
                i += 1
            tokens.append(Token("num", src[start:i], line, col))
            col += i - start
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (src[i].isalnum() or src[i] == "_"):
                i += 1
            text = src[start:i]
            kind = "kw" if text in KEYWORDS else "name"
            tokens.append(Token(kind, text, line, col))
            col += i - start
            continue
        for sym in SYMBOLS:
            if src.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    # -- token helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.line, t.col)
        return self.next()

    def fail(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.col)

    # -- programs

    def parse_program(self, stop: tuple) -> Program:
        items = [self.parse_par_term(stop)]
        while self.at("sym", ";"):
            self.next()
            if self._at_stop(stop):  # tolerate a trailing separator
                break
            items.append(self.parse_par_term(stop))
        return seq_from_list(items)

    def _at_stop(self, stop: tuple) -> bool:
        t = self.peek()
        if t.kind == "eof":
            return True
        return (t.kind == "kw" and t.text in stop) or (t.kind == "sym" and t.text in stop)

    def parse_par_term(self, stop: tuple) -> Program:
        left = self.parse_unit(stop)
        while self.at("kw", "par") and self.peek(1).text != "{":
            self.next()
            right = self.parse_unit(stop)
            left = Par(left, right)
        return left

    def parse_unit(self, stop: tuple) -> Program:
        if self.at("kw", "par"):
            span = self._span()
            self.next()
            self.expect("sym", "{")
            left = self.parse_program(("}",))
            self.expect("sym", "}")
            self.expect("sym", "{")
            right = self.parse_program(("}",))
            self.expect("sym", "}")
            out: Program = Par(left, right)
            while self.at("sym", "{"):  # three or more arms chain to the left
                self.next()
                more = self.parse_program(("}",))
                self.expect("sym", "}")
                out = Par(out, more)
            del span
            return out
        return Single(self.parse_stmt())

    # -- statements

    def _span(self) -> Span:
        t = self.peek()
        return Span(t.line, t.col)

    def parse_stmt(self):
        t = self.peek()
        span = Span(t.line, t.col)
        if t.kind == "kw":
            if t.text == "skip":
                self.next()
                return Skip(span=span)
            if t.text == "begin":
                self.next()
                body = self.parse_program(("end",))
                self.expect("kw", "end")
                return Block(span=span, body=body)
            if t.text == "if":
                self.next()
                cond = self.parse_bexpr()
                self.expect("kw", "then")
                then = self.parse_program(("else", "end"))
                if self.at("kw", "else"):
                    self.next()
                    els = self.parse_program(("end",))
                else:
                    els = Single(Skip(span=span))
                self.expect("kw", "end")
                return If(span=span, cond=cond, then=then, els=els)
            if t.text == "while":
                self.next()
                cond = self.parse_bexpr()
                self.expect("kw", "do")
                body = self.parse_program(("end",))
                self.expect("kw", "end")
                return While(span=span, cond=cond, body=body)
            if t.text == "var":
                self.next()
                name = self.expect("name").text
                self.expect("sym", "=")
                return VarDecl(span=span, name=name, expr=self.parse_aexpr())
            if t.text == "arr":
                self.next()
                self.expect("sym", "[")
                size = int(self.expect("num").text)
                self.expect("sym", "]")
                name = self.expect("name").text
                return ArrDecl(span=span, name=name, size=size)
            if t.text == "proc":
                self.next()
                name = self.expect("name").text
                self.expect("kw", "is")
                body = self.parse_program(("end",))
                self.expect("kw", "end")
                return ProcDecl(span=span, name=name, body=body)
            if t.text == "call":
                self.next()
                return Call(span=span, name=self.expect("name").text)
            if t.text == "remove":
                self.next()
                return self.parse_removal(span)
            self.fail(f"unexpected keyword {t.text!r}")
        if t.kind == "name":
            if t.text in FORBIDDEN:
                self.fail(f"{t.text!r} is not allowed in source programs")
            self.next()
            name = t.text
            index: Optional[AExpr] = None
            if self.at("sym", "["):
                self.next()
                index = self.parse_aexpr()
                self.expect("sym", "]")
            op_tok = self.peek()
            if op_tok.kind == "sym" and op_tok.text in ("=", "+=", "-="):
                self.next()
                expr = self.parse_aexpr()
                return Assign(span=span, name=name, index=index, op=op_tok.text, expr=expr)
            self.fail("expected '=', '+=' or '-=' after assignment target")
        self.fail(f"expected a statement, found {t.text or t.kind!r}")

    def parse_removal(self, span: Span):
        if self.at("kw", "arr"):
            self.next()
            self.expect("sym", "[")
            size = int(self.expect("num").text)
            self.expect("sym", "]")
            name = self.expect("name").text
            return ArrRemove(span=span, name=name, size=size)
        if self.at("kw", "proc"):
            self.next()
            name = self.expect("name").text
            self.expect("kw", "is")
            body = self.parse_program(("end",))
            self.expect("kw", "end")
            return ProcRemove(span=span, name=name, body=body)
        name = self.expect("name").text
        self.expect("sym", "=")
        return VarRemove(span=span, name=name, expr=self.parse_aexpr())

    # -- expressions

    def parse_aexpr(self) -> AExpr:
        left = self.parse_aterm()
        while self.at("sym", "+") or self.at("sym", "-"):
            op = self.next().text
            left = BinOp(op, left, self.parse_aterm())
        return left

    def parse_aterm(self) -> AExpr:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Num(int(t.text))
        if t.kind == "sym" and t.text == "-" and self.peek(1).kind == "num":
            self.next()
            return Num(-int(self.next().text))
        if t.kind == "name":
            self.next()
            if self.at("sym", "["):
                self.next()
                index = self.parse_aexpr()
                self.expect("sym", "]")
                return ArrRead(t.text, index)
            return Var(t.text)
        if t.kind == "sym" and t.text == "(":
            self.next()
            inner = self.parse_aexpr()
            self.expect("sym", ")")
            return inner
        self.fail(f"expected an expression, found {t.text or t.kind!r}")

    def parse_bexpr(self) -> BExpr:
        left = self.parse_bterm()
        while self.at("sym", "&&"):
            self.next()
            left = And(left, self.parse_bterm())
        return left

    def parse_bterm(self) -> BExpr:
        t = self.peek()
        if t.kind == "kw" and t.text == "T":
            self.next()
            return BoolLit(True)
        if t.kind == "kw" and t.text == "F":
            self.next()
            return BoolLit(False)
        if t.kind == "sym" and t.text == "!":
            self.next()
            return Not(self.parse_bterm())
        if t.kind == "sym" and t.text == "(":
            # either a parenthesized boolean or the left side of a comparison
            save = self.pos
            self.next()
            try:
                inner = self.parse_bexpr()
                self.expect("sym", ")")
                if self.peek().kind == "sym" and self.peek().text in ("==", ">", "<", "+", "-"):
                    raise ParseError("comparison", t.line, t.col)
                return inner
            except ParseError:
                self.pos = save
        return self.parse_cmp()

    def parse_cmp(self) -> BExpr:
        left = self.parse_aexpr()
        t = self.peek()
        if t.kind == "sym" and t.text == "==":
            self.next()
            return Cmp("==", left, self.parse_aexpr())
        if t.kind == "sym" and t.text == ">":
            self.next()
            return Cmp(">", left, self.parse_aexpr())
        if t.kind == "sym" and t.text == "<":
            self.next()
            right = self.parse_aexpr()
            return Cmp(">", right, left)  # e1 < e2 lowers to e2 > e1
        self.fail("expected a comparison operator")


def parse(src: str) -> Program:
    """Parse a source program. Raises ParseError with line:col on failure.

    An all-whitespace source is the empty program."""
    p = Parser(src)
    if p.peek().kind == "eof":
        return Empty()
    prog = p.parse_program(())
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.col)
    return prog
