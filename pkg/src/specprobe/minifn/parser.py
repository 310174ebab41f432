"""Lexer and recursive-descent parser for MiniFn source text.

Parsing is total: any input either yields a FunctionDef or raises
ParseError with a 1-based line/column. Type errors are left to the
checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .syntax import (
    BOOL,
    FLOAT,
    INT,
    INT64_MAX,
    INT64_MIN,
    STR,
    Assign,
    BinOp,
    BoolLit,
    Call,
    Expr,
    FloatLit,
    For,
    FunctionDef,
    If,
    Index,
    IntLit,
    Let,
    ListLit,
    Raise,
    Return,
    Stmt,
    StrLit,
    Type,
    UnOp,
    Var,
    While,
    list_of,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


KEYWORDS = {
    "fn", "let", "if", "else", "while", "for", "in", "return", "raise",
    "true", "false", "nan", "inf", "and", "or", "not",
    "Int", "Float", "Bool", "Str", "List",
}

_PUNCT = [
    "==", "!=", "<=", ">=", "->",
    "(", ")", "{", "}", "[", "]", ",", ";", ":",
    "+", "-", "*", "/", "%", "<", ">", "=",
]


@dataclass
class Token:
    kind: str  # ident | keyword | int | float | str | punct | eof
    text: str
    line: int
    col: int
    value: object = None


def tokenize(source: str) -> List[Token]:
    toks: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":  # line comment
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_float = False
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            if is_float:
                toks.append(Token("float", text, start_line, start_col, float(text)))
            else:
                toks.append(Token("int", text, start_line, start_col, int(text)))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            toks.append(Token(kind, text, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            out: List[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    raise ParseError("unterminated string literal", start_line, start_col)
                c = source[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    if j + 1 >= n:
                        raise ParseError("unterminated escape", start_line, start_col)
                    esc = source[j + 1]
                    if esc == "n":
                        out.append("\n")
                    elif esc == "t":
                        out.append("\t")
                    elif esc == "r":
                        out.append("\r")
                    elif esc == '"':
                        out.append('"')
                    elif esc == "\\":
                        out.append("\\")
                    elif esc == "u":
                        hexs = source[j + 2 : j + 6]
                        if len(hexs) != 4 or any(c not in "0123456789abcdefABCDEF" for c in hexs):
                            raise ParseError("bad \\u escape", start_line, start_col)
                        out.append(chr(int(hexs, 16)))
                        j += 4
                    else:
                        raise ParseError(f"unknown escape \\{esc}", start_line, start_col)
                    j += 2
                else:
                    out.append(c)
                    j += 1
            toks.append(Token("str", source[i:j], start_line, start_col, "".join(out)))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                toks.append(Token("punct", p, start_line, start_col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.line, t.col)
        return self.next()

    def err(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # -- grammar

    def function(self) -> FunctionDef:
        self.expect("keyword", "fn")
        name = self.expect("ident").text
        self.expect("punct", "(")
        params: List[Tuple[str, Type]] = []
        if not self.at("punct", ")"):
            while True:
                pname = self.expect("ident").text
                self.expect("punct", ":")
                params.append((pname, self.type_expr()))
                if self.at("punct", ","):
                    self.next()
                    continue
                break
        self.expect("punct", ")")
        self.expect("punct", "->")
        ret = self.type_expr()
        body = self.block()
        self.expect("eof")
        return FunctionDef(name, tuple(params), ret, body)

    def type_expr(self) -> Type:
        t = self.peek()
        if t.kind == "keyword" and t.text in ("Int", "Float", "Bool", "Str"):
            self.next()
            return {"Int": INT, "Float": FLOAT, "Bool": BOOL, "Str": STR}[t.text]
        if t.kind == "keyword" and t.text == "List":
            self.next()
            self.expect("punct", "(")
            elem = self.type_expr()
            self.expect("punct", ")")
            return list_of(elem)
        raise self.err(f"expected a type, found {t.text or t.kind!r}")

    def block(self) -> Tuple[Stmt, ...]:
        self.expect("punct", "{")
        stmts: List[Stmt] = []
        while not self.at("punct", "}"):
            if self.at("eof"):
                raise self.err("unterminated block")
            stmts.append(self.statement())
        self.next()
        return tuple(stmts)

    def statement(self) -> Stmt:
        t = self.peek()
        pos = (t.line, t.col)
        if self.at("keyword", "let"):
            self.next()
            name = self.expect("ident").text
            self.expect("punct", "=")
            e = self.expression()
            self.expect("punct", ";")
            return Let(pos, name, e)
        if self.at("keyword", "return"):
            self.next()
            e = self.expression()
            self.expect("punct", ";")
            return Return(pos, e)
        if self.at("keyword", "raise"):
            self.next()
            self.expect("punct", "(")
            msg = self.expression()
            self.expect("punct", ")")
            self.expect("punct", ";")
            return Raise(pos, msg)
        if self.at("keyword", "if"):
            self.next()
            cond = self.expression()
            then = self.block()
            els: Tuple[Stmt, ...] = ()
            if self.at("keyword", "else"):
                self.next()
                if self.at("keyword", "if"):
                    els = (self.statement(),)
                else:
                    els = self.block()
            return If(pos, cond, then, els)
        if self.at("keyword", "while"):
            self.next()
            cond = self.expression()
            return While(pos, cond, self.block())
        if self.at("keyword", "for"):
            self.next()
            var = self.expect("ident").text
            self.expect("keyword", "in")
            seq = self.expression()
            return For(pos, var, seq, self.block())
        if self.at("ident"):
            name = self.next().text
            self.expect("punct", "=")
            e = self.expression()
            self.expect("punct", ";")
            return Assign(pos, name, e)
        raise self.err(f"expected a statement, found {t.text or t.kind!r}")

    # precedence: or < and < not < comparison < additive < multiplicative < unary

    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.at("keyword", "or"):
            t = self.next()
            e = BinOp((t.line, t.col), "or", e, self.and_expr())
        return e

    def and_expr(self) -> Expr:
        e = self.not_expr()
        while self.at("keyword", "and"):
            t = self.next()
            e = BinOp((t.line, t.col), "and", e, self.not_expr())
        return e

    def not_expr(self) -> Expr:
        if self.at("keyword", "not"):
            t = self.next()
            return UnOp((t.line, t.col), "not", self.not_expr())
        return self.comparison()

    def comparison(self) -> Expr:
        e = self.additive()
        while self.peek().kind == "punct" and self.peek().text in ("==", "!=", "<", "<=", ">", ">="):
            t = self.next()
            e = BinOp((t.line, t.col), t.text, e, self.additive())
        return e

    def additive(self) -> Expr:
        e = self.multiplicative()
        while self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            t = self.next()
            e = BinOp((t.line, t.col), t.text, e, self.multiplicative())
        return e

    def multiplicative(self) -> Expr:
        e = self.unary()
        while self.peek().kind == "punct" and self.peek().text in ("*", "/", "%"):
            t = self.next()
            e = BinOp((t.line, t.col), t.text, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.at("punct", "-"):
            t = self.next()
            pos = (t.line, t.col)
            # fold a minus directly onto a numeric literal so that the full
            # 64-bit range (incl. INT64_MIN) round-trips through the printer
            nt = self.peek()
            if nt.kind == "int":
                self.next()
                v = -int(nt.value)  # type: ignore[arg-type]
                if v < INT64_MIN:
                    raise ParseError("integer literal out of 64-bit range", nt.line, nt.col)
                return IntLit(pos, v)
            if nt.kind == "float":
                self.next()
                return FloatLit(pos, -float(nt.value))  # type: ignore[arg-type]
            if nt.kind == "keyword" and nt.text == "inf":
                self.next()
                return FloatLit(pos, float("-inf"))
            return UnOp(pos, "-", self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.primary()
        while self.at("punct", "["):
            t = self.next()
            idx = self.expression()
            self.expect("punct", "]")
            e = Index((t.line, t.col), e, idx)
        return e

    def primary(self) -> Expr:
        t = self.peek()
        pos = (t.line, t.col)
        if t.kind == "int":
            self.next()
            if int(t.value) > INT64_MAX:  # type: ignore[arg-type]
                raise ParseError("integer literal out of 64-bit range", t.line, t.col)
            return IntLit(pos, int(t.value))  # type: ignore[arg-type]
        if t.kind == "float":
            self.next()
            return FloatLit(pos, float(t.value))  # type: ignore[arg-type]
        if t.kind == "str":
            self.next()
            return StrLit(pos, str(t.value))
        if t.kind == "keyword":
            if t.text == "true":
                self.next()
                return BoolLit(pos, True)
            if t.text == "false":
                self.next()
                return BoolLit(pos, False)
            if t.text == "nan":
                self.next()
                return FloatLit(pos, float("nan"))
            if t.text == "inf":
                self.next()
                return FloatLit(pos, float("inf"))
        if t.kind == "ident":
            name = self.next().text
            if self.at("punct", "(") and name in ("len", "abs", "is_nan"):
                self.next()
                args: List[Expr] = []
                if not self.at("punct", ")"):
                    while True:
                        args.append(self.expression())
                        if self.at("punct", ","):
                            self.next()
                            continue
                        break
                self.expect("punct", ")")
                return Call(pos, name, tuple(args))
            if self.at("punct", "("):
                raise ParseError(f"unknown function {name!r} (only len/abs/is_nan)", t.line, t.col)
            return Var(pos, name)
        if self.at("punct", "("):
            self.next()
            e = self.expression()
            self.expect("punct", ")")
            return e
        if self.at("punct", "["):
            self.next()
            items: List[Expr] = []
            if not self.at("punct", "]"):
                while True:
                    items.append(self.expression())
                    if self.at("punct", ","):
                        self.next()
                        continue
                    break
            self.expect("punct", "]")
            return ListLit(pos, tuple(items))
        raise self.err(f"expected an expression, found {t.text or t.kind!r}")


def parse(source: str) -> FunctionDef:
    """Parse one MiniFn function definition from source text."""
    return _Parser(tokenize(source)).function()


def parse_type(text: str) -> Type:
    """Parse a bare type expression, e.g. 'List(Float)'."""
    p = _Parser(tokenize(text))
    t = p.type_expr()
    p.expect("eof")
    return t
