"""
Recursive-descent reader for the surface grammar.

Types:  A -o B | A + B | A & B | A * B | ![r] A | I | 0 | Top | base | Base 'base'
Terms:  \\x:A. t | t u | (t, u) | let (x, y) = t in u | () | let () = t in u
        | inl t | inr t | case t of {inl x -> u | inr y -> v} | absurd t
        | <> | <t, u> | t .1 | t .2 | ! r t | let !x = t in u
        | (t : C)        motive of an eliminator
        | ... @{P; Q}    split annotation after the construct (@{P} on ! r t, @{} on ())
Judgments:  x :r A, y :q B |- t : C
"""

import re
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Set, Tuple

from lang.errors import ParseError
from lang.syntax import (
    App, Bang, BangE, BangI, Base, Case, Eat, ELIMINATORS, ExF, Fun, InjL, InjR, Lam, One, Pair,
    PairE, ProjL, ProjR, Scale, Sum, Tensor, Term, Top, Two, Ty, TyCtx, UnitE, UnitI, Var, With,
    WithI, Zero, ZeroSplit, has_split_slot,
)
from usage_ops.linalg import UsageCtx
from usage_ops.semiring import SkewSemiring, Usage

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sym>\|-|\|v(?![\w'])|-o|->|<>|@\{|\.[12](?![\w'])|/\\|\\/|=>|\[\]|[\\.(),<>!{};|:=*&+\[\]\#])
  | (?P<num>\d+)
  | (?P<quoted>'[A-Za-z_][A-Za-z0-9_]*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"let", "in", "case", "of", "inl", "inr", "absurd", "I", "Top"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class TypeGrammar:
    """Operator table for one family of types; subclasses supply prefix forms and atoms."""

    # (operator, constructor, right associative), loosest first
    binary: Sequence[Tuple[str, Callable, bool]] = ()

    def prefix(self, p: "Parser") -> Optional[object]:
        return None

    def atom(self, p: "Parser") -> object:
        raise NotImplementedError


class LrTypes(TypeGrammar):
    binary = (("-o", Fun, True), ("+", Sum, False), ("&", With, False), ("*", Tensor, False))

    def prefix(self, p):
        if p.accept("!"):
            p.expect("[")
            u = p.usage()
            p.expect("]")
            return Bang(u, p.prefix_type(self))
        return None

    def atom(self, p):
        if p.accept("("):
            t = p.type(self)
            p.expect(")")
            return t
        tok = p.next()
        if tok.text == "I":
            return One()
        if tok.text == "Top":
            return Top()
        if tok.text == "0":
            return Zero()
        if tok.text == "Base" and p.peek().kind == "quoted":
            quoted = p.next()
            return Base(p.base_name(Token("ident", quoted.text.strip("'"), quoted.pos)))
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            return Base(p.base_name(tok))
        raise p.error(tok, "a type")


LR_TYPES = LrTypes()


class Parser:
    def __init__(self, text: str, sr: Optional[SkewSemiring] = None, bases: Optional[Set[str]] = None):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.sr = sr
        self.bases = bases

    # Token plumbing

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind != "eof" and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            raise self.error(tok, f"'{text}'")
        return tok

    def error(self, tok: Token, wanted: str) -> ParseError:
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"expected {wanted} but found {found} at offset {tok.pos}")

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(tok, "end of input")

    def ident(self) -> str:
        tok = self.next()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(tok, "a variable name")
        return tok.text

    def base_name(self, tok: Token) -> str:
        if self.bases is not None and tok.text not in self.bases:
            raise ParseError(f"undeclared base type '{tok.text}' at offset {tok.pos}")
        return tok.text

    def usage(self) -> Usage:
        if self.sr is None:
            raise ParseError("usage literals need a semiring")
        tok = self.next()
        if tok.kind == "eof":
            raise self.error(tok, "a usage")
        return self.sr.parse(tok.text)

    def usage_vector(self, stops: Sequence[str]) -> UsageCtx:
        out = []
        while not any(self.at(s) for s in stops):
            out.append(self.usage())
        return tuple(out)

    # Types

    def type(self, grammar: TypeGrammar = LR_TYPES, level: int = 0):
        if level == len(grammar.binary):
            return self.prefix_type(grammar)
        op, ctor, right = grammar.binary[level]
        left = self.type(grammar, level + 1)
        if right:
            if self.accept(op):
                return ctor(left, self.type(grammar, level))
            return left
        while self.accept(op):
            left = ctor(left, self.type(grammar, level + 1))
        return left

    def prefix_type(self, grammar: TypeGrammar):
        t = grammar.prefix(self)
        return t if t is not None else grammar.atom(self)

    # Terms

    def term(self, names: List[str]) -> Term:
        if self.accept("\\"):
            x = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(".")
            return Lam(ty, self.term(names + [x]), name=x)
        if self.at("let"):
            return self._let(names)
        if self.at("case"):
            return self._case(names)
        return self._app(names)

    def _let(self, names: List[str]) -> Term:
        self.expect("let")
        if self.accept("!"):
            x = self.ident()
            self.expect("=")
            scrut = self.term(names)
            self.expect("in")
            return BangE(scrut, self.term(names + [x]), name=x)
        self.expect("(")
        if self.accept(")"):
            self.expect("=")
            scrut = self.term(names)
            self.expect("in")
            return UnitE(scrut, self.term(names))
        x = self.ident()
        self.expect(",")
        y = self.ident()
        self.expect(")")
        self.expect("=")
        scrut = self.term(names)
        self.expect("in")
        return PairE(scrut, self.term(names + [x, y]), names=(x, y))

    def _case(self, names: List[str]) -> Term:
        self.expect("case")
        scrut = self.term(names)
        self.expect("of")
        self.expect("{")
        self.expect("inl")
        x = self.ident()
        self.expect("->")
        left = self.term(names + [x])
        self.expect("|")
        self.expect("inr")
        y = self.ident()
        self.expect("->")
        right = self.term(names + [y])
        self.expect("}")
        return Case(scrut, left, right, names=(x, y))

    def _starts_atom(self) -> bool:
        tok = self.peek()
        if tok.kind == "ident":
            return tok.text not in KEYWORDS
        return tok.text in ("(", "<>", "<") and tok.kind == "sym"

    def _app(self, names: List[str]) -> Term:
        t = self._head(names)
        while self._starts_atom():
            arg = self._atom(names)
            t = App(t, arg, split=self._maybe_two())
        return t

    def _head(self, names: List[str]) -> Term:
        if self.accept("inl"):
            t = InjL(self._atom(names))
        elif self.accept("inr"):
            t = InjR(self._atom(names))
        elif self.accept("absurd"):
            t = ExF(self._atom(names))
        elif self.accept("!"):
            u = self.usage()
            t = BangI(u, self._atom(names))
        else:
            t = self._atom(names)
        if self.at("@{"):
            t = self._attach(t)
        while True:
            if self.accept(".1"):
                t = ProjL(t)
            elif self.accept(".2"):
                t = ProjR(t)
            else:
                return t

    def _atom(self, names: List[str]) -> Term:
        tok = self.next()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            for pos in range(len(names) - 1, -1, -1):
                if names[pos] == tok.text:
                    return Var(len(names) - 1 - pos)
            raise ParseError(f"unbound variable '{tok.text}' at offset {tok.pos}")
        if tok.text == "<>":
            return Eat()
        if tok.text == "<":
            left = self.term(names)
            self.expect(",")
            right = self.term(names)
            self.expect(">")
            return WithI(left, right)
        if tok.text == "(":
            if self.accept(")"):
                return UnitI()
            t = self.term(names)
            if self.accept(","):
                u = self.term(names)
                self.expect(")")
                return Pair(t, u)
            if self.accept(":"):
                motive = self.type()
                self.expect(")")
                return self._ascribe(t, motive, tok)
            self.expect(")")
            return t
        raise self.error(tok, "a term")

    def _ascribe(self, t: Term, motive: Ty, tok: Token) -> Term:
        if not isinstance(t, ELIMINATORS):
            raise ParseError(f"type ascription at offset {tok.pos} is only allowed on eliminators")
        if t.ty is not None and t.ty != motive:
            raise ParseError(f"conflicting ascriptions at offset {tok.pos}")
        return replace(t, ty=motive)

    def _split(self):
        self.expect("@{")
        left = self.usage_vector([";", "}"])
        if self.accept(";"):
            right = self.usage_vector(["}"])
            self.expect("}")
            return Two(left, right)
        self.expect("}")
        return Scale(left)

    def _maybe_two(self) -> Optional[Two]:
        if not self.at("@{"):
            return None
        tok = self.peek()
        split = self._split()
        if not isinstance(split, Two):
            raise ParseError(f"application at offset {tok.pos} needs a two-part split @{{P; Q}}")
        return split

    def _attach(self, t: Term) -> Term:
        tok = self.peek()
        split = self._split()
        if isinstance(t, UnitI):
            if split != Scale(()) or t.split is not None:
                raise ParseError(f"a unit takes the empty split @{{}} at offset {tok.pos}")
            return replace(t, split=ZeroSplit())
        if not has_split_slot(t) or t.split is not None:
            raise ParseError(f"split annotation at offset {tok.pos} has nothing to annotate")
        wanted = Scale if isinstance(t, BangI) else Two
        if not isinstance(split, wanted):
            raise ParseError(f"split annotation at offset {tok.pos} has the wrong shape for {type(t).__name__}")
        return replace(t, split=split)

    # Judgments

    def binding_list(self, stops: Sequence[str], with_usage: bool,
                     grammar: TypeGrammar = LR_TYPES) -> List[Tuple[str, Optional[Usage], object]]:
        out = []
        if any(self.at(s) for s in stops):
            return out
        while True:
            x = self.ident()
            self.expect(":")
            u = self.usage() if with_usage else None
            out.append((x, u, self.type(grammar)))
            if not self.accept(","):
                return out

    def judgment(self) -> Tuple[TyCtx, UsageCtx, Term, Ty]:
        bindings = self.binding_list(["|-"], with_usage=True)
        self.expect("|-")
        names = [x for x, _, _ in bindings]
        term = self.term(names)
        self.expect(":")
        ty = self.type()
        self.expect_end()
        ctx = TyCtx(tuple((x, a) for x, _, a in bindings))
        return ctx, tuple(u for _, u, _ in bindings), term, ty


def parse_type(text: str, sr: Optional[SkewSemiring] = None, bases: Optional[Set[str]] = None) -> Ty:
    p = Parser(text, sr, bases)
    t = p.type()
    p.expect_end()
    return t


def parse_term(text: str, sr: Optional[SkewSemiring] = None, names: Sequence[str] = (),
               bases: Optional[Set[str]] = None) -> Term:
    p = Parser(text, sr, bases)
    t = p.term(list(names))
    p.expect_end()
    return t


def parse_judgment(text: str, sr: SkewSemiring,
                   bases: Optional[Set[str]] = None) -> Tuple[TyCtx, UsageCtx, Term, Ty]:
    return Parser(text, sr, bases).judgment()
