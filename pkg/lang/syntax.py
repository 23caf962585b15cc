"""
Types, de Bruijn terms, typing contexts and usage-checked variables.

Index 0 is the most recently bound variable. Context *positions* count
from the left (0 is the oldest entry); for a context of length n,
de Bruijn index k sits at position n - 1 - k. Usage vectors are indexed by
position.
"""

from dataclasses import dataclass, field, fields, replace
from typing import Callable, ClassVar, List, Optional, Sequence, Set, Tuple

from lang.errors import ScopeError, UsageMismatch
from usage_ops.linalg import UsageAlgebra, UsageCtx
from usage_ops.semiring import SkewSemiring, Usage


# Types

class Ty:
    def __str__(self) -> str:
        return show_ty(self)


@dataclass(frozen=True)
class Base(Ty):
    name: str


@dataclass(frozen=True)
class Fun(Ty):
    dom: Ty
    cod: Ty


@dataclass(frozen=True)
class One(Ty):
    pass


@dataclass(frozen=True)
class Tensor(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Zero(Ty):
    pass


@dataclass(frozen=True)
class Sum(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Top(Ty):
    pass


@dataclass(frozen=True)
class With(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Bang(Ty):
    usage: Usage
    body: Ty


_TY_FUN, _TY_SUM, _TY_WITH, _TY_TENSOR, _TY_PREFIX, _TY_ATOM = range(6)


def show_ty(t: Ty, prec: int = _TY_FUN) -> str:
    if isinstance(t, Base):
        return t.name
    if isinstance(t, One):
        return "I"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Top):
        return "Top"
    if isinstance(t, Fun):
        s, own = f"{show_ty(t.dom, _TY_SUM)} -o {show_ty(t.cod, _TY_FUN)}", _TY_FUN
    elif isinstance(t, Sum):
        s, own = f"{show_ty(t.left, _TY_SUM)} + {show_ty(t.right, _TY_WITH)}", _TY_SUM
    elif isinstance(t, With):
        s, own = f"{show_ty(t.left, _TY_WITH)} & {show_ty(t.right, _TY_TENSOR)}", _TY_WITH
    elif isinstance(t, Tensor):
        s, own = f"{show_ty(t.left, _TY_TENSOR)} * {show_ty(t.right, _TY_PREFIX)}", _TY_TENSOR
    elif isinstance(t, Bang):
        s, own = f"![{t.usage}] {show_ty(t.body, _TY_PREFIX)}", _TY_PREFIX
    else:
        raise TypeError(f"not a type: {t!r}")
    return f"({s})" if prec > own else s


def type_usages(t: Ty) -> List[Usage]:
    """Every usage mentioned by a Bang inside the type."""
    if isinstance(t, Bang):
        return [t.usage] + type_usages(t.body)
    out: List[Usage] = []
    for f in fields(t):
        v = getattr(t, f.name)
        if isinstance(v, Ty):
            out.extend(type_usages(v))
    return out


# Contexts

@dataclass(frozen=True)
class TyCtx:
    entries: Tuple[Tuple[str, Ty], ...] = ()

    @classmethod
    def of(cls, *entries: Tuple[str, Ty]) -> "TyCtx":
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> List[str]:
        return [n for n, _ in self.entries]

    @property
    def types(self) -> List[Ty]:
        return [t for _, t in self.entries]

    def ty_at(self, pos: int) -> Ty:
        return self.entries[pos][1]

    def position(self, index: int) -> int:
        if not 0 <= index < len(self.entries):
            raise ScopeError(f"de Bruijn index {index} out of scope in a context of length {len(self)}")
        return len(self.entries) - 1 - index

    def extend(self, *entries: Tuple[str, Ty]) -> "TyCtx":
        return TyCtx(self.entries + tuple(entries))

    def __add__(self, other: "TyCtx") -> "TyCtx":
        return TyCtx(self.entries + other.entries)

    def prefix(self, n: int) -> "TyCtx":
        return TyCtx(self.entries[:n])

    def suffix(self, n: int) -> "TyCtx":
        return TyCtx(self.entries[n:])


def display_names(names: Sequence[str]) -> List[str]:
    """Make context names pairwise distinct by suffixing later duplicates."""
    seen: Set[str] = set()
    out = []
    for n in names:
        candidate, k = n, 1
        while candidate in seen:
            candidate = f"{n}{k}"
            k += 1
        seen.add(candidate)
        out.append(candidate)
    return out


# Split annotations

@dataclass(frozen=True)
class Two:
    left: UsageCtx
    right: UsageCtx


@dataclass(frozen=True)
class Scale:
    vec: UsageCtx


@dataclass(frozen=True)
class ZeroSplit:
    """Split of a unit introduction: there is nothing to divide."""


# Terms

class Term:
    # names of sub-term fields, and how many variables each of them binds
    _kids: ClassVar[Tuple[str, ...]] = ()
    _binds: ClassVar[Tuple[int, ...]] = ()

    def subterms(self) -> Tuple["Term", ...]:
        return tuple(getattr(self, k) for k in self._kids)

    def rebuild(self, kids: Sequence["Term"], **changes) -> "Term":
        return replace(self, **dict(zip(self._kids, kids)), **changes)


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Lam(Term):
    ty: Ty
    body: Term
    name: str = field(default="x", compare=False)
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (1,)


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    split: Optional[Two] = field(default=None, compare=False)
    _kids: ClassVar = ("fn", "arg")
    _binds: ClassVar = (0, 0)


@dataclass(frozen=True)
class UnitI(Term):
    split: Optional[ZeroSplit] = field(default=None, compare=False)


@dataclass(frozen=True)
class UnitE(Term):
    scrut: Term
    body: Term
    ty: Optional[Ty] = None
    split: Optional[Two] = field(default=None, compare=False)
    _kids: ClassVar = ("scrut", "body")
    _binds: ClassVar = (0, 0)


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term
    split: Optional[Two] = field(default=None, compare=False)
    _kids: ClassVar = ("left", "right")
    _binds: ClassVar = (0, 0)


@dataclass(frozen=True)
class PairE(Term):
    scrut: Term
    body: Term
    ty: Optional[Ty] = None
    split: Optional[Two] = field(default=None, compare=False)
    names: Tuple[str, str] = field(default=("x", "y"), compare=False)
    _kids: ClassVar = ("scrut", "body")
    _binds: ClassVar = (0, 2)


@dataclass(frozen=True)
class ExF(Term):
    scrut: Term
    ty: Optional[Ty] = None
    split: Optional[Two] = field(default=None, compare=False)
    _kids: ClassVar = ("scrut",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class InjL(Term):
    body: Term
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class InjR(Term):
    body: Term
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class Case(Term):
    scrut: Term
    left: Term
    right: Term
    ty: Optional[Ty] = None
    split: Optional[Two] = field(default=None, compare=False)
    names: Tuple[str, str] = field(default=("x", "y"), compare=False)
    _kids: ClassVar = ("scrut", "left", "right")
    _binds: ClassVar = (0, 1, 1)


@dataclass(frozen=True)
class Eat(Term):
    pass


@dataclass(frozen=True)
class ProjL(Term):
    body: Term
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class ProjR(Term):
    body: Term
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class WithI(Term):
    left: Term
    right: Term
    _kids: ClassVar = ("left", "right")
    _binds: ClassVar = (0, 0)


@dataclass(frozen=True)
class BangI(Term):
    usage: Usage
    body: Term
    split: Optional[Scale] = field(default=None, compare=False)
    _kids: ClassVar = ("body",)
    _binds: ClassVar = (0,)


@dataclass(frozen=True)
class BangE(Term):
    scrut: Term
    body: Term
    ty: Optional[Ty] = None
    split: Optional[Two] = field(default=None, compare=False)
    name: str = field(default="x", compare=False)
    _kids: ClassVar = ("scrut", "body")
    _binds: ClassVar = (0, 1)


TWO_SPLIT = (App, UnitE, Pair, PairE, ExF, Case, BangE)
ELIMINATORS = (UnitE, PairE, ExF, Case, BangE)


def has_split_slot(t: Term) -> bool:
    return isinstance(t, TWO_SPLIT + (BangI,))


# Structural helpers

def erase(t: Term) -> Term:
    """Drop every split annotation, keeping binder types and motives."""
    kids = [erase(k) for k in t.subterms()]
    if has_split_slot(t) or isinstance(t, UnitI):
        return t.rebuild(kids, split=None)
    return t.rebuild(kids)


def _annotated_key(t: Term):
    parts = [type(t).__name__]
    for f in fields(t):
        v = getattr(t, f.name)
        if f.name in ("name", "names"):
            continue
        parts.append(_annotated_key(v) if isinstance(v, Term) else v)
    return tuple(parts)


def annotated_equal(a: Term, b: Term) -> bool:
    """Structural equality that also compares split annotations."""
    return _annotated_key(a) == _annotated_key(b)


def map_vars(t: Term, fn: Callable[[int, int], Term], depth: int = 0) -> Term:
    """Rebuild t, replacing each Var(k) by fn(k, number of enclosing binders)."""
    if isinstance(t, Var):
        return fn(t.index, depth)
    kids = [map_vars(k, fn, depth + b) for k, b in zip(t.subterms(), t._binds)]
    return t.rebuild(kids)


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    return map_vars(t, lambda k, depth: Var(k + d) if k >= cutoff + depth else Var(k))


def substitute_top(body: Term, arg: Term) -> Term:
    """body[0 := arg], with the remaining free indices moved down by one."""
    def visit(k: int, depth: int) -> Term:
        if k < depth:
            return Var(k)
        if k == depth:
            return shift(arg, depth)
        return Var(k - 1)
    return map_vars(body, visit)


def free_var_demanded(t: Term, n: Optional[int] = None) -> Set[int]:
    """De Bruijn indices occurring free in t (checked against n when given)."""
    found: Set[int] = set()

    def visit(k: int, depth: int) -> Term:
        if k >= depth:
            found.add(k - depth)
        return Var(k)

    map_vars(t, visit)
    if n is not None:
        dangling = [k for k in found if k >= n]
        if dangling:
            raise ScopeError(f"index {max(dangling)} escapes a context of length {n}")
    return found


# Usage-checked variables

@dataclass(frozen=True)
class UVar:
    """A variable position with evidence that usage ⊴ basis(len, pos)."""

    usage: UsageCtx
    pos: int
    ctx: Optional[TyCtx] = None

    @property
    def ty(self) -> Ty:
        if self.ctx is None:
            raise ScopeError(f"usage-checked variable {self.pos} carries no typing context")
        return self.ctx.ty_at(self.pos)

    def recheck(self, sr: SkewSemiring) -> None:
        uvar_check(sr, self.usage, self.pos, self.ctx)


def uvar_check(sr: SkewSemiring, usage: UsageCtx, pos: int, ctx: Optional[TyCtx] = None) -> UVar:
    la = UsageAlgebra(sr)
    if not 0 <= pos < len(usage):
        raise ScopeError(f"variable position {pos} out of range for a context of length {len(usage)}")
    target = la.basis(len(usage), pos)
    bad = la.first_failure(usage, target)
    if bad is not None:
        raise UsageMismatch(
            f"usage {la.show(usage)} is not below {la.show(target)}: "
            f"{sr.show(usage[bad])} is not <= {sr.show(target[bad])} at coordinate {bad}",
            lhs=la.show(usage), rhs=la.show(target), coordinate=bad, rule="var",
        )
    return UVar(tuple(usage), pos, ctx)


# Printing

_T_TERM, _T_APP, _T_HEAD, _T_ATOM = range(4)


def fresh_name(base: str, taken: Sequence[str]) -> str:
    candidate, k = base or "x", 1
    while candidate in taken:
        candidate = f"{base or 'x'}{k}"
        k += 1
    return candidate


def show_split(split, sr_show: Callable[[Usage], str] = str) -> str:
    if isinstance(split, Two):
        left = " ".join(sr_show(u) for u in split.left)
        right = " ".join(sr_show(u) for u in split.right)
        return f" @{{{left}; {right}}}"
    if isinstance(split, Scale):
        return " @{" + " ".join(sr_show(u) for u in split.vec) + "}"
    if isinstance(split, ZeroSplit):
        return " @{}"
    return ""


def show_term(t: Term, names: Sequence[str] = (), annotations: bool = True) -> str:
    """Print t in the surface grammar; `names` are the context names, oldest first."""
    return _Printer(annotations).show(t, list(display_names(names)), _T_TERM)


class _Printer:
    def __init__(self, annotations: bool):
        self.annotations = annotations

    def split(self, t: Term) -> str:
        if not self.annotations:
            return ""
        return show_split(getattr(t, "split", None))

    def show(self, t: Term, names: List[str], level: int) -> str:
        s, own = self._show(t, names)
        return f"({s})" if level > own else s

    def _binder(self, base: str, names: List[str]) -> str:
        return fresh_name(base, names)

    def _eliminator(self, t: Term, core: str) -> Tuple[str, int]:
        ty = getattr(t, "ty", None)
        sp = self.split(t)
        if ty is not None:
            core = f"({core} : {show_ty(ty)})"
            return (core + sp, _T_HEAD) if sp else (core, _T_ATOM)
        if sp:
            return f"({core}){sp}", _T_HEAD
        return core, _T_TERM

    def _show(self, t: Term, names: List[str]) -> Tuple[str, int]:
        if isinstance(t, Var):
            if not 0 <= t.index < len(names):
                raise ScopeError(f"cannot print index {t.index} in a context of length {len(names)}")
            return names[len(names) - 1 - t.index], _T_ATOM
        if isinstance(t, UnitI):
            sp = self.split(t)
            return ("()" + sp, _T_HEAD) if sp else ("()", _T_ATOM)
        if isinstance(t, Eat):
            return "<>", _T_ATOM
        if isinstance(t, Lam):
            x = self._binder(t.name, names)
            return f"\\{x}:{show_ty(t.ty)}. {self.show(t.body, names + [x], _T_TERM)}", _T_TERM
        if isinstance(t, App):
            s = f"{self.show(t.fn, names, _T_APP)} {self.show(t.arg, names, _T_ATOM)}{self.split(t)}"
            return s, _T_APP
        if isinstance(t, Pair):
            s = f"({self.show(t.left, names, _T_TERM)}, {self.show(t.right, names, _T_TERM)})"
            sp = self.split(t)
            return (s + sp, _T_HEAD) if sp else (s, _T_ATOM)
        if isinstance(t, WithI):
            return f"<{self.show(t.left, names, _T_TERM)}, {self.show(t.right, names, _T_TERM)}>", _T_ATOM
        if isinstance(t, (ProjL, ProjR)):
            suffix = ".1" if isinstance(t, ProjL) else ".2"
            return f"{self.show(t.body, names, _T_HEAD)} {suffix}", _T_HEAD
        if isinstance(t, (InjL, InjR)):
            kw = "inl" if isinstance(t, InjL) else "inr"
            return f"{kw} {self.show(t.body, names, _T_ATOM)}", _T_HEAD
        if isinstance(t, BangI):
            return f"! {t.usage} {self.show(t.body, names, _T_ATOM)}{self.split(t)}", _T_HEAD
        if isinstance(t, ExF):
            core = f"absurd {self.show(t.scrut, names, _T_ATOM)}"
            if t.ty is not None:
                core = f"({core} : {show_ty(t.ty)})"
            return core + self.split(t), _T_HEAD
        if isinstance(t, UnitE):
            core = f"let () = {self.show(t.scrut, names, _T_TERM)} in {self.show(t.body, names, _T_TERM)}"
            return self._eliminator(t, core)
        if isinstance(t, PairE):
            x = self._binder(t.names[0], names)
            y = self._binder(t.names[1], names + [x])
            core = (f"let ({x}, {y}) = {self.show(t.scrut, names, _T_TERM)} in "
                    f"{self.show(t.body, names + [x, y], _T_TERM)}")
            return self._eliminator(t, core)
        if isinstance(t, BangE):
            x = self._binder(t.name, names)
            core = (f"let !{x} = {self.show(t.scrut, names, _T_TERM)} in "
                    f"{self.show(t.body, names + [x], _T_TERM)}")
            return self._eliminator(t, core)
        if isinstance(t, Case):
            x = self._binder(t.names[0], names)
            y = self._binder(t.names[1], names)
            core = (f"case {self.show(t.scrut, names, _T_TERM)} of "
                    f"{{inl {x} -> {self.show(t.left, names + [x], _T_TERM)} | "
                    f"inr {y} -> {self.show(t.right, names + [y], _T_TERM)}}}")
            return self._eliminator(t, core)
        raise TypeError(f"not a term: {t!r}")
