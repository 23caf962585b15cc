"""
Dual Intuitionistic Linear Logic, checked from proof scripts, and its
translations to and from the calculus over lin01w.

Sequents read `G | D |- A`: G is the intuitionistic zone, D the linear one.
In the calculus, G sits at usage w and D at usage 1.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple, Union

from checker.checker import Checker, to_bottom_up, var_derivation
from checker.derivation import Derivation, RuleTag
from lang.errors import DillRuleError, NonDillType
from lang.parser import TypeGrammar
from lang.syntax import (
    App, Bang, BangE, BangI, Base, Case, Eat, ExF, Fun, InjL, InjR, Lam, One, Pair, PairE, ProjL,
    ProjR, Scale, Sum, Tensor, Top, Two, Ty, UnitE, UnitI, With, WithI, Zero, fresh_name,
)
from logics.bridge import all_types, check_partition, place, root_names, seq_ctx, seq_usage, split_names, zones
from logics.scripts import (
    Step, ZonedDerivation, ZonedLogic, ZonedSequent, parse_script, parse_zoned_sequent, show_script,
)
from usage_ops.semiring import LIN01W

logger = logging.getLogger(__name__)

OMEGA = "w"


# Types

class DillTy:
    def __str__(self) -> str:
        return show_dill_ty(self)


@dataclass(frozen=True)
class DBase(DillTy):
    name: str


@dataclass(frozen=True)
class DOne(DillTy):
    pass


@dataclass(frozen=True)
class DTensor(DillTy):
    left: DillTy
    right: DillTy


@dataclass(frozen=True)
class DLolli(DillTy):
    dom: DillTy
    cod: DillTy


@dataclass(frozen=True)
class DBang(DillTy):
    body: DillTy


@dataclass(frozen=True)
class DZero(DillTy):
    pass


@dataclass(frozen=True)
class DPlus(DillTy):
    left: DillTy
    right: DillTy


@dataclass(frozen=True)
class DTop(DillTy):
    pass


@dataclass(frozen=True)
class DWith(DillTy):
    left: DillTy
    right: DillTy


_BINARY = ((DLolli, "-o", True), (DPlus, "+", False), (DWith, "&", False), (DTensor, "*", False))


def show_dill_ty(t: DillTy, level: int = 0) -> str:
    if isinstance(t, DBase):
        return t.name
    if isinstance(t, DOne):
        return "I"
    if isinstance(t, DZero):
        return "0"
    if isinstance(t, DTop):
        return "Top"
    if isinstance(t, DBang):
        s, own = "!" + show_dill_ty(t.body, len(_BINARY)), len(_BINARY)
    else:
        own = next(i for i, (cls, _, _) in enumerate(_BINARY) if isinstance(t, cls))
        _, op, right = _BINARY[own]
        a, b = (t.dom, t.cod) if isinstance(t, DLolli) else (t.left, t.right)
        s = f"{show_dill_ty(a, own + 1 if right else own)} {op} {show_dill_ty(b, own if right else own + 1)}"
    return f"({s})" if level > own else s


class DillTypes(TypeGrammar):
    binary = tuple((op, cls, right) for cls, op, right in _BINARY)

    def prefix(self, p):
        if p.accept("!"):
            return DBang(p.prefix_type(self))
        return None

    def atom(self, p):
        if p.accept("("):
            t = p.type(self)
            p.expect(")")
            return t
        tok = p.next()
        if tok.text == "I":
            return DOne()
        if tok.text == "Top":
            return DTop()
        if tok.text == "0":
            return DZero()
        if tok.kind == "ident":
            return DBase(p.base_name(tok))
        raise p.error(tok, "a DILL type")


DILL_TYPES = DillTypes()


def embed_ty_dill(t: DillTy) -> Ty:
    if isinstance(t, DBase):
        return Base(t.name)
    if isinstance(t, DOne):
        return One()
    if isinstance(t, DZero):
        return Zero()
    if isinstance(t, DTop):
        return Top()
    if isinstance(t, DBang):
        return Bang(OMEGA, embed_ty_dill(t.body))
    if isinstance(t, DLolli):
        return Fun(embed_ty_dill(t.dom), embed_ty_dill(t.cod))
    pairs = {DTensor: Tensor, DPlus: Sum, DWith: With}
    return pairs[type(t)](embed_ty_dill(t.left), embed_ty_dill(t.right))


def dill_ty_of(t: Ty) -> DillTy:
    """Inverse of embed_ty_dill on its image."""
    if isinstance(t, Base):
        return DBase(t.name)
    if isinstance(t, One):
        return DOne()
    if isinstance(t, Zero):
        return DZero()
    if isinstance(t, Top):
        return DTop()
    if isinstance(t, Bang):
        if t.usage != OMEGA:
            raise NonDillType(f"![{t.usage}] has no DILL counterpart; only ![{OMEGA}] does")
        return DBang(dill_ty_of(t.body))
    if isinstance(t, Fun):
        return DLolli(dill_ty_of(t.dom), dill_ty_of(t.cod))
    pairs = {Tensor: DTensor, Sum: DPlus, With: DWith}
    return pairs[type(t)](dill_ty_of(t.left), dill_ty_of(t.right))


# Sequents and scripts

def parse_dill_sequent(text: str, bases: Optional[Set[str]] = None) -> ZonedSequent:
    return parse_zoned_sequent(text, DILL_TYPES, "|", bases=bases)


def _zone_text(zone) -> str:
    return ", ".join(f"{x}:{show_dill_ty(a)}" for x, a in zone)


def show_dill_sequent(seq: ZonedSequent) -> str:
    outer, inner = _zone_text(seq.outer), _zone_text(seq.inner)
    return f"{outer + ' ' if outer else ''}| {inner + ' ' if inner else ''}|- {show_dill_ty(seq.goal)}"


def show_dill_script(d: Union[ZonedDerivation, Step]) -> str:
    step = d.to_step() if isinstance(d, ZonedDerivation) else d
    return show_script(step, show_dill_ty)


class Dill(ZonedLogic):
    name = "DILL"
    error = DillRuleError
    rules = {
        "int-ax": "int_ax", "lin-ax": "lin_ax", "I-I": "one_i", "I-E": "one_e",
        "tensor-I": "tensor_i", "tensor-E": "tensor_e", "lolli-I": "lolli_i", "lolli-E": "lolli_e",
        "bang-I": "bang_i", "bang-E": "bang_e", "top-I": "top_i", "with-I": "with_i",
        "with-E1": "with_e", "with-E2": "with_e", "zero-E": "zero_e",
        "plus-I1": "plus_i", "plus-I2": "plus_i", "plus-E": "plus_e",
    }

    def show_ty(self, ty) -> str:
        return show_dill_ty(ty)

    def _seq(self, outer, inner, goal) -> ZonedSequent:
        return ZonedSequent(tuple(outer), tuple(inner), goal)

    def int_ax(self, s, step):
        self._need(not s.inner, "int-ax needs an empty linear zone")
        return [], (self._lookup(s.outer, step, s.goal, "intuitionistic"),)

    def lin_ax(self, s, step):
        self._need(len(s.inner) == 1, "lin-ax needs exactly one linear variable")
        return [], (self._lookup(s.inner, step, s.goal, "linear"),)

    def one_i(self, s, step):
        self._shape(s.goal, DOne, "I")
        self._need(not s.inner, "I-I needs an empty linear zone")
        return [], ()

    def one_e(self, s, step):
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, DOne()), self._seq(s.outer, right, s.goal)], ()

    def tensor_i(self, s, step):
        goal = self._shape(s.goal, DTensor, "a tensor")
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, goal.left), self._seq(s.outer, right, goal.right)], ()

    def tensor_e(self, s, step):
        scrut = self._annot(step, DTensor, "a tensor")
        x, y = self._fresh(s, step, 2, ("x", "y"))
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, scrut),
                self._seq(s.outer, right + ((x, scrut.left), (y, scrut.right)), s.goal)], (x, y)

    def lolli_i(self, s, step):
        goal = self._shape(s.goal, DLolli, "a linear function")
        (x,) = self._fresh(s, step, 1, ("x",))
        return [self._seq(s.outer, s.inner + ((x, goal.dom),), goal.cod)], (x,)

    def lolli_e(self, s, step):
        arg = self._annot(step, DillTy, "the argument type")
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, DLolli(arg, s.goal)), self._seq(s.outer, right, arg)], ()

    def bang_i(self, s, step):
        goal = self._shape(s.goal, DBang, "a !-type")
        self._need(not s.inner, "bang-I needs an empty linear zone")
        return [self._seq(s.outer, (), goal.body)], ()

    def bang_e(self, s, step):
        scrut = self._annot(step, DBang, "a !-type")
        (x,) = self._fresh(s, step, 1, ("x",))
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, scrut),
                self._seq(s.outer + ((x, scrut.body),), right, s.goal)], (x,)

    def top_i(self, s, step):
        self._shape(s.goal, DTop, "Top")
        return [], ()

    def with_i(self, s, step):
        goal = self._shape(s.goal, DWith, "a with")
        return [self._seq(s.outer, s.inner, goal.left), self._seq(s.outer, s.inner, goal.right)], ()

    def with_e(self, s, step):
        pair = self._annot(step, DWith, "a with")
        picked = pair.left if step.rule == "with-E1" else pair.right
        self._need(picked == s.goal, f"{step.rule} projects {show_dill_ty(picked)}, not {show_dill_ty(s.goal)}")
        return [self._seq(s.outer, s.inner, pair)], ()

    def zero_e(self, s, step):
        left, _ = self._split(s, step)
        return [self._seq(s.outer, left, DZero())], ()

    def plus_i(self, s, step):
        goal = self._shape(s.goal, DPlus, "a sum")
        return [self._seq(s.outer, s.inner, goal.left if step.rule == "plus-I1" else goal.right)], ()

    def plus_e(self, s, step):
        scrut = self._annot(step, DPlus, "a sum")
        x, y = self._fresh(s, step, 2, ("x", "y"))
        left, right = self._split(s, step)
        return [self._seq(s.outer, left, scrut),
                self._seq(s.outer, right + ((x, scrut.left),), s.goal),
                self._seq(s.outer, right + ((y, scrut.right),), s.goal)], (x, y)


DILL = Dill()


def dill_check(seq: Union[ZonedSequent, str], script: Union[Step, str],
               bases: Optional[Set[str]] = None) -> ZonedDerivation:
    """Validate a proof script against a DILL sequent."""
    if isinstance(seq, str):
        seq = parse_dill_sequent(seq, bases)
    if isinstance(script, str):
        script = parse_script(script, DILL_TYPES, bases)
    return DILL.check(seq, script)


# DILL to the calculus

def dill_to_lr(d: ZonedDerivation) -> Derivation:
    """Γ ; Δ ⊢ A becomes Γ^w, Δ^1 ⊢ A over lin01w."""
    return _DillToLr().go(d)


class _DillToLr:
    sr = LIN01W

    def __init__(self):
        self.checker = Checker(self.sr)

    def go(self, d: ZonedDerivation, path: Tuple[int, ...] = ()) -> Derivation:
        s = d.sequent
        ctx = seq_ctx(s, embed_ty_dill)
        usage = seq_usage(s, OMEGA, "1")
        n = len(ctx)
        ty = embed_ty_dill(s.goal)

        binders = {"tensor-E": [(), d.names], "lolli-I": [d.names], "bang-E": [(), d.names],
                   "plus-E": [(), d.names[:1], d.names[1:]]}.get(d.rule, [()] * len(d.children))
        kids = []
        for i, (child, bound) in enumerate(zip(d.children, binders)):
            lc = self.go(child, path + (i,))
            extra = tuple((x, lc.ctx.ty_at(lc.ctx.names.index(x))) for x in bound)
            kids.append(place(self.sr, lc, ctx.extend(*extra)))
        base = [tuple(k.usage[:n]) for k in kids]

        def two(right=None) -> Two:
            return Two(base[0], base[1] if right is None else right)

        terms = [k.term for k in kids]
        r = d.rule
        if r in ("int-ax", "lin-ax"):
            return var_derivation(self.sr, ctx, usage, ctx.names.index(d.names[0]))
        if r == "I-I":
            term = UnitI()
        elif r == "top-I":
            term = Eat()
        elif r == "I-E":
            term = UnitE(terms[0], terms[1], ty, two())
        elif r == "tensor-I":
            term = Pair(terms[0], terms[1], two())
        elif r == "tensor-E":
            term = PairE(terms[0], terms[1], ty, two(), names=tuple(d.names))
        elif r == "lolli-I":
            term = Lam(ty.dom, terms[0], name=d.names[0])
        elif r == "lolli-E":
            term = App(terms[0], terms[1], two())
        elif r == "bang-I":
            term = BangI(OMEGA, terms[0], Scale(base[0]))
        elif r == "bang-E":
            term = BangE(terms[0], terms[1], ty, two(), name=d.names[0])
        elif r == "with-I":
            term = WithI(terms[0], terms[1])
        elif r in ("with-E1", "with-E2"):
            term = (ProjL if r == "with-E1" else ProjR)(terms[0])
        elif r == "zero-E":
            right_names = set(d.split[1])
            rest = tuple(OMEGA if i < len(s.outer) else ("1" if x in right_names else "0")
                         for i, x in enumerate(ctx.names))
            term = ExF(terms[0], ty, two(rest))
        elif r in ("plus-I1", "plus-I2"):
            term = (InjL if r == "plus-I1" else InjR)(terms[0])
        elif r == "plus-E":
            term = Case(terms[0], terms[1], terms[2], ty, two(), names=tuple(d.names))
        else:
            raise DillRuleError(f"unknown DILL rule '{r}'", rule=r, path=path)
        return self.checker.assemble(ctx, usage, term, ty, kids, path)


# The calculus to DILL

def lr_to_dill(d: Derivation, partition: Optional[Sequence[str]] = None) -> ZonedDerivation:
    """Read a DILL derivation off a lin01w derivation whose types are all in the DILL image."""
    for ty in all_types(d):
        dill_ty_of(ty)
    check_partition(LIN01W, d, partition, ("0", "1", OMEGA))
    bu = to_bottom_up(LIN01W, d)
    names = root_names(bu)
    seq = zones(names, bu, dill_ty_of, OMEGA, "1")
    step = _LrToDill().step(bu, names)
    logger.debug("lr_to_dill: %s", show_dill_sequent(seq))
    return DILL.check(seq, step)


class _LrToDill:
    def step(self, d: Derivation, names: List[str]) -> Step:
        t = d.term
        r = d.rule
        n = len(names)

        def kid(i: int, bound: Sequence[str] = ()) -> Step:
            return self.step(d.children[i], names + list(bound))

        def split() -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
            return split_names(names, t.split.left, t.split.right, "1")

        def fresh(*bases: str) -> List[str]:
            out: List[str] = []
            for b in bases:
                out.append(fresh_name(b, names + out))
            return out

        if r == RuleTag.VAR:
            pos = n - 1 - t.index
            return Step("int-ax" if d.usage[pos] == OMEGA else "lin-ax", names=(names[pos],))
        if r == RuleTag.UNIT_I:
            return Step("I-I")
        if r == RuleTag.TOP_I:
            return Step("top-I")
        if r == RuleTag.LAM:
            (x,) = fresh(t.name)
            return Step("lolli-I", names=(x,), children=(kid(0, [x]),))
        if r == RuleTag.APP:
            return Step("lolli-E", annot=dill_ty_of(d.children[1].ty), split=split(),
                        children=(kid(0), kid(1)))
        if r == RuleTag.UNIT_E:
            return Step("I-E", split=split(), children=(kid(0), kid(1)))
        if r == RuleTag.TENSOR_I:
            return Step("tensor-I", split=split(), children=(kid(0), kid(1)))
        if r == RuleTag.TENSOR_E:
            xy = fresh(*t.names)
            return Step("tensor-E", annot=dill_ty_of(d.children[0].ty), names=tuple(xy), split=split(),
                        children=(kid(0), kid(1, xy)))
        if r == RuleTag.SUM_E:
            x, y = fresh(*t.names)
            return Step("plus-E", annot=dill_ty_of(d.children[0].ty), names=(x, y), split=split(),
                        children=(kid(0), kid(1, [x]), kid(2, [y])))
        if r == RuleTag.BANG_E:
            (x,) = fresh(t.name)
            return Step("bang-E", annot=dill_ty_of(d.children[0].ty), names=(x,), split=split(),
                        children=(kid(0), kid(1, [x])))
        if r == RuleTag.ZERO_E:
            return Step("zero-E", split=split(), children=(kid(0),))
        if r == RuleTag.BANG_I:
            return Step("bang-I", children=(kid(0),))
        if r == RuleTag.WITH_I:
            return Step("with-I", children=(kid(0), kid(1)))
        if r in (RuleTag.WITH_EL, RuleTag.WITH_ER):
            return Step("with-E1" if r == RuleTag.WITH_EL else "with-E2",
                        annot=dill_ty_of(d.children[0].ty), children=(kid(0),))
        if r in (RuleTag.SUM_IL, RuleTag.SUM_IR):
            return Step("plus-I1" if r == RuleTag.SUM_IL else "plus-I2", children=(kid(0),))
        raise DillRuleError(f"no DILL rule for {r.value}")
