"""
Judgmental modal logic of necessity, checked from proof scripts,
and its translations to and from the calculus over mod01box.

Sequents read `G |v D |- A true`: G holds valid assumptions (usage #),
D true ones (usage 1). Both premises of a rule share G and D.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple, Union

from checker.checker import Checker, check, to_bottom_up, var_derivation
from checker.derivation import Derivation, RuleTag
from lang.errors import ForbiddenBang, HypothesisFailed, PdRuleError
from lang.parser import TypeGrammar
from lang.syntax import (
    App, Bang, BangE, BangI, Base, Case, ELIMINATORS, Eat, ExF, Fun, InjL, InjR, Lam, One, Pair,
    PairE, ProjL, ProjR, Scale, Sum, Tensor, Top, Two, Ty, TyCtx, UnitI, Var, With, WithI, Zero,
    fresh_name,
)
from logics.bridge import all_types, check_partition, place, root_names, seq_ctx, seq_usage, zones
from logics.scripts import (
    Step, ZonedDerivation, ZonedLogic, ZonedSequent, parse_script, parse_zoned_sequent, show_script,
)
from traversal.traverse import cut1, single_subst, subuse, weaken
from usage_ops.linalg import UsageAlgebra
from usage_ops.semiring import MOD01BOX, SkewSemiring

logger = logging.getLogger(__name__)

BOX = "#"


# Types

class PdTy:
    def __str__(self) -> str:
        return show_pd_ty(self)


@dataclass(frozen=True)
class PBase(PdTy):
    name: str


@dataclass(frozen=True)
class PTop(PdTy):
    pass


@dataclass(frozen=True)
class PBot(PdTy):
    pass


@dataclass(frozen=True)
class PImp(PdTy):
    dom: PdTy
    cod: PdTy


@dataclass(frozen=True)
class POr(PdTy):
    left: PdTy
    right: PdTy


@dataclass(frozen=True)
class PAnd(PdTy):
    left: PdTy
    right: PdTy


@dataclass(frozen=True)
class PBox(PdTy):
    body: PdTy


_BINARY = ((PImp, "=>", True), (POr, "\\/", False), (PAnd, "/\\", False))


def show_pd_ty(t: PdTy, level: int = 0) -> str:
    if isinstance(t, PBase):
        return t.name
    if isinstance(t, PTop):
        return "Top"
    if isinstance(t, PBot):
        return "Bot"
    if isinstance(t, PBox):
        s, own = "[]" + show_pd_ty(t.body, len(_BINARY)), len(_BINARY)
    else:
        own = next(i for i, (cls, _, _) in enumerate(_BINARY) if isinstance(t, cls))
        _, op, right = _BINARY[own]
        a, b = (t.dom, t.cod) if isinstance(t, PImp) else (t.left, t.right)
        s = f"{show_pd_ty(a, own + 1 if right else own)} {op} {show_pd_ty(b, own if right else own + 1)}"
    return f"({s})" if level > own else s


class PdTypes(TypeGrammar):
    binary = tuple((op, cls, right) for cls, op, right in _BINARY)

    def prefix(self, p):
        if p.accept("[]"):
            return PBox(p.prefix_type(self))
        return None

    def atom(self, p):
        if p.accept("("):
            t = p.type(self)
            p.expect(")")
            return t
        tok = p.next()
        if tok.text == "Top":
            return PTop()
        if tok.text == "Bot":
            return PBot()
        if tok.kind == "ident" and tok.text != "true":
            return PBase(p.base_name(tok))
        raise p.error(tok, "a PD type")


PD_TYPES = PdTypes()


def embed_ty_pd(t: PdTy) -> Ty:
    if isinstance(t, PBase):
        return Base(t.name)
    if isinstance(t, PTop):
        return One()
    if isinstance(t, PBot):
        return Zero()
    if isinstance(t, PBox):
        return Bang(BOX, embed_ty_pd(t.body))
    if isinstance(t, PImp):
        return Fun(embed_ty_pd(t.dom), embed_ty_pd(t.cod))
    pairs = {PAnd: With, POr: Sum}
    return pairs[type(t)](embed_ty_pd(t.left), embed_ty_pd(t.right))


def pd_ty_of(t: Ty) -> PdTy:
    """Inverse of embed_ty_pd on its image; tensors must have been eliminated first."""
    if isinstance(t, Base):
        return PBase(t.name)
    if isinstance(t, One):
        return PTop()
    if isinstance(t, Zero):
        return PBot()
    if isinstance(t, Bang):
        if t.usage != BOX:
            raise ForbiddenBang(f"![{t.usage}] has no PD counterpart; only ![{BOX}] does")
        return PBox(pd_ty_of(t.body))
    if isinstance(t, Fun):
        return PImp(pd_ty_of(t.dom), pd_ty_of(t.cod))
    if isinstance(t, (Tensor, Top)):
        raise ForbiddenBang(f"{t} must be rewritten away before reading a PD derivation")
    pairs = {With: PAnd, Sum: POr}
    return pairs[type(t)](pd_ty_of(t.left), pd_ty_of(t.right))


def untensor_ty(t: Ty) -> Ty:
    """A * B to A & B and Top to I, everywhere."""
    if isinstance(t, Tensor):
        return With(untensor_ty(t.left), untensor_ty(t.right))
    if isinstance(t, Top):
        return One()
    if isinstance(t, Bang):
        return Bang(t.usage, untensor_ty(t.body))
    if isinstance(t, Fun):
        return Fun(untensor_ty(t.dom), untensor_ty(t.cod))
    if isinstance(t, (Sum, With)):
        return type(t)(untensor_ty(t.left), untensor_ty(t.right))
    return t


# Sequents and scripts

def parse_pd_sequent(text: str, bases: Optional[Set[str]] = None) -> ZonedSequent:
    return parse_zoned_sequent(text, PD_TYPES, "|v", suffix=("true",), bases=bases)


def _zone_text(zone) -> str:
    return ", ".join(f"{x}:{show_pd_ty(a)}" for x, a in zone)


def show_pd_sequent(seq: ZonedSequent) -> str:
    outer, inner = _zone_text(seq.outer), _zone_text(seq.inner)
    return f"{outer + ' ' if outer else ''}|v {inner + ' ' if inner else ''}|- {show_pd_ty(seq.goal)} true"


def show_pd_script(d: Union[ZonedDerivation, Step]) -> str:
    step = d.to_step() if isinstance(d, ZonedDerivation) else d
    return show_script(step, show_pd_ty)


class Pd(ZonedLogic):
    name = "PD"
    error = PdRuleError
    rules = {
        "hyp": "hyp", "hyp*": "hyp_valid", "imp-I": "imp_i", "imp-E": "imp_e", "box-I": "box_i",
        "box-E": "box_e", "top-I": "top_i", "and-I": "and_i", "and-E1": "and_e", "and-E2": "and_e",
        "bot-E": "bot_e", "or-I1": "or_i", "or-I2": "or_i", "or-E": "or_e",
    }

    def show_ty(self, ty) -> str:
        return show_pd_ty(ty)

    def _seq(self, outer, inner, goal) -> ZonedSequent:
        return ZonedSequent(tuple(outer), tuple(inner), goal)

    def hyp(self, s, step):
        return [], (self._lookup(s.inner, step, s.goal, "true"),)

    def hyp_valid(self, s, step):
        return [], (self._lookup(s.outer, step, s.goal, "valid"),)

    def imp_i(self, s, step):
        goal = self._shape(s.goal, PImp, "an implication")
        (x,) = self._fresh(s, step, 1, ("x",))
        return [self._seq(s.outer, s.inner + ((x, goal.dom),), goal.cod)], (x,)

    def imp_e(self, s, step):
        arg = self._annot(step, PdTy, "the argument type")
        return [self._seq(s.outer, s.inner, PImp(arg, s.goal)), self._seq(s.outer, s.inner, arg)], ()

    def box_i(self, s, step):
        goal = self._shape(s.goal, PBox, "a box")
        return [self._seq(s.outer, (), goal.body)], ()

    def box_e(self, s, step):
        scrut = self._annot(step, PBox, "a box")
        (x,) = self._fresh(s, step, 1, ("x",))
        return [self._seq(s.outer, s.inner, scrut),
                self._seq(s.outer + ((x, scrut.body),), s.inner, s.goal)], (x,)

    def top_i(self, s, step):
        self._shape(s.goal, PTop, "Top")
        return [], ()

    def and_i(self, s, step):
        goal = self._shape(s.goal, PAnd, "a conjunction")
        return [self._seq(s.outer, s.inner, goal.left), self._seq(s.outer, s.inner, goal.right)], ()

    def and_e(self, s, step):
        pair = self._annot(step, PAnd, "a conjunction")
        picked = pair.left if step.rule == "and-E1" else pair.right
        self._need(picked == s.goal, f"{step.rule} projects {show_pd_ty(picked)}, not {show_pd_ty(s.goal)}")
        return [self._seq(s.outer, s.inner, pair)], ()

    def bot_e(self, s, step):
        return [self._seq(s.outer, s.inner, PBot())], ()

    def or_i(self, s, step):
        goal = self._shape(s.goal, POr, "a disjunction")
        return [self._seq(s.outer, s.inner, goal.left if step.rule == "or-I1" else goal.right)], ()

    def or_e(self, s, step):
        scrut = self._annot(step, POr, "a disjunction")
        x, y = self._fresh(s, step, 2, ("x", "y"))
        return [self._seq(s.outer, s.inner, scrut),
                self._seq(s.outer, s.inner + ((x, scrut.left),), s.goal),
                self._seq(s.outer, s.inner + ((y, scrut.right),), s.goal)], (x, y)


PD = Pd()


def pd_check(seq: Union[ZonedSequent, str], script: Union[Step, str],
             bases: Optional[Set[str]] = None) -> ZonedDerivation:
    """Validate a proof script against a PD sequent."""
    if isinstance(seq, str):
        seq = parse_pd_sequent(seq, bases)
    if isinstance(script, str):
        script = parse_script(script, PD_TYPES, bases)
    return PD.check(seq, script)


# Top is a meet

def _top_meet_holds(sr: SkewSemiring) -> Optional[str]:
    els = sr.elements()
    if els is None:
        return f"{sr.name} is infinite; the hypotheses cannot be checked exhaustively"
    for x in els:
        if not sr.leq(x, sr.zero):
            return f"0 is not top in {sr.name}: {sr.show(x)} is not <= 0"
    for x, y in itertools.product(els, repeat=2):
        m = sr.add(x, y)
        if not (sr.leq(m, x) and sr.leq(m, y)):
            return f"{sr.show(x)}+{sr.show(y)} is not a lower bound in {sr.name}"
        for z in els:
            if sr.leq(z, x) and sr.leq(z, y) and not sr.leq(z, m):
                return f"{sr.show(x)}+{sr.show(y)} is not the greatest lower bound in {sr.name}"
    return None


def top_meet_iso(sr: SkewSemiring, a: Ty, b: Ty) -> Tuple[Derivation, Derivation, Derivation, Derivation]:
    """When 0 is top and + is meet: I and Top, A * B and A & B, are interderivable."""
    problem = _top_meet_holds(sr)
    if problem is not None:
        raise HypothesisFailed(problem)
    one = sr.one
    unit_to_top = check(sr, TyCtx.of(("x", One())), (one,), Eat(), Top())
    top_to_unit = check(sr, TyCtx.of(("x", Top())), (one,), UnitI(), One())
    tensor_to_with = check(
        sr, TyCtx.of(("x", Tensor(a, b))), (one,),
        PairE(Var(0), WithI(Var(1), Var(0)), With(a, b), Two((one,), (sr.zero,)), names=("a", "b")),
        With(a, b))
    with_to_tensor = check(
        sr, TyCtx.of(("x", With(a, b))), (one,),
        Pair(ProjL(Var(0)), ProjR(Var(0)), Two((one,), (one,))), Tensor(a, b))
    return unit_to_top, top_to_unit, tensor_to_with, with_to_tensor


# PD to the calculus

def pd_to_lr(d: ZonedDerivation) -> Derivation:
    """Γ ; Δ ⊢ A true becomes Γ^#, Δ^1 ⊢ A over mod01box."""
    return _PdToLr().go(d)


class _PdToLr:
    sr = MOD01BOX

    def __init__(self):
        self.checker = Checker(self.sr)
        self.la = UsageAlgebra(self.sr)

    def go(self, d: ZonedDerivation, path: Tuple[int, ...] = ()) -> Derivation:
        s = d.sequent
        ctx = seq_ctx(s, embed_ty_pd)
        usage = seq_usage(s, BOX, "1")
        ty = embed_ty_pd(s.goal)
        r = d.rule

        if r in ("hyp", "hyp*"):
            return var_derivation(self.sr, ctx, usage, ctx.names.index(d.names[0]))
        if r == "box-I":
            inner = self.go(d.children[0], path + (0,))
            valid = TyCtx(ctx.entries[:len(s.outer)])
            boxed = self.checker.assemble(valid, inner.usage, BangI(BOX, inner.term, Scale(inner.usage)),
                                          ty, [inner], path)
            widened = weaken(self.sr, boxed, TyCtx(ctx.entries[len(s.outer):]))
            return subuse(self.sr, usage, widened)

        binders = {"imp-I": [d.names], "box-E": [(), d.names], "or-E": [(), d.names[:1], d.names[1:]]}
        kids = []
        for i, (child, bound) in enumerate(zip(d.children, binders.get(r, [()] * len(d.children)))):
            lc = self.go(child, path + (i,))
            extra = tuple((x, lc.ctx.ty_at(lc.ctx.names.index(x))) for x in bound)
            kids.append(place(self.sr, lc, ctx.extend(*extra)))
        terms = [k.term for k in kids]
        shared = Two(usage, usage)

        if r == "imp-I":
            term = Lam(ty.dom, terms[0], name=d.names[0])
        elif r == "imp-E":
            term = App(terms[0], terms[1], shared)
        elif r == "box-E":
            term = BangE(terms[0], terms[1], ty, shared, name=d.names[0])
        elif r == "top-I":
            term = UnitI()
        elif r == "and-I":
            term = WithI(terms[0], terms[1])
        elif r in ("and-E1", "and-E2"):
            term = (ProjL if r == "and-E1" else ProjR)(terms[0])
        elif r == "bot-E":
            term = ExF(terms[0], ty, shared)
        elif r in ("or-I1", "or-I2"):
            term = (InjL if r == "or-I1" else InjR)(terms[0])
        elif r == "or-E":
            term = Case(terms[0], terms[1], terms[2], ty, shared, names=tuple(d.names))
        else:
            raise PdRuleError(f"unknown PD rule '{r}'", rule=r, path=path)
        return self.checker.assemble(ctx, usage, term, ty, kids, path)


# Tensor elimination

class _Untensor:
    """Rewrite a mod01box derivation so * becomes & and Top becomes I.

    Every conversion is a cut against one of the `top_meet_iso` derivations;
    the let-pair redex a conversion leaves behind is then contracted by two
    single substitutions.
    """

    sr = MOD01BOX

    def __init__(self):
        self.checker = Checker(self.sr)
        self.la = UsageAlgebra(self.sr)
        self._isos = {}

    def iso(self, a: Ty, b: Ty) -> Tuple[Derivation, Derivation, Derivation, Derivation]:
        if (a, b) not in self._isos:
            self._isos[a, b] = top_meet_iso(self.sr, a, b)
        return self._isos[a, b]

    def ctx(self, ctx: TyCtx) -> TyCtx:
        return TyCtx(tuple((x, untensor_ty(a)) for x, a in ctx.entries))

    def go(self, d: Derivation, path: Tuple[int, ...] = ()) -> Derivation:
        ctx, ty, t, usage = self.ctx(d.ctx), untensor_ty(d.ty), d.term, d.usage
        if d.rule == RuleTag.VAR:
            return var_derivation(self.sr, ctx, usage, ctx.position(t.index))
        if d.rule == RuleTag.TOP_I:
            eat = self.checker.assemble(ctx, usage, Eat(), Top(), (), path)
            _, top_to_unit, _, _ = self.iso(One(), One())
            return cut1(self.sr, top_to_unit, eat)
        kids = [self.go(c, path + (i,)) for i, c in enumerate(d.children)]

        if d.rule == RuleTag.TENSOR_I:
            left, right = kids
            pair = self.checker.assemble(ctx, usage, Pair(left.term, right.term, t.split),
                                         Tensor(left.ty, right.ty), kids, path)
            _, _, tensor_to_with, _ = self.iso(left.ty, right.ty)
            redex = cut1(self.sr, tensor_to_with, pair)
            return self._contract(redex.children[0], redex.children[1], redex.usage)
        if d.rule == RuleTag.UNIT_E:
            return subuse(self.sr, usage, kids[1])
        if d.rule == RuleTag.TENSOR_E:
            scrut, body = kids
            _, _, _, with_to_tensor = self.iso(scrut.ty.left, scrut.ty.right)
            return self._contract(cut1(self.sr, with_to_tensor, scrut), body, usage)

        changes = {}
        if isinstance(t, ELIMINATORS):
            changes["ty"] = ty
        if isinstance(t, Lam):
            changes["ty"] = untensor_ty(t.ty)
        term = t.rebuild([k.term for k in kids], **changes)
        return self.checker.assemble(ctx, usage, term, ty, kids, path)

    def _contract(self, pair: Derivation, body: Derivation, usage) -> Derivation:
        """let (x, y) = (l, r) in n, at usage, becomes n[l/x, r/y]."""
        if pair.rule != RuleTag.TENSOR_I:
            raise PdRuleError(f"expected a pair to contract, got {pair.rule.value}")
        left, right = pair.children
        k = len(pair.ctx)
        q, rx, ry = tuple(body.usage[:k]), body.usage[k], body.usage[k + 1]
        lifted = weaken(self.sr, right, TyCtx.of(body.ctx.entries[k]))
        inner = single_subst(self.sr, lifted, body, self.la.add(self.la.scale(ry, right.usage), q) + (rx,))
        return single_subst(self.sr, left, inner, usage)


def eliminate_tensors(d: Derivation) -> Derivation:
    """The same judgment with * read as & and Top as I; Pair becomes a with-pair, let-pairs become projections."""
    return _Untensor().go(d)


# The calculus to PD

def lr_to_pd(d: Derivation, partition: Optional[Sequence[str]] = None) -> ZonedDerivation:
    """Read a PD derivation off a mod01box derivation whose bangs are all ![#]."""
    for ty in all_types(d):
        for u in _bang_usages(ty):
            if u != BOX:
                raise ForbiddenBang(f"![{u}] has no PD counterpart; only ![{BOX}] does")
    check_partition(MOD01BOX, d, partition, ("0", "1", BOX))
    flat = eliminate_tensors(d)
    bu = to_bottom_up(MOD01BOX, flat)
    names = root_names(bu)
    seq = zones(names, bu, pd_ty_of, BOX, "1")
    step = _LrToPd().step(bu, names)
    logger.debug("lr_to_pd: %s", show_pd_sequent(seq))
    return PD.check(seq, step)


def _bang_usages(t: Ty) -> List[str]:
    if isinstance(t, Bang):
        return [t.usage] + _bang_usages(t.body)
    if isinstance(t, Fun):
        return _bang_usages(t.dom) + _bang_usages(t.cod)
    if isinstance(t, (Tensor, Sum, With)):
        return _bang_usages(t.left) + _bang_usages(t.right)
    return []


class _LrToPd:
    def step(self, d: Derivation, names: List[str]) -> Step:
        t = d.term
        r = d.rule

        def kid(i: int, bound: Sequence[str] = ()) -> Step:
            return self.step(d.children[i], names + list(bound))

        def fresh(*bases: str) -> List[str]:
            out: List[str] = []
            for b in bases:
                out.append(fresh_name(b, names + out))
            return out

        if r == RuleTag.VAR:
            pos = len(names) - 1 - t.index
            return Step("hyp*" if d.usage[pos] == BOX else "hyp", names=(names[pos],))
        if r == RuleTag.UNIT_I:
            return Step("top-I")
        if r == RuleTag.LAM:
            (x,) = fresh(t.name)
            return Step("imp-I", names=(x,), children=(kid(0, [x]),))
        if r == RuleTag.APP:
            return Step("imp-E", annot=pd_ty_of(d.children[1].ty), children=(kid(0), kid(1)))
        if r == RuleTag.BANG_I:
            return Step("box-I", children=(kid(0),))
        if r == RuleTag.BANG_E:
            (x,) = fresh(t.name)
            return Step("box-E", annot=pd_ty_of(d.children[0].ty), names=(x,), children=(kid(0), kid(1, [x])))
        if r == RuleTag.WITH_I:
            return Step("and-I", children=(kid(0), kid(1)))
        if r in (RuleTag.WITH_EL, RuleTag.WITH_ER):
            return Step("and-E1" if r == RuleTag.WITH_EL else "and-E2",
                        annot=pd_ty_of(d.children[0].ty), children=(kid(0),))
        if r == RuleTag.ZERO_E:
            return Step("bot-E", children=(kid(0),))
        if r in (RuleTag.SUM_IL, RuleTag.SUM_IR):
            return Step("or-I1" if r == RuleTag.SUM_IL else "or-I2", children=(kid(0),))
        if r == RuleTag.SUM_E:
            x, y = fresh(*t.names)
            return Step("or-E", annot=pd_ty_of(d.children[0].ty), names=(x, y),
                        children=(kid(0), kid(1, [x]), kid(2, [y])))
        raise PdRuleError(f"no PD rule for {r.value}; eliminate tensors first")
