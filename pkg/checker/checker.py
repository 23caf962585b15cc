"""
Deciding Γ R ⊢ M : A.

`check` walks a fully annotated term; `synthesize_demand` computes, for an
unannotated term, the frontier of maximal usage contexts it accepts, each
with a witnessing annotation; `infer_check` combines the two;
`to_bottom_up` re-annotates a derivation so that interior nodes only use
the instance's bottom-up table facts.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Sequence, Tuple

from checker.derivation import Derivation, Fact, RuleTag, rule_for
from lang.errors import (
    BoundUsageError, DimensionMismatch, LrError, MissingAnnotation, NoMeet,
    TypeMismatch, UsageMismatch,
)
from lang.syntax import (
    App, Bang, BangE, BangI, Case, ELIMINATORS, Eat, ExF, Fun, InjL, InjR, Lam, One, Pair, PairE,
    ProjL, ProjR, Scale, Sum, Tensor, Term, Top, Two, Ty, TyCtx, UnitE, UnitI, Var, With, WithI,
    Zero, annotated_equal, erase, has_split_slot, show_ty, uvar_check,
)
from usage_ops.linalg import UsageAlgebra, UsageCtx
from usage_ops.semiring import SkewSemiring

logger = logging.getLogger(__name__)

LEFT, RIGHT, SAME = "left", "right", "same"

Frontier = List[Tuple[UsageCtx, Term]]


@dataclass(frozen=True)
class Premise:
    """What a rule asks of one child: its context, term, type, bound usages, and split side."""

    ctx: TyCtx
    term: Term
    ty: Ty
    bound: UsageCtx
    side: str


@dataclass(frozen=True)
class Demand:
    """Maximal usage contexts a term accepts, each with a canonical annotation."""

    frontier: Tuple[Tuple[UsageCtx, Term], ...]

    @property
    def vectors(self) -> List[UsageCtx]:
        return [v for v, _ in self.frontier]

    @property
    def vector(self) -> UsageCtx:
        """The canonical requirement, when the frontier is a single vector."""
        if len(self.frontier) != 1:
            raise NoMeet(f"no single canonical demand; {len(self.frontier)} incomparable demands")
        return self.frontier[0][0]


def _mismatch(what: str, expected, found) -> TypeMismatch:
    exp = show_ty(expected) if isinstance(expected, Ty) else expected
    fnd = show_ty(found) if isinstance(found, Ty) else found
    return TypeMismatch(f"{what}: expected {exp}, found {fnd}")


class Checker:
    """Typing and usage checking against one semiring instance."""

    def __init__(self, sr: SkewSemiring):
        self.sr = sr
        self.la = UsageAlgebra(sr)
        self._frontiers: Dict[tuple, Frontier] = {}

    # Plain typing (usage ignored)

    def _with_motive(self, t: Term, ty: Ty) -> Term:
        if isinstance(t, ELIMINATORS):
            if t.ty is None:
                return replace(t, ty=ty)
            if t.ty != ty:
                raise _mismatch("eliminator motive", ty, t.ty)
        return t

    def infer_type(self, ctx: TyCtx, t: Term) -> Ty:
        if isinstance(t, Var):
            return ctx.ty_at(ctx.position(t.index))
        if isinstance(t, Lam):
            return Fun(t.ty, self.infer_type(ctx.extend((t.name, t.ty)), t.body))
        if isinstance(t, App):
            fty = self.infer_type(ctx, t.fn)
            if not isinstance(fty, Fun):
                raise _mismatch("function position", "a -o type", fty)
            self.check_type(ctx, t.arg, fty.dom)
            return fty.cod
        if isinstance(t, UnitI):
            return One()
        if isinstance(t, Eat):
            return Top()
        if isinstance(t, Pair):
            return Tensor(self.infer_type(ctx, t.left), self.infer_type(ctx, t.right))
        if isinstance(t, WithI):
            return With(self.infer_type(ctx, t.left), self.infer_type(ctx, t.right))
        if isinstance(t, BangI):
            return Bang(t.usage, self.infer_type(ctx, t.body))
        if isinstance(t, (ProjL, ProjR)):
            wty = self.infer_type(ctx, t.body)
            if not isinstance(wty, With):
                raise _mismatch("projection", "a & type", wty)
            return wty.left if isinstance(t, ProjL) else wty.right
        if isinstance(t, (InjL, InjR)):
            raise MissingAnnotation("cannot infer the type of an injection here; ascribe the enclosing eliminator")
        if isinstance(t, ELIMINATORS):
            ty = t.ty if t.ty is not None else self._infer_motive(ctx, t)
            self.check_type(ctx, t, ty)
            return ty
        raise TypeError(f"not a term: {t!r}")

    def _infer_motive(self, ctx: TyCtx, t: Term) -> Ty:
        if isinstance(t, UnitE):
            return self.infer_type(ctx, t.body)
        if isinstance(t, PairE):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Tensor):
                raise _mismatch("pair elimination", "a * type", sty)
            return self.infer_type(ctx.extend((t.names[0], sty.left), (t.names[1], sty.right)), t.body)
        if isinstance(t, BangE):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Bang):
                raise _mismatch("bang elimination", "a ! type", sty)
            return self.infer_type(ctx.extend((t.name, sty.body)), t.body)
        if isinstance(t, Case):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Sum):
                raise _mismatch("case", "a + type", sty)
            try:
                return self.infer_type(ctx.extend((t.names[0], sty.left)), t.left)
            except MissingAnnotation:
                return self.infer_type(ctx.extend((t.names[1], sty.right)), t.right)
        raise MissingAnnotation(f"{rule_for(t).value} needs a result type; write (... : C)")

    def check_type(self, ctx: TyCtx, t: Term, ty: Ty) -> None:
        t = self._with_motive(t, ty)
        if isinstance(t, Var):
            found = ctx.ty_at(ctx.position(t.index))
            if found != ty:
                raise _mismatch("variable", ty, found)
            return
        for p in self.premises(ctx, t, ty):
            self.check_type(p.ctx, p.term, p.ty)

    def elaborate(self, ctx: TyCtx, t: Term, ty: Ty) -> Term:
        """Fill in every missing eliminator motive."""
        t = self._with_motive(t, ty)
        kids = [self.elaborate(p.ctx, p.term, p.ty) for p in self.premises(ctx, t, ty)]
        return t.rebuild(kids) if kids else t

    def premises(self, ctx: TyCtx, t: Term, ty: Ty) -> List[Premise]:
        """The children a rule needs, with their goals; raises on a shape mismatch."""
        one = self.sr.one
        if isinstance(t, Var):
            return []
        if isinstance(t, UnitI):
            if ty != One():
                raise _mismatch("unit", ty, One())
            return []
        if isinstance(t, Eat):
            if ty != Top():
                raise _mismatch("<>", ty, Top())
            return []
        if isinstance(t, Lam):
            if not isinstance(ty, Fun) or ty.dom != t.ty:
                raise _mismatch("lambda", ty, f"{show_ty(t.ty)} -o ...")
            return [Premise(ctx.extend((t.name, t.ty)), t.body, ty.cod, (one,), SAME)]
        if isinstance(t, App):
            fty = self.infer_type(ctx, t.fn)
            if not isinstance(fty, Fun):
                raise _mismatch("function position", "a -o type", fty)
            if fty.cod != ty:
                raise _mismatch("application result", ty, fty.cod)
            return [Premise(ctx, t.fn, fty, (), LEFT), Premise(ctx, t.arg, fty.dom, (), RIGHT)]
        if isinstance(t, UnitE):
            return [Premise(ctx, t.scrut, One(), (), LEFT), Premise(ctx, t.body, ty, (), RIGHT)]
        if isinstance(t, Pair):
            if not isinstance(ty, Tensor):
                raise _mismatch("pair", ty, "a * type")
            return [Premise(ctx, t.left, ty.left, (), LEFT), Premise(ctx, t.right, ty.right, (), RIGHT)]
        if isinstance(t, PairE):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Tensor):
                raise _mismatch("pair elimination", "a * type", sty)
            inner = ctx.extend((t.names[0], sty.left), (t.names[1], sty.right))
            return [Premise(ctx, t.scrut, sty, (), LEFT), Premise(inner, t.body, ty, (one, one), RIGHT)]
        if isinstance(t, ExF):
            return [Premise(ctx, t.scrut, Zero(), (), LEFT)]
        if isinstance(t, (InjL, InjR)):
            if not isinstance(ty, Sum):
                raise _mismatch("injection", ty, "a + type")
            return [Premise(ctx, t.body, ty.left if isinstance(t, InjL) else ty.right, (), SAME)]
        if isinstance(t, Case):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Sum):
                raise _mismatch("case", "a + type", sty)
            return [
                Premise(ctx, t.scrut, sty, (), LEFT),
                Premise(ctx.extend((t.names[0], sty.left)), t.left, ty, (one,), RIGHT),
                Premise(ctx.extend((t.names[1], sty.right)), t.right, ty, (one,), RIGHT),
            ]
        if isinstance(t, (ProjL, ProjR)):
            wty = self.infer_type(ctx, t.body)
            if not isinstance(wty, With):
                raise _mismatch("projection", "a & type", wty)
            picked = wty.left if isinstance(t, ProjL) else wty.right
            if picked != ty:
                raise _mismatch("projection result", ty, picked)
            return [Premise(ctx, t.body, wty, (), SAME)]
        if isinstance(t, WithI):
            if not isinstance(ty, With):
                raise _mismatch("with pair", ty, "a & type")
            return [Premise(ctx, t.left, ty.left, (), SAME), Premise(ctx, t.right, ty.right, (), SAME)]
        if isinstance(t, BangI):
            if not isinstance(ty, Bang) or ty.usage != t.usage:
                raise _mismatch("promotion", ty, f"![{t.usage}] ...")
            return [Premise(ctx, t.body, ty.body, (), LEFT)]
        if isinstance(t, BangE):
            sty = self.infer_type(ctx, t.scrut)
            if not isinstance(sty, Bang):
                raise _mismatch("bang elimination", "a ! type", sty)
            return [Premise(ctx, t.scrut, sty, (), LEFT),
                    Premise(ctx.extend((t.name, sty.body)), t.body, ty, (sty.usage,), RIGHT)]
        raise TypeError(f"not a term: {t!r}")

    # Node-local rule checking

    def _vector(self, v: UsageCtx, n: int, what: str) -> None:
        if len(v) != n:
            raise DimensionMismatch(f"{what} has length {len(v)} but the context has length {n}")

    def _leq_fact(self, lhs: UsageCtx, rhs: UsageCtx, what: str) -> Fact:
        bad = self.la.first_failure(lhs, rhs)
        if bad is not None:
            raise UsageMismatch(
                f"{what}: {self.la.show(lhs)} is not below {self.la.show(rhs)} "
                f"({self.sr.show(lhs[bad])} is not <= {self.sr.show(rhs[bad])} at coordinate {bad})",
                lhs=self.la.show(lhs), rhs=self.la.show(rhs), coordinate=bad,
            )
        return Fact("leq", (tuple(lhs),), tuple(rhs))

    def _two_facts(self, usage: UsageCtx, split: Two) -> Tuple[Fact, ...]:
        total = self.la.add(split.left, split.right)
        return (Fact("add", (tuple(split.left), tuple(split.right)), total),
                self._leq_fact(usage, total, "usage not covered by the split P + Q"))

    def _expect_child(self, child: Derivation, ctx: TyCtx, usage: UsageCtx, ty: Ty, i: int) -> None:
        if child.ctx.types != ctx.types:
            raise TypeMismatch(f"premise {i} has the wrong context")
        if tuple(child.usage) != tuple(usage):
            raise UsageMismatch(
                f"premise {i} is at usage {self.la.show(child.usage)}, expected {self.la.show(usage)}",
                lhs=self.la.show(child.usage), rhs=self.la.show(usage),
            )
        if child.ty != ty:
            raise _mismatch(f"premise {i} type", ty, child.ty)

    def assemble(self, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty,
                 children: Sequence[Derivation] = (), path: Tuple[int, ...] = ()) -> Derivation:
        """Validate one rule instance from its premises' conclusions and record its facts."""
        rule = rule_for(t)
        try:
            return self._assemble(rule, ctx, tuple(usage), t, ty, tuple(children))
        except LrError as e:
            raise e.at(rule.value, path)

    def _assemble(self, rule: RuleTag, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty,
                  children: Tuple[Derivation, ...]) -> Derivation:
        n = len(ctx)
        one = self.sr.one
        self._vector(usage, n, "usage context")
        kids = t.subterms()
        if len(kids) != len(children):
            raise LrError(f"{rule.value} needs {len(kids)} premise(s), got {len(children)}")
        for i, (k, c) in enumerate(zip(kids, children)):
            if not annotated_equal(k, c.term):
                raise LrError(f"premise {i} derives a different term")
        if isinstance(t, ELIMINATORS) and t.ty is not None and t.ty != ty:
            raise _mismatch("eliminator motive", ty, t.ty)

        facts: Tuple[Fact, ...] = ()
        split = getattr(t, "split", None)
        if has_split_slot(t):
            if split is None:
                raise MissingAnnotation(f"{rule.value} needs a split annotation (@{{P; Q}}); or use inference")
            for v in ((split.vec,) if isinstance(split, Scale) else (split.left, split.right)):
                self._vector(v, n, "split vector")

        def at(i: int, extra: Sequence[Tuple[str, Ty]] = (), base: UsageCtx = usage,
               bound: UsageCtx = (), goal: Ty = None):
            self._expect_child(children[i], ctx.extend(*extra), tuple(base) + tuple(bound),
                               goal if goal is not None else children[i].ty, i)

        if isinstance(t, Var):
            pos = ctx.position(t.index)
            if ctx.ty_at(pos) != ty:
                raise _mismatch("variable", ty, ctx.ty_at(pos))
            uvar_check(self.sr, usage, pos, ctx)
            facts = (Fact("leq", (usage,), self.la.basis(n, pos)),)
        elif isinstance(t, UnitI):
            if ty != One():
                raise _mismatch("unit", ty, One())
            facts = (self._leq_fact(usage, self.la.zeros(n), "unit needs an unused context"),)
        elif isinstance(t, Eat):
            if ty != Top():
                raise _mismatch("<>", ty, Top())
        elif isinstance(t, Lam):
            if not isinstance(ty, Fun) or ty.dom != t.ty:
                raise _mismatch("lambda", ty, f"{show_ty(t.ty)} -o {show_ty(children[0].ty)}")
            at(0, [(t.name, t.ty)], bound=(one,), goal=ty.cod)
        elif isinstance(t, App):
            fty = children[0].ty
            if not isinstance(fty, Fun) or fty.cod != ty:
                raise _mismatch("function position", Fun(children[1].ty, ty), fty)
            at(0, base=split.left)
            at(1, base=split.right, goal=fty.dom)
            facts = self._two_facts(usage, split)
        elif isinstance(t, UnitE):
            at(0, base=split.left, goal=One())
            at(1, base=split.right, goal=ty)
            facts = self._two_facts(usage, split)
        elif isinstance(t, Pair):
            if ty != Tensor(children[0].ty, children[1].ty):
                raise _mismatch("pair", ty, Tensor(children[0].ty, children[1].ty))
            at(0, base=split.left)
            at(1, base=split.right)
            facts = self._two_facts(usage, split)
        elif isinstance(t, PairE):
            sty = children[0].ty
            if not isinstance(sty, Tensor):
                raise _mismatch("pair elimination", "a * type", sty)
            at(0, base=split.left)
            at(1, [(t.names[0], sty.left), (t.names[1], sty.right)], base=split.right,
               bound=(one, one), goal=ty)
            facts = self._two_facts(usage, split)
        elif isinstance(t, ExF):
            at(0, base=split.left, goal=Zero())
            facts = self._two_facts(usage, split)
        elif isinstance(t, (InjL, InjR)):
            if not isinstance(ty, Sum):
                raise _mismatch("injection", ty, "a + type")
            at(0, goal=ty.left if isinstance(t, InjL) else ty.right)
        elif isinstance(t, Case):
            sty = children[0].ty
            if not isinstance(sty, Sum):
                raise _mismatch("case", "a + type", sty)
            at(0, base=split.left)
            at(1, [(t.names[0], sty.left)], base=split.right, bound=(one,), goal=ty)
            at(2, [(t.names[1], sty.right)], base=split.right, bound=(one,), goal=ty)
            facts = self._two_facts(usage, split)
        elif isinstance(t, (ProjL, ProjR)):
            wty = children[0].ty
            if not isinstance(wty, With):
                raise _mismatch("projection", "a & type", wty)
            picked = wty.left if isinstance(t, ProjL) else wty.right
            if picked != ty:
                raise _mismatch("projection result", ty, picked)
            at(0)
        elif isinstance(t, WithI):
            if ty != With(children[0].ty, children[1].ty):
                raise _mismatch("with pair", ty, With(children[0].ty, children[1].ty))
            at(0)
            at(1)
        elif isinstance(t, BangI):
            if ty != Bang(t.usage, children[0].ty):
                raise _mismatch("promotion", ty, Bang(t.usage, children[0].ty))
            at(0, base=split.vec)
            scaled = self.la.scale(t.usage, split.vec)
            facts = (Fact("mul", ((t.usage,), tuple(split.vec)), scaled),
                     self._leq_fact(usage, scaled, "usage not covered by r·P"))
        elif isinstance(t, BangE):
            sty = children[0].ty
            if not isinstance(sty, Bang):
                raise _mismatch("bang elimination", "a ! type", sty)
            at(0, base=split.left)
            at(1, [(t.name, sty.body)], base=split.right, bound=(sty.usage,), goal=ty)
            facts = self._two_facts(usage, split)
        else:
            raise TypeError(f"not a term: {t!r}")

        return Derivation(rule, ctx, usage, t, ty, children, facts)

    # Checking mode

    def check(self, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty, path: Tuple[int, ...] = ()) -> Derivation:
        rule = rule_for(t)
        try:
            self._vector(usage, len(ctx), "usage context")
            t = self._with_motive(t, ty)
            prems = self.premises(ctx, t, ty)
            split = getattr(t, "split", None)
            if prems and has_split_slot(t) and split is None:
                raise MissingAnnotation(f"{rule.value} needs a split annotation (@{{P; Q}}); or use inference")
        except LrError as e:
            raise e.at(rule.value, path)

        children = []
        for i, p in enumerate(prems):
            if p.side == SAME:
                base = usage
            elif isinstance(split, Scale):
                base = split.vec
            else:
                base = split.left if p.side == LEFT else split.right
            children.append(self.check(p.ctx, tuple(base) + tuple(p.bound), p.term, p.ty, path + (i,)))
        t = t.rebuild([c.term for c in children]) if children else t
        logger.debug("checked %s at %s", rule.value, self.la.show(usage))
        return self.assemble(ctx, usage, t, ty, children, path)

    def recheck(self, d: Derivation, path: Tuple[int, ...] = ()) -> Derivation:
        """Re-validate every node of a derivation."""
        children = [self.recheck(c, path + (i,)) for i, c in enumerate(d.children)]
        again = self.assemble(d.ctx, d.usage, d.term, d.ty, children, path)
        if again.rule != d.rule or again.facts != d.facts:
            raise LrError("recorded facts do not match the rule", rule=d.rule.value, path=path)
        return again

    # Demand synthesis

    def _prune(self, entries: Frontier) -> Frontier:
        kept: Frontier = []
        for v, w in entries:
            if any(u == v for u, _ in kept):
                continue
            if any(u != v and self.la.leq(v, u) for u, _ in entries):
                continue
            kept.append((v, w))
        return kept

    def _maximal_vectors(self, n: int, what: str) -> List[UsageCtx]:
        top = self.sr.top()
        if top is not None:
            return [(top,) * n]
        maximal = self.sr.maximal_elements()
        if maximal is not None:
            return [tuple(v) for v in itertools.product(maximal, repeat=n)]
        if what == "exf":
            logger.warning("%s has no maximal usages; absurd takes the unused remainder 0", self.sr.name)
            return [self.la.zeros(n)]
        raise NoMeet(f"{self.sr.name} has no top element, so <> has no canonical demand; "
                     "check this judgment with explicit annotations")

    def _bind(self, frontier: Frontier, n: int, bound: UsageCtx, rule: str) -> Frontier:
        if not bound:
            return frontier
        out = [(v[:n], w) for v, w in frontier
               if all(self.sr.leq(b, v[n + k]) for k, b in enumerate(bound))]
        if not out:
            slots = ", ".join(self.la.show(v[n:]) for v, _ in frontier)
            raise BoundUsageError(f"bound variable(s) supplied {self.la.show(bound)} but the body demands {slots}",
                                  rule=rule)
        return self._prune(out)

    def frontier(self, ctx: TyCtx, t: Term, ty: Ty, path: Tuple[int, ...] = ()) -> Frontier:
        key = (id(t), ctx, ty)
        if key not in self._frontiers:
            rule = rule_for(t)
            try:
                self._frontiers[key] = (t, self._synth(ctx, t, ty, path))
            except LrError as e:
                raise e.at(rule.value, path)
        return self._frontiers[key][1]

    def _synth(self, ctx: TyCtx, t: Term, ty: Ty, path: Tuple[int, ...]) -> Frontier:
        n = len(ctx)
        t = self._with_motive(t, ty)
        prems = self.premises(ctx, t, ty)

        if isinstance(t, Var):
            pos = ctx.position(t.index)
            if ctx.ty_at(pos) != ty:
                raise _mismatch("variable", ty, ctx.ty_at(pos))
            return [(self.la.basis(n, pos), t)]
        if isinstance(t, UnitI):
            return [(self.la.zeros(n), t)]
        if isinstance(t, Eat):
            return [(v, t) for v in self._maximal_vectors(n, "eat")]

        rule = rule_for(t).value
        kids = [self._bind(self.frontier(p.ctx, p.term, p.ty, path + (i,)), n, p.bound, rule)
                for i, p in enumerate(prems)]

        if isinstance(t, WithI):
            return self._prune([(self.la.meet(a, b), t.rebuild([wa, wb]))
                                for a, wa in kids[0] for b, wb in kids[1]])
        if isinstance(t, BangI):
            return self._prune([(self.la.scale(t.usage, p), t.rebuild([w], split=Scale(p)))
                                for p, w in kids[0]])
        if not has_split_slot(t):
            return [(v, t.rebuild([w])) for v, w in kids[0]]

        lefts = kids[0]
        if len(kids) == 1:
            rights = [(q, []) for q in self._maximal_vectors(n, "exf")]
        elif len(kids) == 2:
            rights = [(q, [w]) for q, w in kids[1]]
        else:
            rights = self._prune([(self.la.meet(a, b), [wa, wb])
                                        for a, wa in kids[1] for b, wb in kids[2]])
        out = [(self.la.add(p, q), t.rebuild([wp] + wq, split=Two(p, q)))
               for p, wp in lefts for q, wq in rights]
        return self._prune(out)

    def synthesize_demand(self, ctx: TyCtx, t: Term, ty: Ty) -> Demand:
        self._frontiers = {}
        self.check_type(ctx, t, ty)
        frontier = self.frontier(ctx, erase(t), ty)
        logger.debug("demand frontier of size %d", len(frontier))
        return Demand(tuple(frontier))

    def infer_check(self, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty) -> Derivation:
        self._vector(usage, len(ctx), "usage context")
        demand = self.synthesize_demand(ctx, t, ty)
        for vec, witness in demand.frontier:
            if self.la.leq(usage, vec):
                return self.check(ctx, usage, witness, ty)
        vec = demand.frontier[0][0]
        bad = self.la.first_failure(usage, vec)
        others = "" if len(demand.frontier) == 1 else f" (or any of {len(demand.frontier) - 1} other demands)"
        raise UsageMismatch(
            f"usage {self.la.show(usage)} is not below the demand {self.la.show(vec)}{others}: "
            f"{self.sr.show(usage[bad])} is not <= {self.sr.show(vec[bad])} at coordinate {bad}",
            lhs=self.la.show(usage), rhs=self.la.show(vec), coordinate=bad, rule="demand",
        )

    # Bottom-up normalization

    def _accepts(self, p: Premise, base: UsageCtx) -> bool:
        vec = tuple(base) + tuple(p.bound)
        return any(self.la.leq(vec, d) for d, _ in self.frontier(p.ctx, p.term, p.ty))

    def _two_candidates(self, usage: UsageCtx, hint) -> List[Two]:
        options = [self.sr.decompose_add(r) for r in usage]
        out = []
        if isinstance(hint, Two) and all(
                self.sr.is_bottom_up_add(p, q, r) for p, q, r in zip(hint.left, hint.right, usage)):
            out.append(hint)
        for combo in itertools.product(*options):
            out.append(Two(tuple(c[0] for c in combo), tuple(c[1] for c in combo)))
        return out

    def _scale_candidates(self, r, usage: UsageCtx, hint) -> List[UsageCtx]:
        els = self.sr.elements() or []
        options = []
        for target in usage:
            exact = self.sr.decompose_mul(r, target)
            if not exact and self.sr.leq(target, self.sr.zero):
                # weakening at the modality: the premise drops this variable
                exact = [p for p in els if self.sr.is_bottom_up_mul(r, p, self.sr.zero)]
            options.append(exact)
        out = []
        if isinstance(hint, Scale) and all(p in opts for p, opts in zip(hint.vec, options)):
            out.append(tuple(hint.vec))
        out.extend(tuple(c) for c in itertools.product(*options))
        return out

    def _bottom_up(self, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty, path: Tuple[int, ...]) -> Derivation:
        t = self._with_motive(t, ty)
        prems = self.premises(ctx, t, ty)
        hint = getattr(t, "split", None)

        def build(bases: Sequence[UsageCtx], split=None) -> Derivation:
            children = [self._bottom_up(p.ctx, tuple(b) + tuple(p.bound), p.term, p.ty, path + (i,))
                        for i, (p, b) in enumerate(zip(prems, bases))]
            changes = {"split": split} if split is not None else {}
            node = t.rebuild([c.term for c in children], **changes) if children else t
            return self.assemble(ctx, usage, node, ty, children, path)

        if not prems:
            return build([])
        if not has_split_slot(t):
            return build([usage] * len(prems))
        if isinstance(t, BangI):
            for vec in self._scale_candidates(t.usage, usage, hint):
                if self._accepts(prems[0], vec):
                    return build([vec], Scale(vec))
        else:
            for split in self._two_candidates(usage, hint):
                if self._accepts(prems[0], split.left) and all(self._accepts(p, split.right) for p in prems[1:]):
                    return build([split.left] + [split.right] * (len(prems) - 1), split)
        raise UsageMismatch(f"no bottom-up split of {self.la.show(usage)} fits the premises",
                            lhs=self.la.show(usage), rule=rule_for(t).value, path=path)

    def to_bottom_up(self, d: Derivation) -> Derivation:
        self._frontiers = {}
        return self._bottom_up(d.ctx, d.usage, d.term, d.ty, ())

    def bottom_up_violations(self, d: Derivation) -> List[str]:
        """Interior facts outside the bottom-up tables, and non-reflexive interior leq facts."""
        problems = []
        for path, node in d.walk():
            if node.is_leaf:
                continue
            where = ".".join(str(p) for p in path) or "root"
            for fact in node.facts:
                if fact.kind == "add":
                    p, q = fact.lhs
                    for i, (a, b, s) in enumerate(zip(p, q, fact.rhs)):
                        if not self.sr.is_bottom_up_add(a, b, s):
                            problems.append(f"{where}: {a}+{b}={s} at coordinate {i} is not a table fact")
                elif fact.kind == "mul":
                    (r,), p = fact.lhs
                    for i, (a, s) in enumerate(zip(p, fact.rhs)):
                        if not self.sr.is_bottom_up_mul(r, a, s):
                            problems.append(f"{where}: {r}*{a}={s} at coordinate {i} is not a table fact")
                elif not fact.reflexive:
                    for i, (a, s) in enumerate(zip(fact.lhs[0], fact.rhs)):
                        if a == s:
                            continue
                        if node.rule == RuleTag.BANG_I and s == self.sr.zero:
                            continue
                        problems.append(f"{where}: {a} <= {s} at coordinate {i} is not reflexive")
        return problems


# Module-level entry points

def check(sr: SkewSemiring, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty) -> Derivation:
    return Checker(sr).check(ctx, tuple(usage), t, ty)


def synthesize_demand(sr: SkewSemiring, ctx: TyCtx, t: Term, ty: Ty) -> Demand:
    return Checker(sr).synthesize_demand(ctx, t, ty)


def infer_check(sr: SkewSemiring, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty) -> Derivation:
    return Checker(sr).infer_check(ctx, tuple(usage), t, ty)


def to_bottom_up(sr: SkewSemiring, d: Derivation) -> Derivation:
    return Checker(sr).to_bottom_up(d)


def recheck(sr: SkewSemiring, d: Derivation) -> Derivation:
    return Checker(sr).recheck(d)


def assemble(sr: SkewSemiring, ctx: TyCtx, usage: UsageCtx, t: Term, ty: Ty,
             children: Sequence[Derivation] = ()) -> Derivation:
    return Checker(sr).assemble(ctx, tuple(usage), t, ty, children)


def var_derivation(sr: SkewSemiring, ctx: TyCtx, usage: UsageCtx, pos: int) -> Derivation:
    """The var rule at context position `pos`."""
    return assemble(sr, ctx, usage, Var(len(ctx) - 1 - pos), ctx.ty_at(pos))


def bottom_up_violations(sr: SkewSemiring, d: Derivation) -> List[str]:
    return Checker(sr).bottom_up_violations(d)
