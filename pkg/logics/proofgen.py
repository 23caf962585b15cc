"""
Seeded generators of DILL and PD proofs, built rule by rule in the object
logic itself.

Proofs grow from the leaves: each rule picks or synthesizes its premises
and the conclusion is read off them, so every script checks against the
sequent it comes with. Binders are always fresh; branches that must agree
(with-I, plus-E, or-E) reuse one premise, renamed where a binder differs.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from logics.dill import DBang, DBase, DLolli, DOne, DPlus, DTensor, DTop, DWith, DZero, DillTy
from logics.pd import PAnd, PBase, PBot, PBox, PImp, POr, PTop, PdTy
from logics.scripts import Step, Zone, ZonedSequent

logger = logging.getLogger(__name__)


class _Stuck(Exception):
    pass


@dataclass(frozen=True)
class ProofGenConfig:
    bases: Tuple[str, ...] = ("A", "B")
    depth: int = 3
    type_depth: int = 1
    max_outer: int = 2
    max_inner: int = 2


@dataclass(frozen=True)
class Proof:
    sequent: ZonedSequent
    script: Step


def rename_step(step: Step, old: str, new: str) -> Step:
    """The same script with every mention of variable `old` read as `new`."""
    def swap(names: Sequence[str]) -> Tuple[str, ...]:
        return tuple(new if x == old else x for x in names)

    split = None if step.split is None else (swap(step.split[0]), swap(step.split[1]))
    return Step(step.rule, step.annot, swap(step.names), split,
                tuple(rename_step(c, old, new) for c in step.children))


def _names(zone: Zone) -> Tuple[str, ...]:
    return tuple(x for x, _ in zone)


class ProofGenerator:
    """Shared plumbing: names, zones and the try-each-rule loop."""

    def __init__(self, seed: int = 0, config: ProofGenConfig = ProofGenConfig()):
        self.rng = random.Random(seed)
        self.config = config
        self._counter = itertools.count()

    def fresh(self, base: str) -> str:
        return f"{base}{next(self._counter)}"

    def ty(self, depth: Optional[int] = None):
        raise NotImplementedError

    def zone(self, size: int, base: str) -> Zone:
        return tuple((self.fresh(base), self.ty()) for _ in range(self.rng.randint(0, size)))

    def first_that_works(self, options: List[Callable[[], object]]):
        self.rng.shuffle(options)
        for option in options:
            try:
                return option()
            except _Stuck:
                continue
        raise _Stuck()

    def proofs(self, count: int) -> Iterator[Proof]:
        for _ in range(count):
            yield self.proof()

    def proof(self) -> Proof:
        raise NotImplementedError


# DILL

class DillProofGenerator(ProofGenerator):
    """Proofs of `G | D |- A`; every linear variable is consumed exactly once."""

    def ty(self, depth: Optional[int] = None) -> DillTy:
        depth = self.config.type_depth if depth is None else depth
        if depth <= 0 or self.rng.random() < 0.4:
            return self.rng.choice([DBase(b) for b in self.config.bases] + [DOne(), DTop(), DZero()])
        d = depth - 1
        pick = self.rng.choice(["tensor", "lolli", "bang", "plus", "with"])
        if pick == "bang":
            return DBang(self.ty(d))
        if pick == "lolli":
            return DLolli(self.ty(d), self.ty(d))
        cls = {"tensor": DTensor, "plus": DPlus, "with": DWith}[pick]
        return cls(self.ty(d), self.ty(d))

    def proof(self) -> Proof:
        outer = self.zone(self.config.max_outer, "g")
        inner, goal, script = self.synth(outer, self.config.depth)
        return Proof(ZonedSequent(outer, inner, goal), script)

    def synth(self, outer: Zone, depth: int) -> Tuple[Zone, DillTy, Step]:
        leaves = [self.lin_ax, self.unit, self.top]
        if outer:
            leaves.append(self.int_ax)
        options = [lambda f=f: f(outer) for f in leaves]
        if depth > 0:
            rules = [self.tensor_i, self.lolli_i, self.with_i, self.plus_i, self.bang_i, self.tensor_e,
                     self.lolli_e, self.unit_e, self.bang_e, self.with_e, self.zero_e, self.plus_e]
            options += [lambda f=f: f(outer, depth - 1) for f in rules]
        return self.first_that_works(options)

    def _axiom(self, ty: DillTy) -> Tuple[Zone, Step]:
        x = self.fresh("v")
        return ((x, ty),), Step("lin-ax", names=(x,))

    # Leaves

    def lin_ax(self, outer):
        ty = self.ty()
        zone, step = self._axiom(ty)
        return zone, ty, step

    def int_ax(self, outer):
        x, ty = self.rng.choice(outer)
        return (), ty, Step("int-ax", names=(x,))

    def unit(self, outer):
        return (), DOne(), Step("I-I")

    def top(self, outer):
        return self.zone(self.config.max_inner, "t"), DTop(), Step("top-I")

    # Introductions

    def tensor_i(self, outer, d):
        li, lg, ls = self.synth(outer, d)
        ri, rg, rs = self.synth(outer, d)
        return li + ri, DTensor(lg, rg), Step("tensor-I", split=(_names(li), _names(ri)), children=(ls, rs))

    def lolli_i(self, outer, d):
        inner, goal, step = self.synth(outer, d)
        if not inner:
            raise _Stuck()
        x, a = self.rng.choice(inner)
        rest = tuple(e for e in inner if e[0] != x)
        return rest, DLolli(a, goal), Step("lolli-I", names=(x,), children=(step,))

    def with_i(self, outer, d):
        inner, goal, step = self.synth(outer, d)
        if self.rng.random() < 0.5:
            return inner, DWith(goal, goal), Step("with-I", children=(step, step))
        return inner, DWith(goal, DTop()), Step("with-I", children=(step, Step("top-I")))

    def plus_i(self, outer, d):
        inner, goal, step = self.synth(outer, d)
        other = self.ty()
        if self.rng.random() < 0.5:
            return inner, DPlus(goal, other), Step("plus-I1", children=(step,))
        return inner, DPlus(other, goal), Step("plus-I2", children=(step,))

    def bang_i(self, outer, d):
        inner, goal, step = self.synth(outer, d)
        if inner:
            raise _Stuck()
        return (), DBang(goal), Step("bang-I", children=(step,))

    # Eliminations

    def tensor_e(self, outer, d):
        inner, goal, body = self.synth(outer, d)
        if len(inner) < 2:
            raise _Stuck()
        (x, a), (y, b) = self.rng.sample(list(inner), 2)
        rest = tuple(e for e in inner if e[0] not in (x, y))
        scrut = DTensor(a, b)
        zone, ax = self._axiom(scrut)
        return (zone + rest, goal,
                Step("tensor-E", scrut, (x, y), (_names(zone), _names(rest)), (ax, body)))

    def lolli_e(self, outer, d):
        inner, arg, arg_step = self.synth(outer, d)
        goal = self.ty()
        zone, ax = self._axiom(DLolli(arg, goal))
        return zone + inner, goal, Step("lolli-E", arg, split=(_names(zone), _names(inner)),
                                        children=(ax, arg_step))

    def unit_e(self, outer, d):
        inner, goal, body = self.synth(outer, d)
        zone, ax = self._axiom(DOne())
        return zone + inner, goal, Step("I-E", split=(_names(zone), _names(inner)), children=(ax, body))

    def bang_e(self, outer, d):
        """The scrutinee is a linear !A, or a bang-I redex when one comes out."""
        boxed_inner, a, boxed = self.synth(outer, d)
        if boxed_inner:
            a = self.ty()
            zone, scrut = self._axiom(DBang(a))
        else:
            zone, scrut = (), Step("bang-I", children=(boxed,))
        x = self.fresh("x")
        inner, goal, body = self.synth(outer + ((x, a),), d)
        return zone + inner, goal, Step("bang-E", DBang(a), (x,), (_names(zone), _names(inner)), (scrut, body))

    def with_e(self, outer, d):
        a, b = self.ty(), self.ty()
        zone, ax = self._axiom(DWith(a, b))
        if self.rng.random() < 0.5:
            return zone, a, Step("with-E1", DWith(a, b), children=(ax,))
        return zone, b, Step("with-E2", DWith(a, b), children=(ax,))

    def zero_e(self, outer, d):
        zone, ax = self._axiom(DZero())
        rest = self.zone(self.config.max_inner, "r")
        return zone + rest, self.ty(), Step("zero-E", split=(_names(zone), _names(rest)), children=(ax,))

    def plus_e(self, outer, d):
        inner, goal, left = self.synth(outer, d)
        if not inner:
            raise _Stuck()
        x, a = self.rng.choice(inner)
        y = self.fresh("y")
        rest = tuple(e for e in inner if e[0] != x)
        scrut = DPlus(a, a)
        zone, ax = self._axiom(scrut)
        return (zone + rest, goal, Step("plus-E", scrut, (x, y), (_names(zone), _names(rest)),
                                        (ax, left, rename_step(left, x, y))))


# PD

class PdProofGenerator(ProofGenerator):
    """Proofs of `G |v D |- A true`; assumptions may go unused or be used twice."""

    def ty(self, depth: Optional[int] = None) -> PdTy:
        depth = self.config.type_depth if depth is None else depth
        if depth <= 0 or self.rng.random() < 0.4:
            return self.rng.choice([PBase(b) for b in self.config.bases] + [PTop(), PBot()])
        d = depth - 1
        pick = self.rng.choice(["imp", "and", "or", "box"])
        if pick == "box":
            return PBox(self.ty(d))
        if pick == "imp":
            return PImp(self.ty(d), self.ty(d))
        return (PAnd if pick == "and" else POr)(self.ty(d), self.ty(d))

    def proof(self) -> Proof:
        outer = self.zone(self.config.max_outer, "g")
        inner = self.zone(self.config.max_inner, "h")
        goal, script = self.synth(outer, inner, self.config.depth)
        return Proof(ZonedSequent(outer, inner, goal), script)

    def synth(self, outer: Zone, inner: Zone, depth: int) -> Tuple[PdTy, Step]:
        options: List[Callable[[], Tuple[PdTy, Step]]] = [lambda: (PTop(), Step("top-I"))]
        if inner:
            options.append(lambda: self.hyp(inner, "hyp"))
        if outer:
            options.append(lambda: self.hyp(outer, "hyp*"))
        if depth > 0:
            rules = [self.imp_i, self.imp_e, self.and_i, self.and_e, self.or_i, self.or_e,
                     self.bot_e, self.box_i, self.box_e]
            options += [lambda f=f: f(outer, inner, depth - 1) for f in rules]
        return self.first_that_works(options)

    def hyp(self, zone: Zone, rule: str):
        x, ty = self.rng.choice(zone)
        return ty, Step(rule, names=(x,))

    def _assumption(self, outer: Zone, inner: Zone, cls) -> Optional[Tuple[PdTy, Step]]:
        found = [("hyp", x, a) for x, a in inner if isinstance(a, cls)]
        found += [("hyp*", x, a) for x, a in outer if isinstance(a, cls)]
        if not found:
            return None
        rule, x, a = self.rng.choice(found)
        return a, Step(rule, names=(x,))

    def imp_i(self, outer, inner, d):
        x, a = self.fresh("x"), self.ty()
        goal, body = self.synth(outer, inner + ((x, a),), d)
        return PImp(a, goal), Step("imp-I", names=(x,), children=(body,))

    def imp_e(self, outer, inner, d):
        arg, arg_step = self.synth(outer, inner, d)
        fn = self._assumption(outer, inner, PImp)
        if fn is not None and fn[0].dom == arg:
            return fn[0].cod, Step("imp-E", arg, children=(fn[1], arg_step))
        x = self.fresh("x")
        goal, body = self.synth(outer, inner + ((x, arg),), d)
        return goal, Step("imp-E", arg, children=(Step("imp-I", names=(x,), children=(body,)), arg_step))

    def and_i(self, outer, inner, d):
        lg, ls = self.synth(outer, inner, d)
        rg, rs = self.synth(outer, inner, d)
        return PAnd(lg, rg), Step("and-I", children=(ls, rs))

    def and_e(self, outer, inner, d):
        pair = self._assumption(outer, inner, PAnd)
        if pair is None:
            lg, ls = self.synth(outer, inner, d)
            rg, rs = self.synth(outer, inner, d)
            pair = PAnd(lg, rg), Step("and-I", children=(ls, rs))
        ty, step = pair
        if self.rng.random() < 0.5:
            return ty.left, Step("and-E1", ty, children=(step,))
        return ty.right, Step("and-E2", ty, children=(step,))

    def or_i(self, outer, inner, d):
        goal, step = self.synth(outer, inner, d)
        other = self.ty()
        if self.rng.random() < 0.5:
            return POr(goal, other), Step("or-I1", children=(step,))
        return POr(other, goal), Step("or-I2", children=(step,))

    def or_e(self, outer, inner, d):
        a, a_step = self.synth(outer, inner, d)
        scrut = POr(a, a)
        rule = self.rng.choice(["or-I1", "or-I2"])
        x, y = self.fresh("x"), self.fresh("y")
        goal, left = self.synth(outer, inner + ((x, a),), d)
        return goal, Step("or-E", scrut, (x, y), children=(
            Step(rule, children=(a_step,)), left, rename_step(left, x, y)))

    def bot_e(self, outer, inner, d):
        absurd = self._assumption(outer, inner, PBot)
        if absurd is None:
            raise _Stuck()
        return self.ty(), Step("bot-E", children=(absurd[1],))

    def box_i(self, outer, inner, d):
        goal, step = self.synth(outer, (), d)
        return PBox(goal), Step("box-I", children=(step,))

    def box_e(self, outer, inner, d):
        boxed = self._assumption(outer, inner, PBox)
        if boxed is None:
            body_ty, body = self.synth(outer, (), d)
            boxed = PBox(body_ty), Step("box-I", children=(body,))
        ty, scrut = boxed
        x = self.fresh("x")
        goal, body = self.synth(outer + ((x, ty.body),), inner, d)
        return goal, Step("box-E", ty, (x,), children=(scrut, body))
