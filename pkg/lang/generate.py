"""
Seeded generators of well-typed, unannotated terms.

Terms come out in checking form: eliminators carry their motives and every
scrutinee is a variable, so `check_type` accepts them against the goal and
`synthesize_demand` / `infer_check` can fill in the split annotations.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from lang.syntax import (
    App, Bang, BangE, BangI, Base, Case, Eat, ExF, Fun, InjL, InjR, Lam, One, Pair, PairE, ProjL,
    ProjR, Sum, Tensor, Term, Top, Ty, TyCtx, UnitE, UnitI, Var, With, WithI, Zero,
)
from usage_ops.semiring import SkewSemiring, Usage

logger = logging.getLogger(__name__)

CONNECTIVES = ("fun", "one", "tensor", "sum", "top", "with", "bang")


class _Stuck(Exception):
    pass


@dataclass(frozen=True)
class GenConfig:
    bases: Tuple[str, ...] = ("A", "B")
    connectives: Tuple[str, ...] = CONNECTIVES
    bang_usages: Tuple[Usage, ...] = ()
    type_depth: int = 2
    term_depth: int = 3
    max_ctx: int = 3
    zero_vars: bool = False
    seed_bases: bool = True
    attempts: int = 50


# The fragments the two object logics can read back.
DILL_IMAGE = GenConfig(bang_usages=("w",), zero_vars=True)
PD_IMAGE = GenConfig(connectives=("fun", "one", "sum", "with", "bang"), bang_usages=("#",), zero_vars=True)


@dataclass
class Judgment:
    ctx: TyCtx
    term: Term
    ty: Ty
    names: List[str] = field(default_factory=list)


class TermGenerator:
    def __init__(self, sr: SkewSemiring, seed: int = 0, config: GenConfig = GenConfig()):
        self.sr = sr
        self.rng = random.Random(seed)
        self.config = config
        els = sr.elements()
        self._usages = list(config.bang_usages) or (els if els is not None else [0, 1, 2])
        self._counter = itertools.count()

    # Types

    def ty(self, depth: Optional[int] = None) -> Ty:
        depth = self.config.type_depth if depth is None else depth
        if depth <= 0 or self.rng.random() < 0.3 or not self.config.connectives:
            return Base(self.rng.choice(self.config.bases))
        c = self.rng.choice(self.config.connectives)
        if c == "one":
            return One()
        if c == "top":
            return Top()
        if c == "bang":
            return Bang(self.rng.choice(self._usages), self.ty(depth - 1))
        if c == "fun":
            return Fun(self.ty(depth - 1), self.ty(depth - 1))
        cls = {"tensor": Tensor, "sum": Sum, "with": With}[c]
        return cls(self.ty(depth - 1), self.ty(depth - 1))

    def ctx(self) -> TyCtx:
        cfg = self.config
        entries: List[Tuple[str, Ty]] = []
        if cfg.seed_bases:
            entries = [(b.lower(), Base(b)) for b in cfg.bases][:cfg.max_ctx]
        while len(entries) < cfg.max_ctx and self.rng.random() < 0.5:
            entries.append((self._name("v"), self.ty(1)))
        if cfg.zero_vars and len(entries) < cfg.max_ctx and self.rng.random() < 0.3:
            entries.append((self._name("z"), Zero()))
        self.rng.shuffle(entries)
        return TyCtx(tuple(entries))

    def usage(self, n: int) -> Tuple[Usage, ...]:
        els = self.sr.elements()
        pool = els if els is not None else [0, 1, 2, 3]
        return tuple(self.rng.choice(pool) for _ in range(n))

    # Terms

    def _name(self, base: str) -> str:
        return f"{base}{next(self._counter)}"

    def term(self, ctx: TyCtx, goal: Ty, depth: Optional[int] = None) -> Term:
        depth = self.config.term_depth if depth is None else depth
        options = []
        n = len(ctx)
        for pos, (_, a) in enumerate(ctx.entries):
            if a == goal:
                options.append(lambda pos=pos: Var(n - 1 - pos))
        intro = self._intro(ctx, goal, depth)
        if intro is not None:
            options.extend([intro] * 2)
        if depth > 0:
            for pos, (_, a) in enumerate(ctx.entries):
                options.extend(self._elims(ctx, n - 1 - pos, a, goal, depth))
        if not options:
            raise _Stuck()
        return self.rng.choice(options)()

    def _intro(self, ctx: TyCtx, goal: Ty, depth: int):
        d = max(depth - 1, 0)
        if isinstance(goal, Fun):
            def lam():
                x = self._name("x")
                return Lam(goal.dom, self.term(ctx.extend((x, goal.dom)), goal.cod, d), name=x)
            return lam
        if isinstance(goal, One):
            return UnitI
        if isinstance(goal, Top):
            return Eat
        if isinstance(goal, Tensor):
            return lambda: Pair(self.term(ctx, goal.left, d), self.term(ctx, goal.right, d))
        if isinstance(goal, With):
            return lambda: WithI(self.term(ctx, goal.left, d), self.term(ctx, goal.right, d))
        if isinstance(goal, Sum):
            if self.rng.random() < 0.5:
                return lambda: InjL(self.term(ctx, goal.left, d))
            return lambda: InjR(self.term(ctx, goal.right, d))
        if isinstance(goal, Bang):
            return lambda: BangI(goal.usage, self.term(ctx, goal.body, d))
        return None

    def _elims(self, ctx: TyCtx, index: int, a: Ty, goal: Ty, depth: int):
        d = depth - 1
        v = Var(index)
        if isinstance(a, Fun) and a.cod == goal:
            yield lambda: App(v, self.term(ctx, a.dom, d))
        elif isinstance(a, With):
            if a.left == goal:
                yield lambda: ProjL(v)
            if a.right == goal:
                yield lambda: ProjR(v)
        elif isinstance(a, One):
            yield lambda: UnitE(v, self.term(ctx, goal, d), goal)
        elif isinstance(a, Zero):
            yield lambda: ExF(v, goal)
        elif isinstance(a, Tensor):
            def pair_e():
                x, y = self._name("x"), self._name("y")
                body = self.term(ctx.extend((x, a.left), (y, a.right)), goal, d)
                return PairE(v, body, goal, names=(x, y))
            yield pair_e
        elif isinstance(a, Sum):
            def case():
                x, y = self._name("x"), self._name("y")
                left = self.term(ctx.extend((x, a.left)), goal, d)
                right = self.term(ctx.extend((y, a.right)), goal, d)
                return Case(v, left, right, goal, names=(x, y))
            yield case
        elif isinstance(a, Bang):
            def bang_e():
                x = self._name("x")
                return BangE(v, self.term(ctx.extend((x, a.body)), goal, d), goal, name=x)
            yield bang_e

    # Whole judgments

    def judgment(self, goal_ok=lambda ty: True) -> Judgment:
        """A context, a goal type and a term of that type, retried until one is found."""
        for _ in range(self.config.attempts):
            ctx = self.ctx()
            goal = self.ty()
            if not goal_ok(goal):
                continue
            try:
                term = self.term(ctx, goal)
            except _Stuck:
                continue
            return Judgment(ctx, term, goal, ctx.names)
        raise RuntimeError(f"no well-typed term found in {self.config.attempts} attempts")

    def judgments(self, count: int, goal_ok=lambda ty: True) -> Iterator[Judgment]:
        for _ in range(count):
            yield self.judgment(goal_ok)


def vectors_below(sr: SkewSemiring, v: Sequence[Usage]) -> List[Tuple[Usage, ...]]:
    """Every vector below v, pointwise."""
    els = sr.elements()
    if els is None:
        raise ValueError(f"{sr.name} is infinite")
    below = [[x for x in els if sr.leq(x, u)] for u in v]
    return list(itertools.product(*below))


def enumerate_terms(ctx: TyCtx, goal: Ty, depth: int) -> Iterator[Term]:
    """Every checking-form term of type goal over ctx nesting at most `depth` constructors.

    Variables, `()` and `<>` cost nothing; each introduction or elimination
    costs one level. Eliminated positions are always variables, as with
    the random generator.
    """
    n = len(ctx)
    for pos, (_, a) in enumerate(ctx.entries):
        if a == goal:
            yield Var(n - 1 - pos)
    if isinstance(goal, One):
        yield UnitI()
    if isinstance(goal, Top):
        yield Eat()
    if depth <= 0:
        return

    d = depth - 1
    if isinstance(goal, Fun):
        x = f"x{n}"
        for body in enumerate_terms(ctx.extend((x, goal.dom)), goal.cod, d):
            yield Lam(goal.dom, body, name=x)
    elif isinstance(goal, (Tensor, With)):
        cls = Pair if isinstance(goal, Tensor) else WithI
        rights = list(enumerate_terms(ctx, goal.right, d))
        for left in enumerate_terms(ctx, goal.left, d):
            for right in rights:
                yield cls(left, right)
    elif isinstance(goal, Sum):
        yield from (InjL(t) for t in enumerate_terms(ctx, goal.left, d))
        yield from (InjR(t) for t in enumerate_terms(ctx, goal.right, d))
    elif isinstance(goal, Bang):
        yield from (BangI(goal.usage, t) for t in enumerate_terms(ctx, goal.body, d))

    for pos, (_, a) in enumerate(ctx.entries):
        yield from _eliminations(ctx, Var(n - 1 - pos), a, goal, d)


def _eliminations(ctx: TyCtx, v: Var, a: Ty, goal: Ty, d: int) -> Iterator[Term]:
    n = len(ctx)
    if isinstance(a, Fun) and a.cod == goal:
        yield from (App(v, t) for t in enumerate_terms(ctx, a.dom, d))
    elif isinstance(a, With):
        if a.left == goal:
            yield ProjL(v)
        if a.right == goal:
            yield ProjR(v)
    elif isinstance(a, One):
        yield from (UnitE(v, t, goal) for t in enumerate_terms(ctx, goal, d))
    elif isinstance(a, Zero):
        yield ExF(v, goal)
    elif isinstance(a, Tensor):
        x, y = f"x{n}", f"y{n + 1}"
        for body in enumerate_terms(ctx.extend((x, a.left), (y, a.right)), goal, d):
            yield PairE(v, body, goal, names=(x, y))
    elif isinstance(a, Sum):
        x, y = f"x{n}", f"y{n}"
        rights = list(enumerate_terms(ctx.extend((y, a.right)), goal, d))
        for left in enumerate_terms(ctx.extend((x, a.left)), goal, d):
            for right in rights:
                yield Case(v, left, right, goal, names=(x, y))
    elif isinstance(a, Bang):
        x = f"x{n}"
        yield from (BangE(v, t, goal, name=x) for t in enumerate_terms(ctx.extend((x, a.body)), goal, d))
