"""
Brute-force reference for demand synthesis over finite instances.

`acceptable_usages` enumerates every usage context R for which some split
annotation of the term checks. It is exponential in the context length
and exists to test `synthesize_demand` against.
"""

from typing import FrozenSet, Iterable

from checker.checker import LEFT, RIGHT, SAME, Checker
from lang.syntax import BangI, Eat, Term, Ty, TyCtx, UnitI, Var
from usage_ops.linalg import UsageCtx, all_vectors
from usage_ops.semiring import SkewSemiring

UsageSet = FrozenSet[UsageCtx]


class Oracle:
    def __init__(self, sr: SkewSemiring):
        if not sr.is_finite:
            raise ValueError(f"the oracle needs a finite carrier; {sr.name} is infinite")
        self.sr = sr
        self.checker = Checker(sr)
        self.la = self.checker.la

    def everything(self, n: int) -> UsageSet:
        return frozenset(all_vectors(self.sr, n))

    def downset(self, n: int, tops: Iterable[UsageCtx]) -> UsageSet:
        tops = list(tops)
        return frozenset(r for r in all_vectors(self.sr, n) if any(self.la.leq(r, t) for t in tops))

    def _unbind(self, s: UsageSet, n: int, bound: UsageCtx) -> UsageSet:
        return frozenset(r[:n] for r in s if tuple(r[n:]) == tuple(bound))

    def usages(self, ctx: TyCtx, t: Term, ty: Ty) -> UsageSet:
        n = len(ctx)
        if isinstance(t, Var):
            return self.downset(n, [self.la.basis(n, ctx.position(t.index))])
        if isinstance(t, UnitI):
            return self.downset(n, [self.la.zeros(n)])
        if isinstance(t, Eat):
            return self.everything(n)

        t = self.checker._with_motive(t, ty)
        by_side = {LEFT: [], RIGHT: [], SAME: []}
        for p in self.checker.premises(ctx, t, ty):
            s = self.usages(p.ctx, p.term, p.ty)
            by_side[p.side].append(self._unbind(s, n, p.bound) if p.bound else s)

        if by_side[SAME]:
            return frozenset.intersection(*by_side[SAME])
        lefts = by_side[LEFT][0]
        if isinstance(t, BangI):
            return self.downset(n, {self.la.scale(t.usage, p) for p in lefts})
        rights = frozenset.intersection(*by_side[RIGHT]) if by_side[RIGHT] else self.everything(n)
        return self.downset(n, {self.la.add(p, q) for p in lefts for q in rights})


def acceptable_usages(sr: SkewSemiring, ctx: TyCtx, t: Term, ty: Ty) -> UsageSet:
    """Every R such that Γ R ⊢ t : ty holds for some annotation of t."""
    return Oracle(sr).usages(ctx, t, ty)
