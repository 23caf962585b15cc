"""
Kits: what a traversal does at variables.

A kit works over one family of "stuff" living in a context at a usage
with a type. Two ship: plain usage-checked variables (renaming) and whole
derivations (substitution).
"""

from dataclasses import dataclass
from typing import Any, Callable, Tuple

from checker.checker import var_derivation
from checker.derivation import Derivation
from lang.syntax import Ty, TyCtx, UVar, uvar_check
from usage_ops.linalg import UsageAlgebra, UsageCtx
from usage_ops.semiring import SkewSemiring

Stuff = Any


@dataclass(frozen=True)
class Kit:
    name: str
    sr: SkewSemiring
    psh: Callable[[UsageCtx, Stuff], Stuff]
    vr: Callable[[UVar], Stuff]
    tm: Callable[[Stuff], Derivation]
    wk: Callable[[Stuff, TyCtx], Stuff]


def conclusion_of(stuff: Stuff) -> Tuple[TyCtx, UsageCtx, Ty]:
    """Context, usage and type of a piece of stuff."""
    if isinstance(stuff, UVar):
        return stuff.ctx, stuff.usage, stuff.ty
    if isinstance(stuff, Derivation):
        return stuff.ctx, stuff.usage, stuff.ty
    raise TypeError(f"not kit stuff: {stuff!r}")


def lvar_kit(sr: SkewSemiring) -> Kit:
    la = UsageAlgebra(sr)

    def psh(usage: UsageCtx, v: UVar) -> UVar:
        return uvar_check(sr, usage, v.pos, v.ctx)

    def tm(v: UVar) -> Derivation:
        return var_derivation(sr, v.ctx, v.usage, v.pos)

    def wk(v: UVar, extra: TyCtx) -> UVar:
        return UVar(tuple(v.usage) + la.zeros(len(extra)), v.pos, v.ctx + extra)

    return Kit("lvar", sr, psh, lambda v: v, tm, wk)


def tm_kit(sr: SkewSemiring) -> Kit:
    from traversal.traverse import subuse, weaken

    def vr(v: UVar) -> Derivation:
        return var_derivation(sr, v.ctx, v.usage, v.pos)

    return Kit("tm", sr, lambda usage, d: subuse(sr, usage, d), vr, lambda d: d,
               lambda d, extra: weaken(sr, d, extra))
