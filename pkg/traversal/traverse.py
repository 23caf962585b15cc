"""
The generic traversal and what it gives for free: renaming, weakening,
subusaging, simultaneous and single substitution, and linear cut.
"""

import logging
from typing import Sequence, Tuple

from checker.checker import Checker, var_derivation
from checker.derivation import Derivation, RuleTag
from lang.errors import RenUsageError, SingleSubstUsageError, TypeMismatch, UsageMismatch
from lang.syntax import Scale, TyCtx, Two, UVar, has_split_slot, show_ty
from traversal.env import Env, bind, env_build
from traversal.kits import Kit, lvar_kit, tm_kit
from usage_ops.linalg import UsageAlgebra, UsageCtx
from usage_ops.semiring import SkewSemiring

logger = logging.getLogger(__name__)


def trav(kit: Kit, env: Env, d: Derivation, path: Tuple[int, ...] = ()) -> Derivation:
    """Turn a derivation over the environment's target into one over its source."""
    la = UsageAlgebra(kit.sr)
    if d.rule == RuleTag.VAR:
        stuff = env.act[d.ctx.position(d.term.index)]
        return kit.tm(kit.psh(env.src_usage, stuff))

    n = len(d.ctx)
    splits = has_split_slot(d.term)
    children = []
    for i, child in enumerate(d.children):
        base, bound = tuple(child.usage[:n]), tuple(child.usage[n:])
        cenv = env.at(la.vec_mat_mul(base, env.psi), base) if splits else env
        if bound:
            cenv = bind(kit, cenv, child.ctx.suffix(n), bound)
        children.append(trav(kit, cenv, child, path + (i,)))

    changes = {}
    split = d.term.split if splits else None
    if isinstance(split, Two):
        changes["split"] = Two(la.vec_mat_mul(split.left, env.psi), la.vec_mat_mul(split.right, env.psi))
    elif isinstance(split, Scale):
        changes["split"] = Scale(la.vec_mat_mul(split.vec, env.psi))
    term = d.term.rebuild([c.term for c in children], **changes)
    return Checker(kit.sr).assemble(env.src_ctx, env.src_usage, term, d.ty, children, path)


def ren(sr: SkewSemiring, f: Sequence[int], ctx: TyCtx, usage: UsageCtx, d: Derivation) -> Derivation:
    """Move d along a type-preserving map f from d's context positions into ctx."""
    la = UsageAlgebra(sr)
    f = list(f)
    if len(f) != len(d.ctx):
        raise TypeMismatch(f"renaming gives {len(f)} target(s) for a context of length {len(d.ctx)}")
    for j, target in enumerate(f):
        if not 0 <= target < len(ctx):
            raise TypeMismatch(f"renaming sends position {j} outside a context of length {len(ctx)}")
        if ctx.ty_at(target) != d.ctx.ty_at(j):
            raise TypeMismatch(f"renaming sends {show_ty(d.ctx.ty_at(j))} at {j} "
                               f"to {show_ty(ctx.ty_at(target))} at {target}")
    psi = la.reindex(la.identity(len(ctx)), f, range(len(ctx)))
    image = la.vec_mat_mul(d.usage, psi)
    bad = la.first_failure(usage, image)
    if bad is not None:
        raise RenUsageError(f"renaming needs {la.show(usage)} <= {la.show(image)} (fails at coordinate {bad})")
    act = [UVar(psi.row(j), target, ctx) for j, target in enumerate(f)]
    env = env_build(sr, ctx, usage, d.ctx, d.usage, psi, act)
    return trav(lvar_kit(sr), env, d)


def weaken(sr: SkewSemiring, d: Derivation, extra: TyCtx) -> Derivation:
    """Append unused variables to the right of d's context."""
    la = UsageAlgebra(sr)
    return ren(sr, range(len(d.ctx)), d.ctx + extra, tuple(d.usage) + la.zeros(len(extra)), d)


def subuse(sr: SkewSemiring, usage: UsageCtx, d: Derivation) -> Derivation:
    """Re-derive d at a smaller usage context."""
    la = UsageAlgebra(sr)
    bad = la.first_failure(usage, d.usage)
    if bad is not None:
        raise UsageMismatch(
            f"cannot subuse {la.show(d.usage)} to {la.show(usage)}: "
            f"{sr.show(usage[bad])} is not <= {sr.show(d.usage[bad])} at coordinate {bad}",
            lhs=la.show(usage), rhs=la.show(d.usage), coordinate=bad, rule="subuse",
        )
    if tuple(usage) == tuple(d.usage):
        return d
    return ren(sr, range(len(d.ctx)), d.ctx, usage, d)


def sub(sr: SkewSemiring, env: Env, d: Derivation) -> Derivation:
    """Simultaneous substitution of derivations for d's variables."""
    return trav(tm_kit(sr), env, d)


def single_subst(sr: SkewSemiring, m: Derivation, n: Derivation, usage: UsageCtx) -> Derivation:
    """Substitute m (Γ P ⊢ A) for the last variable of n ((Γ, x:A) (Q, r) ⊢ B), at usage R ⊴ rP + Q."""
    la = UsageAlgebra(sr)
    k = len(m.ctx)
    if len(n.ctx) != k + 1 or n.ctx.prefix(k).types != m.ctx.types:
        raise TypeMismatch("single substitution needs the body's context to be the term's context plus one")
    if n.ctx.ty_at(k) != m.ty:
        raise TypeMismatch(f"substituting a {show_ty(m.ty)} for a variable of type {show_ty(n.ctx.ty_at(k))}")
    q, r = tuple(n.usage[:k]), n.usage[k]
    bound = la.add(la.scale(r, m.usage), q)
    bad = la.first_failure(usage, bound)
    if bad is not None:
        raise SingleSubstUsageError(f"single substitution needs {la.show(usage)} <= {la.show(bound)} "
                                    f"(r = {sr.show(r)}; fails at coordinate {bad})")
    psi = la.vstack(la.identity(k), la.row_matrix(m.usage))
    act = [var_derivation(sr, m.ctx, la.basis(k, j), j) for j in range(k)] + [m]
    env = env_build(sr, m.ctx, usage, n.ctx, n.usage, psi, act)
    return sub(sr, env, n)


def cut1(sr: SkewSemiring, d1: Derivation, d2: Derivation) -> Derivation:
    """From x:A ⊢ B and Γ R ⊢ A, derive Γ R ⊢ B."""
    la = UsageAlgebra(sr)
    if len(d1.ctx) != 1:
        raise TypeMismatch(f"cut needs a single-variable derivation, got a context of length {len(d1.ctx)}")
    k = len(d2.ctx)
    wide = d2.ctx.extend(d1.ctx.entries[0])
    weakened = ren(sr, [k], wide, la.zeros(k) + tuple(d1.usage), d1)
    return single_subst(sr, d2, weakened, d2.usage)
