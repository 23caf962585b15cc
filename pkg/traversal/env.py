"""
Environments: a usage matrix plus one piece of stuff per target variable.

An environment from (Γ, P) to (Δ, Q) turns a derivation over Δ Q into one
over Γ P. Its matrix Ψ has a row per Δ entry and a column per Γ entry.
"""

import logging
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

from lang.errors import DimensionMismatch, EnvActMismatch, EnvUsageError
from lang.syntax import TyCtx, UVar, show_ty
from traversal.kits import Kit, Stuff, conclusion_of
from usage_ops.linalg import UsageAlgebra, UsageCtx, UsageMatrix
from usage_ops.semiring import SkewSemiring

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Env:
    src_ctx: TyCtx
    src_usage: UsageCtx
    tgt_ctx: TyCtx
    tgt_usage: UsageCtx
    psi: UsageMatrix
    act: Tuple[Stuff, ...]

    def at(self, src_usage: UsageCtx, tgt_usage: UsageCtx) -> "Env":
        """The same substitution, read at other source/target usages."""
        return replace(self, src_usage=tuple(src_usage), tgt_usage=tuple(tgt_usage))


def env_build(sr: SkewSemiring, src_ctx: TyCtx, src_usage: UsageCtx, tgt_ctx: TyCtx,
              tgt_usage: UsageCtx, psi: UsageMatrix, act: Sequence[Stuff]) -> Env:
    """Validate P ⊴ QΨ and every act(j) against row j of Ψ."""
    la = UsageAlgebra(sr)
    m, n = len(src_ctx), len(tgt_ctx)
    if (psi.rows, psi.cols) != (n, m) or len(act) != n:
        raise DimensionMismatch(
            f"environment from a length-{m} to a length-{n} context needs a {n}x{m} matrix "
            f"and {n} actions, got {psi.rows}x{psi.cols} and {len(act)}")
    if len(src_usage) != m or len(tgt_usage) != n:
        raise DimensionMismatch("environment usages do not match their contexts")

    for j, stuff in enumerate(act):
        ctx, usage, ty = conclusion_of(stuff)
        if ctx is None or ctx.types != src_ctx.types:
            raise EnvActMismatch(f"action {j} lives in the wrong context")
        if tuple(usage) != psi.row(j):
            raise EnvActMismatch(f"action {j} is at usage {la.show(usage)} but row {j} of the matrix is "
                                 f"{la.show(psi.row(j))}")
        if ty != tgt_ctx.ty_at(j):
            raise EnvActMismatch(f"action {j} has type {show_ty(ty)}, expected {show_ty(tgt_ctx.ty_at(j))}")

    image = la.vec_mat_mul(tgt_usage, psi)
    bad = la.first_failure(src_usage, image)
    if bad is not None:
        raise EnvUsageError(f"environment needs {la.show(src_usage)} <= {la.show(image)} "
                            f"(fails at coordinate {bad})")
    return Env(src_ctx, tuple(src_usage), tgt_ctx, tuple(tgt_usage), psi, tuple(act))


def bind(kit: Kit, env: Env, extra: TyCtx, usage: UsageCtx) -> Env:
    """Extend an environment under binders: both sides gain `extra` at `usage`."""
    if len(extra) != len(usage):
        raise DimensionMismatch(f"binding {len(extra)} variable(s) with {len(usage)} usage(s)")
    la = UsageAlgebra(kit.sr)
    m, k = len(env.src_ctx), len(extra)
    src_ctx = env.src_ctx + extra
    psi = la.block_diag(env.psi, la.identity(k))
    old = tuple(kit.wk(stuff, extra) for stuff in env.act)
    fresh = tuple(kit.vr(UVar(la.zeros(m) + la.basis(k, i), m + i, src_ctx)) for i in range(k))
    return Env(src_ctx, tuple(env.src_usage) + tuple(usage), env.tgt_ctx + extra,
               tuple(env.tgt_usage) + tuple(usage), psi, old + fresh)
