import pytest

from checker.checker import Checker, check, infer_check, recheck, synthesize_demand, var_derivation
from lang.errors import (
    BoundUsageError, DimensionMismatch, EnvActMismatch, EnvUsageError, RenUsageError,
    SingleSubstUsageError, TypeMismatch, UsageMismatch,
)
from lang.generate import GenConfig, TermGenerator, vectors_below
from lang.syntax import (
    Base, InjL, Pair, PairE, Sum, Tensor, Two, TyCtx, UVar, Var, With, annotated_equal, erase, shift, substitute_top,
)
from logics.pd import top_meet_iso
from traversal.env import bind, env_build
from traversal.kits import lvar_kit, tm_kit
from traversal.traverse import cut1, ren, single_subst, sub, subuse, weaken
from usage_ops.linalg import UsageAlgebra, UsageMatrix, all_vectors
from usage_ops.semiring import LIN01W, MOD01BOX

A, B = Base("A"), Base("B")
XY = TyCtx.of(("x", A), ("y", B))


@pytest.fixture
def pair():
    """x:1 A, y:1 B |- (x, y) : A * B"""
    return check(LIN01W, XY, ("1", "1"), Pair(Var(1), Var(0), Two(("1", "0"), ("0", "1"))), Tensor(A, B))


def test_identity_renaming(pair):
    out = ren(LIN01W, [0, 1], XY, ("1", "1"), pair)
    assert out.conclusion == pair.conclusion
    assert annotated_equal(out.term, pair.term)


def test_exchange(pair):
    yx = TyCtx.of(("y", B), ("x", A))
    out = ren(LIN01W, [1, 0], yx, ("1", "1"), pair)
    assert out.ctx == yx
    assert out.term == Pair(Var(0), Var(1))
    assert out.term.split == Two(("0", "1"), ("1", "0"))
    assert recheck(LIN01W, out) == out


def test_weakening_appends_unused_variables(pair):
    out = weaken(LIN01W, pair, TyCtx.of(("z", A)))
    assert out.ctx.names == ["x", "y", "z"]
    assert out.usage == ("1", "1", "0")
    assert out.term == shift(pair.term, 1)
    assert out.term.split == Two(("1", "0", "0"), ("0", "1", "0"))


def test_renaming_errors(pair):
    with pytest.raises(RenUsageError):
        ren(LIN01W, [0, 1], XY, ("0", "1"), pair)
    with pytest.raises(TypeMismatch):
        ren(LIN01W, [1, 0], XY, ("1", "1"), pair)
    with pytest.raises(TypeMismatch):
        ren(LIN01W, [0], XY, ("1", "1"), pair)


def test_subusing(pair):
    assert subuse(LIN01W, ("1", "1"), pair) is pair
    out = subuse(LIN01W, ("w", "1"), pair)
    assert out.usage == ("w", "1")
    assert recheck(LIN01W, out) == out
    with pytest.raises(UsageMismatch) as err:
        subuse(LIN01W, ("0", "1"), pair)
    assert err.value.rule == "subuse"
    assert err.value.coordinate == 0


def test_subusing_under_mod01box():
    d = check(MOD01BOX, TyCtx.of(("x", A)), ("1",), Var(0), A)
    assert subuse(MOD01BOX, ("#",), d).usage == ("#",)
    with pytest.raises(UsageMismatch):
        subuse(MOD01BOX, ("0",), d)


def identity_env(sr, ctx, usage):
    la = UsageAlgebra(sr)
    n = len(ctx)
    act = [var_derivation(sr, ctx, la.basis(n, j), j) for j in range(n)]
    return env_build(sr, ctx, usage, ctx, usage, la.identity(n), act)


def test_identity_substitution(pair):
    out = sub(LIN01W, identity_env(LIN01W, XY, ("1", "1")), pair)
    assert out.conclusion == pair.conclusion
    assert annotated_equal(out.term, pair.term)


def test_environment_validation():
    la = UsageAlgebra(LIN01W)
    act = [var_derivation(LIN01W, XY, la.basis(2, j), j) for j in range(2)]
    with pytest.raises(EnvUsageError):
        env_build(LIN01W, XY, ("1", "1"), XY, ("0", "0"), la.identity(2), act)
    with pytest.raises(EnvActMismatch):
        env_build(LIN01W, XY, ("1", "1"), XY, ("1", "1"), la.identity(2), list(reversed(act)))
    with pytest.raises(DimensionMismatch):
        env_build(LIN01W, XY, ("1", "1"), XY, ("1", "1"), la.identity(3), act)
    with pytest.raises(DimensionMismatch):
        env_build(LIN01W, XY, ("1",), XY, ("1", "1"), la.identity(2), act)


def test_environment_rows_must_match_actions():
    bad_row = UsageMatrix.from_rows([["w", "0"], ["0", "1"]], 2)
    act = [var_derivation(LIN01W, XY, ("1", "0"), 0), var_derivation(LIN01W, XY, ("0", "1"), 1)]
    with pytest.raises(EnvActMismatch):
        env_build(LIN01W, XY, ("w", "1"), XY, ("1", "1"), bad_row, act)


def test_single_substitution_duplicates_the_argument():
    y = TyCtx.of(("y", A))
    m = check(LIN01W, y, ("1",), Var(0), A)
    body_ctx = TyCtx.of(("y", A), ("x", A))
    n = check(LIN01W, body_ctx, ("0", "w"), Pair(Var(0), Var(0), Two(("0", "1"), ("0", "1"))), Tensor(A, A))
    out = single_subst(LIN01W, m, n, ("w",))
    assert out.ctx == y
    assert out.term == Pair(Var(0), Var(0))
    assert out.term.split == Two(("1",), ("1",))
    assert recheck(LIN01W, out) == out
    with pytest.raises(SingleSubstUsageError):
        single_subst(LIN01W, m, n, ("1",))
    with pytest.raises(TypeMismatch):
        single_subst(LIN01W, m, check(LIN01W, TyCtx.of(("y", A), ("x", B)), ("0", "1"), Var(0), B), ("1",))


def test_cut():
    d1 = check(LIN01W, TyCtx.of(("x", A)), ("1",), InjL(Var(0)), Sum(A, B))
    d2 = check(LIN01W, TyCtx.of(("y", A)), ("1",), Var(0), A)
    out = cut1(LIN01W, d1, d2)
    assert out.ctx == d2.ctx
    assert out.usage == ("1",)
    assert out.term == InjL(Var(0))
    assert out.ty == Sum(A, B)
    with pytest.raises(TypeMismatch):
        cut1(LIN01W, check(LIN01W, XY, ("1", "0"), Var(1), A), d2)


def generated(sr, seed, count):
    gen = TermGenerator(sr, seed=seed, config=GenConfig(max_ctx=2, term_depth=2))
    checker = Checker(sr)
    for j in gen.judgments(count):
        try:
            demand = checker.synthesize_demand(j.ctx, j.term, j.ty)
        except BoundUsageError:
            continue
        vec = demand.vectors[0]
        yield infer_check(sr, j.ctx, vec, j.term, j.ty)


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_structural_rules_on_generated_derivations(sr):
    seen = 0
    for d in generated(sr, seed=21, count=200):
        n = len(d.ctx)
        flipped = TyCtx(tuple(reversed(d.ctx.entries)))
        out = ren(sr, [n - 1 - j for j in range(n)], flipped, tuple(reversed(d.usage)), d)
        assert recheck(sr, out).ctx == flipped

        wide = weaken(sr, d, TyCtx.of(("extra", A)))
        assert wide.usage == tuple(d.usage) + ("0",)
        assert recheck(sr, wide).term == shift(d.term, 1)

        for smaller in vectors_below(sr, d.usage):
            assert recheck(sr, subuse(sr, smaller, d)).usage == tuple(smaller)
        seen += 1
    assert seen > 0


def test_substituted_derivations_agree_with_inference():
    sr = MOD01BOX
    for d in generated(sr, seed=8, count=100):
        out = sub(sr, identity_env(sr, d.ctx, d.usage), d)
        assert out.conclusion == d.conclusion
        assert synthesize_demand(sr, out.ctx, out.term, out.ty).vectors


def test_cut_turns_a_tensor_into_a_with():
    tensor_to_with = top_meet_iso(MOD01BOX, A, B)[2]
    d2 = check(MOD01BOX, XY, ("1", "1"), Pair(Var(1), Var(0), Two(("1", "0"), ("0", "1"))), Tensor(A, B))
    out = cut1(MOD01BOX, tensor_to_with, d2)
    assert out.ctx == XY
    assert out.usage == ("1", "1")
    assert out.ty == With(A, B)
    assert isinstance(out.term, PairE)
    assert out.term.subterms()[0] == d2.term
    assert recheck(MOD01BOX, out) == out


def test_contracting_environment():
    xy = TyCtx.of(("x", A), ("y", A))
    z = TyCtx.of(("z", A))
    d = check(LIN01W, xy, ("1", "1"), Pair(Var(1), Var(0), Two(("1", "0"), ("0", "1"))), Tensor(A, A))
    act = [var_derivation(LIN01W, z, ("1",), 0)] * 2
    env = env_build(LIN01W, z, ("w",), xy, ("1", "1"), UsageMatrix.from_rows([["1"], ["1"]], 1), act)
    out = sub(LIN01W, env, d)
    assert out.ctx == z
    assert out.usage == ("w",)
    assert out.term == Pair(Var(0), Var(0))
    assert out.term.split == Two(("1",), ("1",))
    assert recheck(LIN01W, out) == out


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_single_substitution_matches_substituting_the_term(sr):
    seen = 0
    for d in generated(sr, seed=33, count=200):
        n = len(d.ctx)
        if n == 0:
            continue
        last = d.ctx.ty_at(n - 1)
        body_ctx = d.ctx.extend(("fresh", last))
        body_usage = tuple(d.usage[:n - 1]) + (sr.zero, d.usage[n - 1])
        body = ren(sr, list(range(n - 1)) + [n], body_ctx, body_usage, d)
        m = var_derivation(sr, d.ctx, UsageAlgebra(sr).basis(n, n - 1), n - 1)

        out = single_subst(sr, m, body, d.usage)
        expected = erase(substitute_top(body.term, m.term))
        assert erase(out.term) == expected == erase(d.term)
        assert recheck(sr, out).usage == tuple(d.usage)
        assert infer_check(sr, d.ctx, d.usage, expected, d.ty).ty == d.ty
        seen += 1
    assert seen > 0


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_renamings_compose(sr):
    seen = 0
    for d in generated(sr, seed=5, count=200):
        n = len(d.ctx)
        if n == 0:
            continue
        flip = [n - 1 - j for j in range(n)]
        flipped = TyCtx(tuple(reversed(d.ctx.entries)))
        wide = flipped.extend(("extra", B))
        u1 = tuple(reversed(d.usage))
        u2 = u1 + (sr.zero,)

        twice = ren(sr, range(n), wide, u2, ren(sr, flip, flipped, u1, d))
        once = ren(sr, flip, wide, u2, d)
        assert twice.conclusion == once.conclusion
        assert annotated_equal(twice.term, once.term)
        seen += 1
    assert seen > 0


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_substituting_variables_agrees_with_renaming(sr):
    la = UsageAlgebra(sr)
    seen = 0
    for d in generated(sr, seed=12, count=200):
        n = len(d.ctx)
        if n == 0:
            continue
        doubled = d.ctx + d.ctx
        usage = la.zeros(n) + tuple(d.usage)
        psi = la.reindex(la.identity(2 * n), [n + j for j in range(n)], range(2 * n))
        act = [var_derivation(sr, doubled, la.basis(2 * n, n + j), n + j) for j in range(n)]
        env = env_build(sr, doubled, usage, d.ctx, d.usage, psi, act)

        out = sub(sr, env, d)
        moved = ren(sr, [n + j for j in range(n)], doubled, usage, d)
        assert out.conclusion == moved.conclusion
        assert annotated_equal(out.term, moved.term)
        seen += 1
    assert seen > 0


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
@pytest.mark.parametrize("kit", [lvar_kit, tm_kit], ids=["lvar", "tm"])
def test_binding_keeps_environments_valid(sr, kit):
    la = UsageAlgebra(sr)
    k = kit(sr)
    extra = TyCtx.of(("a", A), ("b", B))
    for tgt in all_vectors(sr, 2):
        for src in vectors_below(sr, tgt):
            if k.name == "lvar":
                act = [UVar(la.basis(2, j), j, XY) for j in range(2)]
            else:
                act = [var_derivation(sr, XY, la.basis(2, j), j) for j in range(2)]
            env = env_build(sr, XY, src, XY, tgt, la.identity(2), act)
            for width in (1, 2):
                for usage in all_vectors(sr, width):
                    bound = bind(k, env, extra.prefix(width), usage)
                    env_build(sr, bound.src_ctx, bound.src_usage, bound.tgt_ctx, bound.tgt_usage,
                              bound.psi, bound.act)
                    assert bound.src_usage[2:] == bound.tgt_usage[2:] == tuple(usage)
