import itertools
import logging
from dataclasses import replace

import pytest

from checker.checker import (
    Checker, bottom_up_violations, check, infer_check, recheck, synthesize_demand, to_bottom_up,
)
from checker.derivation import Fact, RuleTag
from checker.oracle import acceptable_usages
from lang.errors import BoundUsageError, LrError, MissingAnnotation, NoMeet, TypeMismatch, UsageMismatch
from lang.generate import GenConfig, TermGenerator, enumerate_terms
from lang.parser import parse_judgment
from lang.syntax import (
    Bang, BangI, Base, Eat, ExF, Fun, Lam, One, Pair, PairE, Sum, Tensor, Top, Two, TyCtx, UnitI, Var, With,
    WithI, Zero, ZeroSplit,
    annotated_equal,
)
from usage_ops.linalg import UsageAlgebra, all_vectors
from usage_ops.semiring import LIN01W, MOD01BOX, NAT, TRIVIAL

A, B = Base("A"), Base("B")
X = TyCtx.of(("x", A))
DUP = Pair(Var(0), Var(0))


def judgment(sr, text):
    return parse_judgment(text, sr, {"A", "B"})


# Checking annotated terms

def test_duplication_discharges_w_below_one_plus_one():
    d = check(LIN01W, X, ("w",), Pair(Var(0), Var(0), Two(("1",), ("1",))), Tensor(A, A))
    assert d.rule == RuleTag.TENSOR_I
    assert d.facts == (Fact("add", (("1",), ("1",)), ("w",)), Fact("leq", (("w",),), ("w",)))
    assert [c.usage for c in d.children] == [("1",), ("1",)]
    assert d.size() == 3


def test_no_split_makes_linear_duplication_check():
    for p, q in itertools.product(LIN01W.elements(), repeat=2):
        with pytest.raises(UsageMismatch):
            check(LIN01W, X, ("1",), Pair(Var(0), Var(0), Two((p,), (q,))), Tensor(A, A))


def test_tensor_to_with_under_mod01box():
    ctx = TyCtx.of(("x", Tensor(A, B)))
    term = PairE(Var(0), WithI(Var(1), Var(0)), With(A, B), Two(("1",), ("0",)), names=("a", "b"))
    d = check(MOD01BOX, ctx, ("1",), term, With(A, B))
    assert d.facts[0] == Fact("add", (("1",), ("0",)), ("1",))
    body = d.children[1]
    assert body.usage == ("0", "1", "1")
    leaves = [c.facts[0] for c in body.children]
    assert leaves == [Fact("leq", (("0", "1", "1"),), ("0", "1", "0")),
                      Fact("leq", (("0", "1", "1"),), ("0", "0", "1"))]


def test_missing_split_and_type_errors():
    with pytest.raises(MissingAnnotation):
        check(LIN01W, X, ("w",), DUP, Tensor(A, A))
    with pytest.raises(TypeMismatch):
        check(LIN01W, X, ("1",), Var(0), B)
    with pytest.raises(LrError) as err:
        check(LIN01W, X, ("1", "1"), Var(0), A)
    assert err.value.rule == "var"


def test_unit_discards_the_whole_context():
    d = check(LIN01W, X, ("w",), UnitI(ZeroSplit()), One())
    assert d.rule == RuleTag.UNIT_I
    assert d.facts == (Fact("leq", (("w",),), ("0",)),)
    with pytest.raises(UsageMismatch):
        check(LIN01W, X, ("1",), UnitI(ZeroSplit()), One())


def test_errors_carry_the_failing_node():
    term = Pair(Var(0), Pair(Var(0), Var(0), Two(("1",), ("1",))), Two(("w",), ("1",)))
    with pytest.raises(UsageMismatch) as err:
        check(LIN01W, X, ("1",), term, Tensor(A, Tensor(A, A)))
    assert err.value.path == (1,)
    assert err.value.rule == RuleTag.TENSOR_I.value


def test_recheck_rejects_tampered_facts():
    d = check(LIN01W, X, ("w",), Pair(Var(0), Var(0), Two(("1",), ("1",))), Tensor(A, A))
    assert recheck(LIN01W, d) == d
    with pytest.raises(LrError):
        recheck(LIN01W, replace(d, facts=()))


# Demand synthesis

def test_demands():
    assert synthesize_demand(LIN01W, X, DUP, Tensor(A, A)).vector == ("w",)
    assert synthesize_demand(LIN01W, TyCtx(), Lam(A, Var(0)), Fun(A, A)).vector == ()
    assert synthesize_demand(MOD01BOX, X, BangI("#", Var(0)), Bang("#", A)).vector == ("#",)
    assert synthesize_demand(NAT, X, DUP, Tensor(A, A)).vector == (2,)


def test_eat_demands_every_maximal_vector():
    demand = synthesize_demand(LIN01W, TyCtx.of(("x", A), ("y", B)), Eat(), Top())
    assert sorted(demand.vectors) == sorted(itertools.product(["0", "1"], repeat=2))
    with pytest.raises(NoMeet):
        demand.vector
    assert synthesize_demand(MOD01BOX, X, Eat(), Top()).vector == ("0",)
    with pytest.raises(NoMeet):
        synthesize_demand(NAT, X, Eat(), Top())


def test_absurd_under_nat_warns(caplog):
    ctx = TyCtx.of(("z", Zero()), ("x", A))
    with caplog.at_level(logging.WARNING, logger="checker.checker"):
        demand = synthesize_demand(NAT, ctx, ExF(Var(1), A), A)
    assert demand.vector == (1, 0)
    assert any("absurd" in r.getMessage() for r in caplog.records)


def test_infer_check():
    d = infer_check(LIN01W, X, ("w",), DUP, Tensor(A, A))
    assert d.term.split == Two(("1",), ("1",))
    with pytest.raises(UsageMismatch) as err:
        infer_check(LIN01W, X, ("1",), DUP, Tensor(A, A))
    assert err.value.coordinate == 0
    assert infer_check(NAT, X, (2,), DUP, Tensor(A, A)).usage == (2,)
    for r in [(1,), (3,)]:
        with pytest.raises(UsageMismatch):
            infer_check(NAT, X, r, DUP, Tensor(A, A))


def test_linear_binder_cannot_be_duplicated():
    with pytest.raises(BoundUsageError):
        infer_check(LIN01W, TyCtx(), (), Lam(A, DUP), Fun(A, Tensor(A, A)))


def test_motives_come_from_the_expected_type():
    ctx, usage, term, ty = judgment(LIN01W, "p :1 A * B |- let (a, b) = p in (b, a) : B * A")
    assert term.ty is None
    d = infer_check(LIN01W, ctx, usage, term, ty)
    assert d.term.ty == ty


def test_trivial_semiring_accepts_every_well_typed_term():
    gen = TermGenerator(TRIVIAL, seed=3)
    for j in gen.judgments(200):
        usage = ("*",) * len(j.ctx)
        d = infer_check(TRIVIAL, j.ctx, usage, j.term, j.ty)
        assert d.conclusion[2] == j.term


# Agreement with brute-force enumeration

SMALL = GenConfig(type_depth=1, term_depth=2, max_ctx=2, seed_bases=False, zero_vars=True)


def binder_depth(t):
    kids = [binder_depth(k) + b for k, b in zip(t.subterms(), t._binds)]
    return max(kids, default=0)


def small_judgments(sr, seed, count):
    gen = TermGenerator(sr, seed=seed, config=SMALL)
    pool = (j for j in gen.judgments(10 * count) if len(j.ctx) + binder_depth(j.term) <= 4)
    return itertools.islice(pool, count)


def assert_inference_matches_search(sr, ctx, term, ty):
    la = UsageAlgebra(sr)
    accepted = acceptable_usages(sr, ctx, term, ty)
    for r in all_vectors(sr, len(ctx)):
        try:
            d = infer_check(sr, ctx, r, term, ty)
        except (UsageMismatch, BoundUsageError):
            assert r not in accepted
        else:
            assert r in accepted
            assert recheck(sr, d).usage == tuple(r)
    try:
        demand = synthesize_demand(sr, ctx, term, ty)
    except BoundUsageError:
        assert accepted == frozenset()
        return
    assert all(v in accepted for v in demand.vectors)
    assert all(any(la.leq(r, v) for v in demand.vectors) for r in accepted)


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_inference_agrees_with_exhaustive_split_search(sr):
    checked = 0
    for j in small_judgments(sr, seed=11, count=500):
        assert_inference_matches_search(sr, j.ctx, j.term, j.ty)
        checked += 1
    assert checked == 500


def small_problems(sr):
    bang = Bang({"lin01w": "w", "mod01box": "#"}[sr.name], A)
    return [
        (TyCtx.of(("x", A), ("y", A)), Tensor(A, A)),
        (X, With(A, A)),
        (X, Fun(A, Tensor(A, A))),
        (TyCtx(), Fun(A, Fun(A, Tensor(A, A)))),
        (TyCtx.of(("p", Tensor(A, B))), Tensor(B, A)),
        (TyCtx.of(("s", Sum(A, B))), Sum(B, A)),
        (TyCtx.of(("u", One()), ("x", A)), A),
        (TyCtx.of(("f", Fun(A, B)), ("x", A)), B),
        (TyCtx.of(("b", bang)), Tensor(A, A)),
        (TyCtx.of(("z", Zero())), Fun(A, B)),
        (TyCtx(), With(One(), Top())),
    ]


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_inference_agrees_with_search_on_every_small_term(sr):
    for ctx, ty in small_problems(sr):
        terms = list(enumerate_terms(ctx, ty, 3))
        assert terms
        for term in terms:
            assert_inference_matches_search(sr, ctx, term, ty)


# Bottom-up normal form

def test_bottom_up_duplication():
    d = check(LIN01W, X, ("w",), Pair(Var(0), Var(0), Two(("1",), ("1",))), Tensor(A, A))
    bu = to_bottom_up(LIN01W, d)
    assert bu.term.split == Two(("w",), ("w",))
    assert [c.usage for c in bu.children] == [("w",), ("w",)]
    assert [c.facts[0] for c in bu.children] == [Fact("leq", (("w",),), ("1",))] * 2
    assert bottom_up_violations(LIN01W, d) != []
    assert bottom_up_violations(LIN01W, bu) == []
    assert bu.conclusion == d.conclusion


def test_bottom_up_pushes_weakening_to_the_leaves():
    ctx, usage, term, ty = judgment(MOD01BOX, "x :1 A, y :1 B |- (x, y) : A * B")
    d = infer_check(MOD01BOX, ctx, usage, term, ty)
    bu = to_bottom_up(MOD01BOX, d)
    assert bu.term.split == Two(("1", "1"), ("1", "1"))
    assert all(f.reflexive for f in bu.facts if f.kind == "leq")
    assert not bu.children[0].facts[0].reflexive
    assert bottom_up_violations(MOD01BOX, bu) == []


@pytest.mark.parametrize("sr", [LIN01W, MOD01BOX], ids=lambda s: s.name)
def test_bottom_up_on_generated_derivations(sr):
    gen = TermGenerator(sr, seed=5, config=GenConfig(max_ctx=2, term_depth=2))
    checker = Checker(sr)
    normalized = 0
    for j in gen.judgments(200):
        if len(j.ctx) + binder_depth(j.term) > 4:
            continue
        try:
            demand = checker.synthesize_demand(j.ctx, j.term, j.ty)
        except BoundUsageError:
            continue
        for vec in demand.vectors[:2]:
            d = infer_check(sr, j.ctx, vec, j.term, j.ty)
            bu = checker.to_bottom_up(d)
            assert bu.conclusion == d.conclusion
            assert checker.bottom_up_violations(bu) == []
            assert checker.recheck(bu) == bu
            again = checker.to_bottom_up(bu)
            assert annotated_equal(again.term, bu.term)
            normalized += 1
    assert normalized > 0
