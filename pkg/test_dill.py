import dataclasses

import pytest

from checker.checker import Checker, check, recheck
from lang.errors import BoundUsageError, DillRuleError, NonDillType, ParseError, PartitionMismatch
from lang.generate import DILL_IMAGE, TermGenerator
from lang.syntax import Bang, Base, ExF, Pair, Tensor, Two, TyCtx, Var, display_names
from logics.dill import (
    DBang, DBase, DILL, DLolli, DTensor, DWith, dill_check, dill_to_lr, dill_ty_of, embed_ty_dill,
    lr_to_dill, parse_dill_sequent, show_dill_script, show_dill_sequent, show_dill_ty,
)
from logics.proofgen import DillProofGenerator
from usage_ops.semiring import LIN01W

A, B = Base("A"), Base("B")
BASES = {"A", "B"}

SWAP = "tensor-I [x | y]\n  lin-ax (x)\n  lin-ax (y)"
SHARE = "tensor-I [ | ]\n  bang-I\n    int-ax (a)\n  bang-I\n    int-ax (a)"
ABSURD = "zero-E [z | x]\n  lin-ax (z)"
UNPACK = "tensor-E {A * B} (a b) [p | ]\n  lin-ax (p)\n  tensor-I [b | a]\n    lin-ax (b)\n    lin-ax (a)"


def test_types():
    assert show_dill_ty(DLolli(DBase("A"), DLolli(DBase("B"), DBase("A")))) == "A -o B -o A"
    assert embed_ty_dill(DBang(DTensor(DBase("A"), DBase("B")))) == Bang("w", Tensor(A, B))
    assert dill_ty_of(Bang("w", A)) == DBang(DBase("A"))
    with pytest.raises(NonDillType):
        dill_ty_of(Bang("1", A))


def test_sequents():
    seq = parse_dill_sequent("a:A | x:A, y:B |- A * B", BASES)
    assert seq.outer == (("a", DBase("A")),)
    assert [x for x, _ in seq.inner] == ["x", "y"]
    assert show_dill_sequent(seq) == "a:A | x:A, y:B |- A * B"
    with pytest.raises(ParseError):
        parse_dill_sequent("| x:A, x:B |- A", BASES)
    with pytest.raises(ParseError):
        parse_dill_sequent("| x:C |- C", BASES)


def test_scripts_check_and_print():
    d = dill_check("| x:A, y:B |- A * B", SWAP, BASES)
    assert d.size() == 3
    assert show_dill_script(d) == SWAP
    assert DILL.recheck(d) == d
    assert dill_check("| |- A -o A", "lolli-I (x)\n  lin-ax (x)", BASES).names == ("x",)
    shared = dill_check("a:A | |- !A * !A", SHARE, BASES)
    assert show_dill_script(shared) == SHARE


def test_rule_errors():
    with pytest.raises(DillRuleError) as err:
        dill_check("| x:A |- !A", "bang-I\n  lin-ax (x)", BASES)
    assert err.value.rule == "bang-I"
    with pytest.raises(DillRuleError):
        dill_check("| x:A, y:B |- A", "lin-ax (x)", BASES)
    with pytest.raises(DillRuleError):
        dill_check("| x:A, y:B |- A * B", "tensor-I [x | ]\n  lin-ax (x)\n  lin-ax (y)", BASES)
    with pytest.raises(DillRuleError) as err:
        dill_check("| x:A, y:B |- A * B", "tensor-I [x | y]\n  lin-ax (x)", BASES)
    assert "premise" in str(err.value)
    with pytest.raises(DillRuleError):
        dill_check("| x:A |- A", "cut", BASES)
    with pytest.raises(DillRuleError) as err:
        dill_check("| x:A, y:B |- A * B", "tensor-I [x | y]\n  lin-ax (y)\n  lin-ax (x)", BASES)
    assert err.value.path == (0,)


def test_translation_to_the_calculus():
    d = dill_to_lr(dill_check("| x:A, y:B |- A * B", SWAP, BASES))
    assert d.ctx == TyCtx.of(("x", A), ("y", B))
    assert d.usage == ("1", "1")
    assert d.term == Pair(Var(1), Var(0))
    assert d.term.split == Two(("1", "0"), ("0", "1"))
    assert recheck(LIN01W, d) == d

    shared = dill_to_lr(dill_check("a:A | |- !A * !A", SHARE, BASES))
    assert shared.usage == ("w",)
    assert shared.ty == Tensor(Bang("w", A), Bang("w", A))

    absurd = dill_to_lr(dill_check("| z:0, x:A |- B", ABSURD, BASES))
    assert isinstance(absurd.term, ExF)
    assert absurd.term.split == Two(("1", "0"), ("0", "1"))


@pytest.mark.parametrize("sequent,script", [
    ("| x:A, y:B |- A * B", SWAP),
    ("a:A | |- !A * !A", SHARE),
    ("| z:0, x:A |- B", ABSURD),
    ("| p:A * B |- B * A", UNPACK),
    ("| |- A -o A", "lolli-I (x)\n  lin-ax (x)"),
    ("| x:A & B |- B", "with-E2 {A & B}\n  lin-ax (x)"),
])
def test_dill_round_trip(sequent, script):
    d = dill_check(sequent, script, BASES)
    assert lr_to_dill(dill_to_lr(d)) == d


def test_reading_back_rejects_foreign_types_and_partitions():
    d = check(LIN01W, TyCtx.of(("x", Bang("1", A))), ("1",), Var(0), Bang("1", A))
    with pytest.raises(NonDillType):
        lr_to_dill(d)
    linear = check(LIN01W, TyCtx.of(("x", A)), ("1",), Var(0), A)
    assert lr_to_dill(linear, partition=["1"]).rule == "lin-ax"
    with pytest.raises(PartitionMismatch):
        lr_to_dill(linear, partition=["w"])


def test_reading_back_normalizes_first():
    dup = check(LIN01W, TyCtx.of(("x", A)), ("w",), Pair(Var(0), Var(0), Two(("1",), ("1",))), Tensor(A, A))
    d = lr_to_dill(dup)
    assert d.sequent.outer == (("x", DBase("A")),)
    assert [c.rule for c in d.children] == ["int-ax", "int-ax"]


def rules_of(d):
    return {d.rule}.union(*(rules_of(c) for c in d.children))


def test_dill_proofs_round_trip():
    seen = set()
    for proof in DillProofGenerator(seed=7).proofs(100):
        d = dill_check(proof.sequent, proof.script)
        lr = dill_to_lr(d)
        assert recheck(LIN01W, lr) == lr
        assert lr.ty == embed_ty_dill(proof.sequent.goal)
        assert lr.usage == ("w",) * len(proof.sequent.outer) + ("1",) * len(proof.sequent.inner)
        back = lr_to_dill(lr)
        assert DILL.recheck(back) == back
        assert back.sequent.same_zones(d.sequent)
        seen |= rules_of(d)
    assert len(seen) >= 8


def test_generated_round_trips():
    config = dataclasses.replace(DILL_IMAGE, max_ctx=2, term_depth=2)
    gen = TermGenerator(LIN01W, seed=13, config=config)
    checker = Checker(LIN01W)
    seen = 0
    for j in gen.judgments(100):
        try:
            demand = checker.synthesize_demand(j.ctx, j.term, j.ty)
        except BoundUsageError:
            continue
        if len(demand.vectors) > 4:
            continue
        d = checker.infer_check(j.ctx, demand.vectors[0], j.term, j.ty)
        dd = lr_to_dill(d)
        assert DILL.recheck(dd) == dd
        back = dill_to_lr(dd)
        assert back.ty == d.ty
        kept = {(x, a, u) for x, a, u in zip(display_names(d.ctx.names), d.ctx.types, d.usage) if u != "0"}
        assert set(zip(back.ctx.names, back.ctx.types, back.usage)) == kept
        assert lr_to_dill(back).sequent.same_zones(dd.sequent)
        seen += 1
    assert seen > 0


def test_with_sequent_goal():
    d = dill_check("| x:A & B |- A", "with-E1 {A & B}\n  lin-ax (x)", BASES)
    assert d.annot == DWith(DBase("A"), DBase("B"))
