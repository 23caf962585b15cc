import pytest

from lang.errors import ConfigError, NoMeet, ParseError, UnknownSemiring
from usage_ops.semiring import (
    LAWS, LIN01W, MOD01BOX, NAT, SEMIRINGS, TRIVIAL, get_semiring, law_audit, meet_or_fail,
)


@pytest.mark.parametrize("name", ["trivial", "lin01w", "mod01box"])
def test_finite_instances_are_lawful(name):
    assert law_audit(get_semiring(name)) == []


def test_nat_is_lawful_on_small_and_sampled_values():
    assert law_audit(NAT, budget=1000, bound=4, seed=7) == []


def test_add_one_one_is_one_is_still_lawful():
    lattice = LIN01W.corrupted("lin01w-max", add={("1", "1"): "1"})
    assert law_audit(lattice) == []


def test_corrupted_addition_is_reported():
    broken = LIN01W.corrupted("lin01w-broken", add={("1", "1"): "0"})
    report = law_audit(broken)
    laws = {v.law for v in report}
    assert "distrib-right" in laws
    assert any(v.law == "distrib-right" and v.values == ("1", "1", "w") for v in report)
    assert report[0].describe(broken).startswith(report[0].law + ": ")


def test_law_audit_rejects_empty_budget():
    with pytest.raises(ConfigError):
        law_audit(NAT, budget=0)


def test_every_law_is_named_once():
    names = [law for law, _, _ in LAWS]
    assert len(names) == len(set(names))


def test_lookup():
    assert get_semiring("LIN01W") is LIN01W
    assert set(SEMIRINGS) == {"trivial", "lin01w", "mod01box", "nat"}
    with pytest.raises(UnknownSemiring):
        get_semiring("tropical")


def test_lin01w_tables():
    assert LIN01W.add("1", "1") == "w"
    assert LIN01W.add("0", "1") == "1"
    assert LIN01W.mul("w", "0") == "0"
    assert LIN01W.mul("1", "w") == "w"
    assert LIN01W.leq("w", "0") and LIN01W.leq("w", "1")
    assert not LIN01W.leq("1", "0") and not LIN01W.leq("0", "1")
    assert LIN01W.top() is None
    assert sorted(LIN01W.maximal_elements()) == ["0", "1"]


def test_mod01box_tables():
    for a in "01#":
        for b in "01#":
            assert MOD01BOX.add(a, b) == MOD01BOX.meet(a, b)
        assert MOD01BOX.leq(a, "0")
    assert MOD01BOX.mul("#", "1") == "#"
    assert MOD01BOX.mul("#", "0") == "0"
    assert MOD01BOX.top() == "0"


def test_meets():
    assert meet_or_fail(LIN01W, "0", "1") == "w"
    assert meet_or_fail(MOD01BOX, "1", "#") == "#"
    assert meet_or_fail(NAT, 3, 3) == 3
    with pytest.raises(NoMeet):
        meet_or_fail(NAT, 3, 4)


def test_trivial_has_one_element():
    assert TRIVIAL.elements() == ["*"]
    assert TRIVIAL.zero == TRIVIAL.one == "*"


def test_parse_usages():
    assert LIN01W.parse(" w ") == "w"
    assert NAT.parse("12") == 12
    with pytest.raises(ParseError):
        LIN01W.parse("#")
    with pytest.raises(ParseError):
        NAT.parse("-1")


def test_bottom_up_tables():
    assert LIN01W.decompose_add("1") == [("0", "1"), ("1", "0")]
    assert LIN01W.decompose_add("w") == [("w", "w")]
    assert MOD01BOX.decompose_add("#") == [("#", "#")]
    assert MOD01BOX.decompose_mul("#", "#") == ["#"]
    assert MOD01BOX.decompose_mul("#", "1") == []
    assert LIN01W.is_bottom_up_mul("1", "w", "w")
    assert not LIN01W.is_bottom_up_add("1", "1", "w")
    assert NAT.decompose_add(2) == [(0, 2), (1, 1), (2, 0)]
    assert NAT.decompose_mul(3, 6) == [2]
    assert NAT.decompose_mul(0, 1) == []
