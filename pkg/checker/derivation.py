from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple

from lang.syntax import (
    App, BangE, BangI, Case, Eat, ExF, InjL, InjR, Lam, Pair, PairE, ProjL, ProjR, Term, Ty,
    TyCtx, UnitE, UnitI, Var, WithI, erase,
)
from usage_ops.linalg import UsageCtx


class RuleTag(str, Enum):
    VAR = "var"
    LAM = "-o-I"
    APP = "-o-E"
    UNIT_I = "I-I"
    UNIT_E = "I-E"
    TENSOR_I = "*-I"
    TENSOR_E = "*-E"
    ZERO_E = "0-E"
    SUM_IL = "+-Il"
    SUM_IR = "+-Ir"
    SUM_E = "+-E"
    TOP_I = "Top-I"
    WITH_I = "&-I"
    WITH_EL = "&-El"
    WITH_ER = "&-Er"
    BANG_I = "!-I"
    BANG_E = "!-E"


RULE_OF = {
    Var: RuleTag.VAR, Lam: RuleTag.LAM, App: RuleTag.APP, UnitI: RuleTag.UNIT_I,
    UnitE: RuleTag.UNIT_E, Pair: RuleTag.TENSOR_I, PairE: RuleTag.TENSOR_E, ExF: RuleTag.ZERO_E,
    InjL: RuleTag.SUM_IL, InjR: RuleTag.SUM_IR, Case: RuleTag.SUM_E, Eat: RuleTag.TOP_I,
    WithI: RuleTag.WITH_I, ProjL: RuleTag.WITH_EL, ProjR: RuleTag.WITH_ER, BangI: RuleTag.BANG_I,
    BangE: RuleTag.BANG_E,
}


def rule_for(term: Term) -> RuleTag:
    return RULE_OF[type(term)]


@dataclass(frozen=True)
class Fact:
    """One usage fact discharged at a node.

    kind "leq": lhs = (R,), rhs = S, meaning R ⊴ S.
    kind "add": lhs = (P, Q), rhs = P + Q.
    kind "mul": lhs = ((r,), P), rhs = r·P.
    """

    kind: str
    lhs: Tuple[UsageCtx, ...]
    rhs: UsageCtx

    @property
    def reflexive(self) -> bool:
        return self.kind == "leq" and tuple(self.lhs[0]) == tuple(self.rhs)


@dataclass(frozen=True)
class Derivation:
    rule: RuleTag
    ctx: TyCtx
    usage: UsageCtx
    term: Term
    ty: Ty
    children: Tuple["Derivation", ...] = ()
    facts: Tuple[Fact, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def conclusion(self) -> Tuple[TyCtx, UsageCtx, Term, Ty]:
        """The judgment with the term erased; what traversals and normalization preserve."""
        return self.ctx, self.usage, erase(self.term), self.ty

    def walk(self, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], "Derivation"]]:
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(path + (i,))

    def size(self) -> int:
        return sum(1 for _ in self.walk())
