"""
Derivation JSON.

    {rule, conclusion: {ctx: [{name, usage, type}], term, type},
     facts: [{kind, lhs, rhs}], children: [...]}

Usages are their literal strings; there are no floats anywhere, so a dump
re-ingests and re-dumps byte for byte.
"""

import json
import logging
from typing import Any, Dict, List, Optional, Set, Tuple, Type, TypeVar

from pydantic import BaseModel

from checker.checker import check
from checker.derivation import Derivation, Fact
from lang.errors import ParseError
from lang.parser import parse_term, parse_type
from lang.syntax import TyCtx, display_names, show_term, show_ty
from usage_ops.semiring import SkewSemiring, get_semiring

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


class CtxEntryModel(BaseModel):
    name: str
    usage: str
    type: str


class ConclusionModel(BaseModel):
    ctx: List[CtxEntryModel]
    term: str
    type: str


class FactModel(BaseModel):
    kind: str
    lhs: List[List[str]]
    rhs: List[str]


class DerivationModel(BaseModel):
    rule: str
    conclusion: ConclusionModel
    facts: List[FactModel]
    children: List["DerivationModel"]


DerivationModel.model_rebuild()


class DumpEntryModel(BaseModel):
    judgment: str
    success: bool
    derivation: Optional[DerivationModel] = None
    error: Optional[str] = None
    kind: Optional[str] = None


class DumpModel(BaseModel):
    semiring: str
    entries: List[DumpEntryModel]


class RenameModel(BaseModel):
    """`transform rename`: the target context and, per source position, its target position."""

    ctx: List[CtxEntryModel]
    map: List[int]


class SubstModel(BaseModel):
    """`transform subst`: the new context, one matrix row and one term per replaced variable."""

    ctx: List[CtxEntryModel]
    psi: List[List[str]]
    terms: List[str]


def ctx_from_models(sr: SkewSemiring, entries: List[CtxEntryModel],
                    bases: Optional[Set[str]] = None) -> Tuple[TyCtx, Tuple]:
    ctx = TyCtx(tuple((e.name, parse_type(e.type, sr, bases)) for e in entries))
    return ctx, tuple(sr.parse(e.usage) for e in entries)


def load_aux(text: str, model: Type[M]) -> M:
    try:
        return model.model_validate(json.loads(text))
    except (ValueError, TypeError) as e:
        raise ParseError(f"cannot read {model.__name__.replace('Model', '').lower()} file: {e}")


def _vec(sr: SkewSemiring, v) -> List[str]:
    return [sr.show(u) for u in v]


def fact_model(sr: SkewSemiring, f: Fact) -> FactModel:
    return FactModel(kind=f.kind, lhs=[_vec(sr, v) for v in f.lhs], rhs=_vec(sr, f.rhs))


def derivation_model(sr: SkewSemiring, d: Derivation) -> DerivationModel:
    names = display_names(d.ctx.names)
    ctx = [CtxEntryModel(name=x, usage=sr.show(u), type=show_ty(a))
           for x, u, a in zip(names, d.usage, d.ctx.types)]
    return DerivationModel(
        rule=d.rule.value,
        conclusion=ConclusionModel(ctx=ctx, term=show_term(d.term, d.ctx.names), type=show_ty(d.ty)),
        facts=[fact_model(sr, f) for f in d.facts],
        children=[derivation_model(sr, c) for c in d.children],
    )


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), indent=2, ensure_ascii=False) + "\n"


def derivation_from_model(sr: SkewSemiring, m: DerivationModel, bases: Optional[Set[str]] = None) -> Derivation:
    """Re-check the root conclusion of a dumped derivation with its recorded annotations."""
    c = m.conclusion
    ctx, usage = ctx_from_models(sr, c.ctx, bases)
    term = parse_term(c.term, sr, ctx.names, bases)
    return check(sr, ctx, usage, term, parse_type(c.type, sr, bases))


def load_dump(text: str) -> DumpModel:
    try:
        return DumpModel.model_validate(json.loads(text))
    except (ValueError, TypeError) as e:
        raise ParseError(f"not a derivation dump: {e}")


def validate_dump(text: str) -> Dict[str, Any]:
    """Re-check every dumped derivation and compare the re-dump byte for byte."""
    dump = load_dump(text)
    sr = get_semiring(dump.semiring)
    entries = []
    for entry in dump.entries:
        if entry.derivation is None:
            entries.append(entry)
            continue
        d = derivation_from_model(sr, entry.derivation)
        entries.append(entry.model_copy(update={"derivation": derivation_model(sr, d)}))
    again = dump_json(DumpModel(semiring=dump.semiring, entries=entries))
    identical = again == text
    logger.info("validated %d derivation(s); byte-identical: %s",
                sum(e.derivation is not None for e in entries), identical)
    return {"success": identical, "entries": len(entries), "identical": identical,
            "error": None if identical else "re-dump differs from the input"}


def results_dump(sr: SkewSemiring, results: List[Dict[str, Any]]) -> str:
    """The `--json` form of a workbench result list."""
    entries = [
        DumpEntryModel(
            judgment=r["judgment"], success=r["success"],
            derivation=derivation_model(sr, r["derivation"]) if r.get("derivation") is not None else None,
            error=r.get("error"), kind=r.get("kind"),
        )
        for r in results
    ]
    return dump_json(DumpModel(semiring=sr.name, entries=entries))
