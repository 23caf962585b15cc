"""
Command orchestration shared by the CLI and the HTTP API.

Every command returns a result dict. Input problems (ParseError,
UnknownSemiring) propagate so the caller can tell them apart from
semantic failures, which are folded into per-stanza results as
{"success": False, "error": ..., "kind": ...}.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from checker.checker import bottom_up_violations, check, infer_check, to_bottom_up
from checker.derivation import Derivation
from config import Config
from engine.codec import RenameModel, SubstModel, ctx_from_models, load_aux, results_dump, validate_dump
from engine.judgment_file import JudgmentFile, Stanza, parse_judgment_file, show_judgment, show_judgment_file
from lang.errors import LrError, ParseError
from lang.parser import parse_judgment, parse_term
from lang.syntax import Term, Ty, TyCtx
from logics.dill import dill_check, dill_to_lr, lr_to_dill, show_dill_script, show_dill_sequent
from logics.pd import lr_to_pd, pd_check, pd_to_lr, show_pd_script, show_pd_sequent
from logics.scripts import ZonedDerivation
from traversal.env import env_build
from traversal.traverse import cut1, ren, sub
from usage_ops.linalg import UsageCtx, UsageMatrix
from usage_ops.semiring import LIN01W, MOD01BOX, SEMIRINGS, SkewSemiring, get_semiring, law_audit

logger = logging.getLogger(__name__)

MODES = ("infer", "annotated")
TRANSFORMS = ("bottomup", "rename", "subst", "cut")
DIRECTIONS = ("dill2lr", "lr2dill", "pd2lr", "lr2pd")

T = TypeVar("T")


@dataclass(frozen=True)
class ParsedJudgment:
    stanza: Stanza
    ctx: TyCtx
    usage: UsageCtx
    term: Term
    ty: Ty


def failure(e: LrError) -> Dict[str, Any]:
    return {"success": False, "error": str(e), "kind": type(e).__name__}


class Workbench:
    """Runs checker, traversal and translation commands over judgment files."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or Config.WORKERS

    # Plumbing

    def _map(self, fn: Callable[[T], Dict[str, Any]], items: Sequence[T]) -> List[Dict[str, Any]]:
        """Apply fn to each item, in parallel when configured; results keep input order."""
        if self.workers <= 1 or len(items) <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def _guard(self, label: str, fn: Callable[[], Dict[str, Any]], stanza: str = "judgment") -> Dict[str, Any]:
        try:
            result = {"success": True, "judgment": label, "stanza": stanza, **fn()}
        except ParseError:
            raise
        except LrError as e:
            result = {"judgment": label, "stanza": stanza, **failure(e)}
        logger.info("%s: %s", label, "ok" if result["success"] else result["kind"])
        return result

    def load(self, text: str, semiring: Optional[str] = None) -> tuple:
        jf = parse_judgment_file(text)
        sr = get_semiring(semiring or jf.semiring or Config.DEFAULT_SEMIRING)
        return jf, sr

    def _parse(self, jf: JudgmentFile, sr: SkewSemiring) -> List[ParsedJudgment]:
        out = []
        for s in jf.of_kind("judgment"):
            try:
                ctx, usage, term, ty = parse_judgment(s.text, sr, jf.bases)
            except ParseError as e:
                raise ParseError(f"line {s.line}: {e}")
            out.append(ParsedJudgment(s, ctx, usage, term, ty))
        return out

    def _derive(self, sr: SkewSemiring, j: ParsedJudgment, mode: str) -> Derivation:
        if mode == "annotated":
            return check(sr, j.ctx, j.usage, j.term, j.ty)
        return infer_check(sr, j.ctx, j.usage, j.term, j.ty)

    def _summary(self, sr: SkewSemiring, results: List[Dict[str, Any]], **extra) -> Dict[str, Any]:
        return {"success": all(r["success"] for r in results), "semiring": sr.name,
                "results": results, **extra}

    # Commands

    def check(self, text: str, mode: str = "infer", semiring: Optional[str] = None) -> Dict[str, Any]:
        """Check every stanza: judgments with the checker, DILL and PD stanzas against their rules."""
        if mode not in MODES:
            raise ParseError(f"unknown mode '{mode}' (choose from {', '.join(MODES)})")
        jf, sr = self.load(text, semiring)
        judgments = self._parse(jf, sr)
        logger.info("checking %d judgment(s) over %s (%s)", len(judgments), sr.name, mode)

        def run(j: ParsedJudgment) -> Dict[str, Any]:
            return self._guard(j.stanza.text, lambda: {"derivation": self._derive(sr, j, mode)})

        results = self._map(run, judgments)
        results += [self._guard(s.text, lambda s=s: {"proof": self._proof(jf, s)}, s.kind)
                    for s in jf.stanzas if s.kind != "judgment"]
        return self._summary(sr, results)

    def _proof(self, jf: JudgmentFile, s: Stanza) -> ZonedDerivation:
        checker = dill_check if s.kind == "dill" else pd_check
        return checker(s.text, s.script, jf.bases)

    def transform(self, text: str, op: str, aux: Optional[str] = None, mode: str = "infer",
                  semiring: Optional[str] = None) -> Dict[str, Any]:
        if op not in TRANSFORMS:
            raise ParseError(f"unknown transform '{op}' (choose from {', '.join(TRANSFORMS)})")
        jf, sr = self.load(text, semiring)
        judgments = self._parse(jf, sr)

        if op == "cut":
            if len(judgments) != 2:
                raise ParseError(f"cut reads exactly two judgments, the file has {len(judgments)}")
            d1, d2 = judgments
            results = [self._guard(f"cut {d1.stanza.text} ; {d2.stanza.text}", lambda: {
                "derivation": cut1(sr, self._derive(sr, d1, mode), self._derive(sr, d2, mode))})]
        elif op == "bottomup":
            def run(j: ParsedJudgment) -> Dict[str, Any]:
                def go():
                    d = to_bottom_up(sr, self._derive(sr, j, mode))
                    return {"derivation": d, "violations": bottom_up_violations(sr, d)}
                return self._guard(j.stanza.text, go)
            results = self._map(run, judgments)
        else:
            if aux is None:
                raise ParseError(f"{op} needs an auxiliary file")
            step = self._renamer(sr, jf, aux) if op == "rename" else self._substituter(sr, jf, aux)
            results = self._map(
                lambda j: self._guard(j.stanza.text, lambda: {"derivation": step(self._derive(sr, j, mode))}),
                judgments)
        return self._summary(sr, results, output=self._judgment_output(sr, jf, results))

    def _renamer(self, sr: SkewSemiring, jf: JudgmentFile, aux: str) -> Callable[[Derivation], Derivation]:
        spec = load_aux(aux, RenameModel)
        ctx, usage = ctx_from_models(sr, spec.ctx, jf.bases)
        return lambda d: ren(sr, spec.map, ctx, usage, d)

    def _substituter(self, sr: SkewSemiring, jf: JudgmentFile, aux: str) -> Callable[[Derivation], Derivation]:
        spec = load_aux(aux, SubstModel)
        ctx, usage = ctx_from_models(sr, spec.ctx, jf.bases)
        rows = [tuple(sr.parse(u) for u in row) for row in spec.psi]
        terms = [parse_term(t, sr, ctx.names, jf.bases) for t in spec.terms]

        def step(d: Derivation) -> Derivation:
            if len(rows) != len(d.ctx) or len(terms) != len(d.ctx):
                raise ParseError(f"subst file gives {len(rows)} row(s) and {len(terms)} term(s) "
                                 f"for a context of length {len(d.ctx)}")
            act = [infer_check(sr, ctx, row, t, a) for row, t, a in zip(rows, terms, d.ctx.types)]
            psi = UsageMatrix.from_rows(rows, len(ctx))
            return sub(sr, env_build(sr, ctx, usage, d.ctx, d.usage, psi, act), d)

        return step

    def _judgment_output(self, sr: SkewSemiring, jf: JudgmentFile, results: List[Dict[str, Any]]) -> str:
        stanzas = [Stanza("judgment", show_judgment(sr, d.ctx, d.usage, d.term, d.ty))
                   for d in (r["derivation"] for r in results if r["success"])]
        return show_judgment_file(sr.name, jf.bases, stanzas)

    def translate(self, text: str, direction: str) -> Dict[str, Any]:
        if direction not in DIRECTIONS:
            raise ParseError(f"unknown direction '{direction}' (choose from {', '.join(DIRECTIONS)})")
        jf = parse_judgment_file(text)
        sr = LIN01W if "dill" in direction else MOD01BOX
        if direction.startswith("lr2"):
            if jf.semiring is not None and get_semiring(jf.semiring) is not sr:
                raise ParseError(f"{direction} reads {sr.name} judgments, the file declares {jf.semiring}")
            back = lr_to_dill if direction == "lr2dill" else lr_to_pd
            kind = direction[3:]
            show_seq = show_dill_sequent if kind == "dill" else show_pd_sequent
            show_scr = show_dill_script if kind == "dill" else show_pd_script

            def run(j: ParsedJudgment) -> Dict[str, Any]:
                def go():
                    proof = back(infer_check(sr, j.ctx, j.usage, j.term, j.ty))
                    return {"proof": proof, "output_stanza": Stanza(kind, show_seq(proof.sequent), show_scr(proof))}
                return self._guard(j.stanza.text, go)

            results = self._map(run, self._parse(jf, sr))
            output = show_judgment_file(None, jf.bases, [r["output_stanza"] for r in results if r["success"]])
        else:
            kind = direction[:-3]
            forward = dill_to_lr if kind == "dill" else pd_to_lr

            def run(s: Stanza) -> Dict[str, Any]:
                return self._guard(s.text, lambda: {"derivation": forward(self._proof(jf, s))}, kind)

            results = self._map(run, jf.of_kind(kind))
            output = self._judgment_output(sr, jf, results)
        return self._summary(sr, results, output=output)

    def laws(self, semiring: str, budget: Optional[int] = None) -> Dict[str, Any]:
        sr = get_semiring(semiring)
        violations = law_audit(sr, budget)
        return {"success": not violations, "semiring": sr.name,
                "violations": [v.describe(sr) for v in violations]}

    def validate(self, text: str) -> Dict[str, Any]:
        try:
            return validate_dump(text)
        except ParseError:
            raise
        except LrError as e:
            return failure(e)

    def dump(self, result: Dict[str, Any]) -> str:
        return results_dump(get_semiring(result["semiring"]),
                            [r for r in result["results"] if r["stanza"] == "judgment"])

    def status(self) -> Dict[str, Any]:
        return {"default_semiring": Config.DEFAULT_SEMIRING,
                "semirings": {name: sr.description for name, sr in SEMIRINGS.items()}}


workbench = Workbench()
