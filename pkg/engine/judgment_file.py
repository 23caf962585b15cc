"""
Judgment files.

    semiring lin01w
    base A, B
    -- comment
    judgment x :w A |- (x, x) : A * A
    dill | x:A, y:B |- A * B
      tensor-I [x | y]
        lin-ax (x)
        lin-ax (y)
    pd |v x:A |- A true
      hyp (x)

A stanza starts at column 0 with `judgment`, `dill` or `pd`. Indented lines
after a `judgment` continue it; after `dill`/`pd` they are the proof script.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

from lang.errors import ParseError
from lang.syntax import Term, Ty, TyCtx, display_names, show_term, show_ty
from usage_ops.linalg import UsageCtx
from usage_ops.semiring import SkewSemiring

logger = logging.getLogger(__name__)

STANZA_KINDS = ("judgment", "dill", "pd")


@dataclass(frozen=True)
class Stanza:
    kind: str
    text: str
    script: str = ""
    line: int = 0


@dataclass(frozen=True)
class JudgmentFile:
    semiring: Optional[str]
    bases: Optional[FrozenSet[str]]
    stanzas: Tuple[Stanza, ...]

    def of_kind(self, kind: str) -> List[Stanza]:
        return [s for s in self.stanzas if s.kind == kind]


def parse_judgment_file(text: str) -> JudgmentFile:
    semiring: Optional[str] = None
    bases: Optional[set] = None
    stanzas: List[Stanza] = []
    current: Optional[dict] = None

    def close():
        if current is not None:
            stanzas.append(Stanza(current["kind"], " ".join(current["text"]).strip(),
                                  "\n".join(current["script"]), current["line"]))

    for n, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("--"):
            continue
        if raw[0].isspace():
            if current is None:
                raise ParseError(f"line {n}: indented line outside a stanza")
            if current["kind"] == "judgment":
                current["text"].append(stripped)
            else:
                current["script"].append(raw.rstrip())
            continue
        word, _, rest = stripped.partition(" ")
        if word == "semiring":
            if stanzas or current is not None:
                raise ParseError(f"line {n}: the semiring header must come before any stanza")
            semiring = rest.strip()
            if not semiring:
                raise ParseError(f"line {n}: 'semiring' needs a name")
        elif word == "base":
            names = [b for b in rest.replace(",", " ").split()]
            if not names:
                raise ParseError(f"line {n}: 'base' needs at least one name")
            bases = (bases or set()) | set(names)
        elif word in STANZA_KINDS:
            close()
            if not rest.strip():
                raise ParseError(f"line {n}: '{word}' needs a judgment or sequent on the same line")
            current = {"kind": word, "text": [rest], "script": [], "line": n}
        else:
            raise ParseError(f"line {n}: expected semiring, base, judgment, dill or pd, found '{word}'")
    close()
    for s in stanzas:
        if s.kind != "judgment" and not s.script.strip():
            raise ParseError(f"line {s.line}: {s.kind} stanza has no proof script")
    logger.debug("read %d stanza(s)", len(stanzas))
    return JudgmentFile(semiring, frozenset(bases) if bases is not None else None, tuple(stanzas))


def show_judgment(sr: SkewSemiring, ctx: TyCtx, usage: UsageCtx, term: Term, ty: Ty,
                  annotations: bool = True) -> str:
    names = display_names(ctx.names)
    bindings = ", ".join(f"{x} :{sr.show(u)} {show_ty(a)}" for x, u, a in zip(names, usage, ctx.types))
    return f"{bindings + ' ' if bindings else ''}|- {show_term(term, ctx.names, annotations)} : {show_ty(ty)}"


def _indent(script: str) -> str:
    return "\n".join("  " + line for line in script.splitlines())


def show_judgment_file(semiring: Optional[str], bases: Optional[Sequence[str]], stanzas: Sequence[Stanza]) -> str:
    lines = []
    if semiring:
        lines.append(f"semiring {semiring}")
    if bases:
        lines.append("base " + ", ".join(sorted(bases)))
    for s in stanzas:
        lines.append(f"{s.kind} {s.text}")
        if s.script:
            lines.append(_indent(s.script))
    return "\n".join(lines) + "\n"


def show_derivation(sr: SkewSemiring, d, indent: int = 0) -> str:
    """One line per node, children indented under their conclusion."""
    line = f"{'  ' * indent}[{d.rule.value}] {show_judgment(sr, d.ctx, d.usage, d.term, d.ty)}"
    return "\n".join([line] + [show_derivation(sr, c, indent + 1) for c in d.children])
