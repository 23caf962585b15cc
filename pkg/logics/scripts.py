"""
Proof scripts and two-zone sequents shared by DILL and PD.

A script is an indented tree, one rule per line:

    RULE {TYPE}? (names)? [left names | right names]?

Children are the following lines indented deeper than their parent.
`{TYPE}` names a premise type the conclusion does not determine, `(names)`
gives binder or axiom variable names, `[... | ...]` splits the linear zone
at binary rules.
"""

import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Set, Tuple

from lang.errors import LrError, ParseError
from lang.parser import Parser, TypeGrammar

logger = logging.getLogger(__name__)

Zone = Tuple[Tuple[str, object], ...]

_LINE_RE = re.compile(r"""
    ^(?P<rule>[^\s{(\[]+)
    \s*(?:\{(?P<ty>[^}]*)\})?
    \s*(?:\((?P<names>[^)]*)\))?
    \s*(?:\[(?P<split>[^\]]*)\])?
    \s*$
""", re.VERBOSE)


@dataclass(frozen=True)
class Step:
    """One script line: the rule and the data the rule cannot infer."""

    rule: str
    annot: Optional[object] = None
    names: Tuple[str, ...] = ()
    split: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    children: Tuple["Step", ...] = ()


@dataclass(frozen=True)
class ZonedSequent:
    """outer ; inner ⊢ goal. DILL: intuitionistic ; linear. PD: valid ; true."""

    outer: Zone
    inner: Zone
    goal: object

    def names(self) -> Set[str]:
        return {x for x, _ in self.outer} | {x for x, _ in self.inner}

    def same_zones(self, other: "ZonedSequent") -> bool:
        return (set(self.outer) == set(other.outer) and set(self.inner) == set(other.inner)
                and self.goal == other.goal)


@dataclass(frozen=True)
class ZonedDerivation:
    rule: str
    sequent: ZonedSequent
    annot: Optional[object] = None
    names: Tuple[str, ...] = ()
    split: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    children: Tuple["ZonedDerivation", ...] = ()

    def to_step(self) -> Step:
        return Step(self.rule, self.annot, self.names, self.split, tuple(c.to_step() for c in self.children))

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


# Reading

def _parse_line(text: str, grammar: TypeGrammar, bases: Optional[Set[str]], lineno: int) -> Step:
    m = _LINE_RE.match(text.strip())
    if not m:
        raise ParseError(f"line {lineno}: cannot read proof step '{text.strip()}'")
    annot = None
    if m.group("ty") is not None:
        p = Parser(m.group("ty"), bases=bases)
        annot = p.type(grammar)
        p.expect_end()
    names = tuple(m.group("names").replace(",", " ").split()) if m.group("names") is not None else ()
    split = None
    if m.group("split") is not None:
        parts = m.group("split").split("|")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: a zone split needs exactly one '|'")
        split = tuple(tuple(part.replace(",", " ").split()) for part in parts)
    return Step(m.group("rule"), annot, names, split)


def parse_script(text: str, grammar: TypeGrammar, bases: Optional[Set[str]] = None) -> Step:
    """Read an indented script into its step tree."""
    lines = [(n, line) for n, line in enumerate(text.splitlines(), 1)
             if line.strip() and not line.strip().startswith("--")]
    if not lines:
        raise ParseError("empty proof script")
    items = [(len(line) - len(line.lstrip()), _parse_line(line, grammar, bases, n), n) for n, line in lines]

    def build(i: int) -> Tuple[Step, int]:
        indent, step, _ = items[i]
        kids = []
        j = i + 1
        while j < len(items) and items[j][0] > indent:
            kid, j = build(j)
            kids.append(kid)
        return Step(step.rule, step.annot, step.names, step.split, tuple(kids)), j

    root, end = build(0)
    if end != len(items):
        raise ParseError(f"line {items[end][2]}: proof step outside the root's subtree")
    return root


def show_script(step: Step, show_ty: Callable[[object], str], indent: int = 0) -> str:
    parts = [step.rule]
    if step.annot is not None:
        parts.append("{" + show_ty(step.annot) + "}")
    if step.names:
        parts.append("(" + " ".join(step.names) + ")")
    if step.split is not None:
        parts.append("[" + " ".join(step.split[0]) + " | " + " ".join(step.split[1]) + "]")
    lines = [" " * indent + " ".join(parts)]
    lines.extend(show_script(c, show_ty, indent + 2) for c in step.children)
    return "\n".join(lines)


def parse_zoned_sequent(text: str, grammar: TypeGrammar, zone_sep: str, suffix: Sequence[str] = (),
                        bases: Optional[Set[str]] = None) -> ZonedSequent:
    p = Parser(text, bases=bases)
    outer = p.binding_list([zone_sep], with_usage=False, grammar=grammar)
    p.expect(zone_sep)
    inner = p.binding_list(["|-"], with_usage=False, grammar=grammar)
    p.expect("|-")
    goal = p.type(grammar)
    for word in suffix:
        p.expect(word)
    p.expect_end()
    seq = ZonedSequent(tuple((x, a) for x, _, a in outer), tuple((x, a) for x, _, a in inner), goal)
    names = [x for x, _ in seq.outer + seq.inner]
    if len(set(names)) != len(names):
        raise ParseError("sequent variables must have distinct names")
    return seq


# Checking

class ZonedLogic:
    """Checks scripts against a rule table; subclasses register one method per rule."""

    name = ""
    error: type = LrError
    rules: Dict[str, str] = {}

    def show_ty(self, ty) -> str:
        raise NotImplementedError

    def fail(self, message: str, rule: str, path: Tuple[int, ...]) -> LrError:
        return self.error(message, rule=rule, path=path)

    def check(self, seq: ZonedSequent, step: Step, path: Tuple[int, ...] = ()) -> ZonedDerivation:
        method = self.rules.get(step.rule)
        if method is None:
            raise self.fail(f"unknown {self.name} rule '{step.rule}' (known: {', '.join(sorted(self.rules))})",
                            step.rule, path)
        try:
            premises, names = getattr(self, method)(seq, step)
        except LrError as e:
            raise e.at(step.rule, path)
        if len(premises) != len(step.children):
            raise self.fail(f"{step.rule} needs {len(premises)} premise(s), the script gives {len(step.children)}",
                            step.rule, path)
        children = tuple(self.check(p, c, path + (i,)) for i, (p, c) in enumerate(zip(premises, step.children)))
        logger.debug("%s: %s ok at %s", self.name, step.rule, path)
        return ZonedDerivation(step.rule, seq, step.annot, names, step.split, children)

    def recheck(self, d: ZonedDerivation) -> ZonedDerivation:
        again = self.check(d.sequent, d.to_step())
        if again != d:
            raise self.fail("derivation does not re-check to itself", d.rule, ())
        return again

    # Helpers for rule methods

    def _need(self, ok: bool, message: str) -> None:
        if not ok:
            raise self.error(message)

    def _shape(self, goal, cls, what: str):
        self._need(isinstance(goal, cls), f"goal {self.show_ty(goal)} is not {what}")
        return goal

    def _annot(self, step: Step, cls=object, what: str = "a type"):
        self._need(step.annot is not None, f"{step.rule} needs a {{TYPE}} annotation ({what})")
        self._need(isinstance(step.annot, cls), f"{step.rule} annotation must be {what}")
        return step.annot

    def _fresh(self, seq: ZonedSequent, step: Step, count: int, defaults: Sequence[str]) -> Tuple[str, ...]:
        names = step.names or tuple(defaults)
        self._need(len(names) == count, f"{step.rule} binds {count} variable(s), the script names {len(names)}")
        taken = seq.names()
        for x in names:
            self._need(x not in taken, f"binder name '{x}' is already in use")
        self._need(len(set(names)) == len(names), "binder names must differ")
        return tuple(names)

    def _lookup(self, zone: Zone, step: Step, goal, where: str) -> str:
        if step.names:
            self._need(len(step.names) == 1, f"{step.rule} names one variable")
            x = step.names[0]
            found = dict(zone).get(x)
            self._need(found is not None, f"'{x}' is not in the {where} zone")
            self._need(found == goal, f"'{x}' has type {self.show_ty(found)}, not {self.show_ty(goal)}")
            return x
        for x, a in zone:
            if a == goal:
                return x
        raise self.error(f"no {where} variable of type {self.show_ty(goal)}")

    def _split(self, seq: ZonedSequent, step: Step) -> Tuple[Zone, Zone]:
        self._need(step.split is not None, f"{step.rule} needs a zone split [left | right]")
        left, right = step.split
        names = [x for x, _ in seq.inner]
        used = list(left) + list(right)
        for x in used:
            self._need(x in names, f"split mentions '{x}', which is not in the linear zone")
        self._need(len(set(used)) == len(used), "a linear variable is used on both sides of the split")
        self._need(set(used) == set(names), "the split leaves linear variables unused: "
                   + ", ".join(x for x in names if x not in used))
        zone = dict(seq.inner)
        return tuple((x, zone[x]) for x in left), tuple((x, zone[x]) for x in right)
