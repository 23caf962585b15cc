import itertools
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from lang.errors import ConfigError, NoMeet, ParseError, UnknownSemiring

logger = logging.getLogger(__name__)

Usage = Hashable


class SkewSemiring(ABC):
    """A partially ordered semiring whose laws only hold up to leq."""

    name: str = ""
    description: str = ""
    zero: Usage
    one: Usage

    @abstractmethod
    def add(self, a: Usage, b: Usage) -> Usage:
        ...

    @abstractmethod
    def mul(self, a: Usage, b: Usage) -> Usage:
        ...

    @abstractmethod
    def leq(self, a: Usage, b: Usage) -> bool:
        ...

    def meet(self, a: Usage, b: Usage) -> Optional[Usage]:
        """Declared greatest lower bound, or None where the instance has none."""
        return None

    def elements(self) -> Optional[List[Usage]]:
        """The carrier, or None for infinite instances."""
        return None

    @property
    def is_finite(self) -> bool:
        return self.elements() is not None

    @abstractmethod
    def parse(self, text: str) -> Usage:
        ...

    def show(self, u: Usage) -> str:
        return str(u)

    def show_vector(self, v: Sequence[Usage]) -> str:
        return "(" + ", ".join(self.show(u) for u in v) + ")"

    def maximal_elements(self) -> Optional[List[Usage]]:
        els = self.elements()
        if els is None:
            return None
        return [x for x in els if not any(y != x and self.leq(x, y) for y in els)]

    def top(self) -> Optional[Usage]:
        els = self.elements()
        if els is None:
            return None
        for y in els:
            if all(self.leq(x, y) for x in els):
                return y
        return None

    # Bottom-up tables: the facts admitted at interior nodes of a bottom-up derivation.

    def decompose_add(self, r: Usage) -> List[Tuple[Usage, Usage]]:
        els = self.elements() or []
        return [(p, q) for p in els for q in els if self.add(p, q) == r]

    def decompose_mul(self, s: Usage, r: Usage) -> List[Usage]:
        els = self.elements() or []
        return [p for p in els if self.mul(s, p) == r]

    def is_bottom_up_add(self, p: Usage, q: Usage, r: Usage) -> bool:
        return (p, q) in self.decompose_add(r)

    def is_bottom_up_mul(self, s: Usage, p: Usage, r: Usage) -> bool:
        return p in self.decompose_mul(s, r)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class FiniteSkewSemiring(SkewSemiring):
    """A finite instance given by explicit tables over its literal strings."""

    def __init__(self, name: str, description: str, elements: Sequence[str],
                 add_table: Dict[Tuple[str, str], str], mul_table: Dict[Tuple[str, str], str],
                 order: Iterable[Tuple[str, str]], zero: str = "0", one: str = "1",
                 meet_table: Optional[Dict[Tuple[str, str], str]] = None,
                 bottom_up_add: Optional[Set[Tuple[str, str, str]]] = None,
                 bottom_up_mul: Optional[Set[Tuple[str, str, str]]] = None):
        self.name = name
        self.description = description
        self._elements = list(elements)
        self._add = dict(add_table)
        self._mul = dict(mul_table)
        self._order = set(order) | {(x, x) for x in self._elements}
        self.zero = zero
        self.one = one
        self._meet = dict(meet_table) if meet_table is not None else None
        self._bu_add = bottom_up_add
        self._bu_mul = bottom_up_mul

    def add(self, a, b):
        return self._add[(a, b)]

    def mul(self, a, b):
        return self._mul[(a, b)]

    def leq(self, a, b):
        return (a, b) in self._order

    def meet(self, a, b):
        if self._meet is None:
            return None
        return self._meet.get((a, b))

    def elements(self):
        return list(self._elements)

    def parse(self, text):
        text = text.strip()
        if text not in self._elements:
            raise ParseError(f"'{text}' is not a usage of {self.name} (expected one of {' '.join(self._elements)})")
        return text

    def decompose_add(self, r):
        if self._bu_add is None:
            return super().decompose_add(r)
        return [(p, q) for (p, q, s) in sorted(self._bu_add) if s == r]

    def decompose_mul(self, s, r):
        if self._bu_mul is None:
            return super().decompose_mul(s, r)
        return [p for (t, p, u) in sorted(self._bu_mul) if t == s and u == r]

    def corrupted(self, name: str, add: Optional[Dict[Tuple[str, str], str]] = None,
                  mul: Optional[Dict[Tuple[str, str], str]] = None) -> "FiniteSkewSemiring":
        """A copy with some table entries overwritten; used to exercise law_audit."""
        add_table = dict(self._add)
        add_table.update(add or {})
        mul_table = dict(self._mul)
        mul_table.update(mul or {})
        return FiniteSkewSemiring(name, self.description, self._elements, add_table, mul_table,
                                  self._order, self.zero, self.one, self._meet)


class ExactNat(SkewSemiring):
    """Natural numbers with ordinary arithmetic and the discrete order."""

    name = "nat"
    description = "natural numbers, exact counting (discrete order)"
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def leq(self, a, b):
        return a == b

    def meet(self, a, b):
        return a if a == b else None

    def parse(self, text):
        text = text.strip()
        if not text.isdigit():
            raise ParseError(f"'{text}' is not a natural number usage")
        return int(text)

    def decompose_add(self, r):
        return [(p, r - p) for p in range(r + 1)]

    def decompose_mul(self, s, r):
        if s == 0:
            return [0] if r == 0 else []
        return [r // s] if r % s == 0 else []

    def is_bottom_up_add(self, p, q, r):
        return p + q == r

    def is_bottom_up_mul(self, s, p, r):
        return s * p == r


def _table(elements: Sequence[str], fn: Callable[[str, str], str]) -> Dict[Tuple[str, str], str]:
    return {(a, b): fn(a, b) for a in elements for b in elements}


def _lin_add(a, b):
    if a == "0":
        return b
    if b == "0":
        return a
    return "w"


def _lin_mul(a, b):
    if a == "0" or b == "0":
        return "0"
    if a == "1":
        return b
    if b == "1":
        return a
    return "w"


def _lin_meet(a, b):
    return a if a == b else "w"


_BOX_RANK = {"#": 0, "1": 1, "0": 2}


def _box_min(a, b):
    return a if _BOX_RANK[a] <= _BOX_RANK[b] else b


def _box_mul(a, b):
    if a == "0" or b == "0":
        return "0"
    if a == "1":
        return b
    return "#"


TRIVIAL = FiniteSkewSemiring(
    "trivial", "one-element semiring (no usage information)", ["*"],
    {("*", "*"): "*"}, {("*", "*"): "*"}, [], zero="*", one="*",
    meet_table={("*", "*"): "*"},
)

LIN01W = FiniteSkewSemiring(
    "lin01w", "linearity: 0 unused, 1 linear, w unrestricted", ["0", "1", "w"],
    _table("01w", _lin_add), _table("01w", _lin_mul), [("w", "0"), ("w", "1")],
    meet_table=_table("01w", _lin_meet),
    bottom_up_add={("0", "0", "0"), ("0", "1", "1"), ("1", "0", "1"), ("w", "w", "w")},
    bottom_up_mul={("0", "w", "0"), ("1", "0", "0"), ("1", "1", "1"), ("1", "w", "w"),
                   ("w", "0", "0"), ("w", "w", "w")},
)

MOD01BOX = FiniteSkewSemiring(
    "mod01box", "necessity: # valid, 1 true, 0 unused (# <= 1 <= 0)", ["0", "1", "#"],
    _table("01#", _box_min), _table("01#", _box_mul), [("#", "1"), ("#", "0"), ("1", "0")],
    meet_table=_table("01#", _box_min),
    bottom_up_add={("0", "0", "0"), ("1", "1", "1"), ("#", "#", "#")},
    bottom_up_mul={("0", "#", "0"), ("1", "0", "0"), ("1", "1", "1"), ("1", "#", "#"),
                   ("#", "0", "0"), ("#", "#", "#")},
)

NAT = ExactNat()

SEMIRINGS: Dict[str, SkewSemiring] = {
    "trivial": TRIVIAL,
    "lin01w": LIN01W,
    "mod01box": MOD01BOX,
    "nat": NAT,
}


def get_semiring(name: str) -> SkewSemiring:
    """Look up an instance by its command-line name."""
    try:
        return SEMIRINGS[name.lower()]
    except KeyError:
        raise UnknownSemiring(f"unknown semiring '{name}' (choose from {', '.join(SEMIRINGS)})")


def meet_or_fail(sr: SkewSemiring, a: Usage, b: Usage) -> Usage:
    m = sr.meet(a, b)
    if m is None:
        raise NoMeet(f"{sr.name} has no meet of {sr.show(a)} and {sr.show(b)}; annotate this node")
    return m


# Law suite

@dataclass(frozen=True)
class LawViolation:
    law: str
    values: Tuple[Usage, ...]

    def describe(self, sr: SkewSemiring) -> str:
        return f"{self.law}: " + ", ".join(sr.show(v) for v in self.values)


def _implies(a: bool, b: bool) -> bool:
    return (not a) or b


def _meet_glb(sr, x, y, z):
    m = sr.meet(x, y)
    if m is None:
        return True
    return sr.leq(m, x) and sr.leq(m, y) and _implies(sr.leq(z, x) and sr.leq(z, y), sr.leq(z, m))


LAWS: List[Tuple[str, int, Callable[..., bool]]] = [
    ("leq-reflexive", 1, lambda sr, x: sr.leq(x, x)),
    ("leq-transitive", 3, lambda sr, x, y, z: _implies(sr.leq(x, y) and sr.leq(y, z), sr.leq(x, z))),
    ("leq-antisymmetric", 2, lambda sr, x, y: _implies(sr.leq(x, y) and sr.leq(y, x), x == y)),
    ("add-unit", 1, lambda sr, x: sr.add(sr.zero, x) == x),
    ("add-commutative", 2, lambda sr, x, y: sr.add(x, y) == sr.add(y, x)),
    ("add-associative", 3, lambda sr, x, y, z: sr.add(sr.add(x, y), z) == sr.add(x, sr.add(y, z))),
    ("mul-left-unit", 1, lambda sr, x: sr.leq(sr.mul(sr.one, x), x)),
    ("mul-right-unit", 1, lambda sr, x: sr.leq(x, sr.mul(x, sr.one))),
    ("mul-associative", 3, lambda sr, x, y, z: sr.leq(sr.mul(sr.mul(x, y), z), sr.mul(x, sr.mul(y, z)))),
    ("zero-left", 1, lambda sr, z: sr.leq(sr.mul(sr.zero, z), sr.zero)),
    ("distrib-right", 3, lambda sr, x, y, z: sr.leq(sr.mul(sr.add(x, y), z),
                                                    sr.add(sr.mul(x, z), sr.mul(y, z)))),
    ("zero-right", 1, lambda sr, x: sr.leq(sr.zero, sr.mul(x, sr.zero))),
    ("distrib-left", 3, lambda sr, x, y, z: sr.leq(sr.add(sr.mul(x, y), sr.mul(x, z)),
                                                   sr.mul(x, sr.add(y, z)))),
    ("add-monotone", 4, lambda sr, x, x2, y, y2: _implies(sr.leq(x, x2) and sr.leq(y, y2),
                                                          sr.leq(sr.add(x, y), sr.add(x2, y2)))),
    ("mul-monotone", 4, lambda sr, x, x2, y, y2: _implies(sr.leq(x, x2) and sr.leq(y, y2),
                                                          sr.leq(sr.mul(x, y), sr.mul(x2, y2)))),
    ("meet-glb", 3, _meet_glb),
]


def _tuples(sr: SkewSemiring, arity: int, budget: int, bound: int, rng: random.Random):
    els = sr.elements()
    if els is not None:
        yield from itertools.product(els, repeat=arity)
        return
    small = [sr.parse(str(k)) for k in range(bound + 1)]
    yield from itertools.product(small, repeat=arity)
    for _ in range(budget):
        yield tuple(sr.parse(str(rng.randint(0, 10 ** 6))) for _ in range(arity))


def law_audit(sr: SkewSemiring, budget: Optional[int] = None, bound: Optional[int] = None,
              seed: Optional[int] = None) -> List[LawViolation]:
    """Check every skew-semiring law; exhaustive for finite carriers, sampled otherwise."""
    from config import Config

    budget = Config.NAT_SAMPLES if budget is None else budget
    bound = Config.NAT_BOUND if bound is None else bound
    rng = random.Random(Config.SEED if seed is None else seed)
    if budget < 1:
        raise ConfigError("budget must be at least 1")

    report: List[LawViolation] = []
    for law, arity, holds in LAWS:
        for values in _tuples(sr, arity, budget, bound, rng):
            if not holds(sr, *values):
                report.append(LawViolation(law, tuple(values)))
    logger.info("law audit of %s: %d violation(s)", sr.name, len(report))
    return report
