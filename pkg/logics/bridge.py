"""
Calculus-side plumbing shared by the DILL and PD translations.
"""

from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from checker.derivation import Derivation
from lang.errors import PartitionMismatch
from lang.syntax import Ty, TyCtx, display_names
from logics.scripts import ZonedSequent
from traversal.traverse import ren
from usage_ops.semiring import SkewSemiring, Usage


def seq_ctx(seq: ZonedSequent, embed: Callable[[object], Ty]) -> TyCtx:
    """The calculus context of a sequent: outer zone, then inner zone."""
    return TyCtx(tuple((x, embed(a)) for x, a in seq.outer + seq.inner))


def seq_usage(seq: ZonedSequent, outer: Usage, inner: Usage) -> Tuple[Usage, ...]:
    return (outer,) * len(seq.outer) + (inner,) * len(seq.inner)


def place(sr: SkewSemiring, d: Derivation, target: TyCtx) -> Derivation:
    """Move d into `target` by variable name; names missing from d get usage zero."""
    src = d.ctx.names
    if src == target.names:
        return d
    position = {x: i for i, x in enumerate(target.names)}
    f = [position[x] for x in src]
    at = {x: u for x, u in zip(src, d.usage)}
    usage = tuple(at.get(x, sr.zero) for x in target.names)
    return ren(sr, f, target, usage, d)


def all_types(d: Derivation) -> Iterator[Ty]:
    for _, node in d.walk():
        yield from node.ctx.types
        yield node.ty


def check_partition(sr: SkewSemiring, d: Derivation, partition: Optional[Sequence[str]],
                    allowed: Sequence[Usage]) -> None:
    """The caller's classification must match the conclusion usage exactly."""
    for u in d.usage:
        if u not in allowed:
            raise PartitionMismatch(f"usage {sr.show(u)} is not one of {' '.join(map(sr.show, allowed))}")
    if partition is None:
        return
    given = tuple(sr.parse(str(p)) for p in partition)
    if given != tuple(d.usage):
        raise PartitionMismatch(f"partition {sr.show_vector(given)} does not match the conclusion usage "
                                f"{sr.show_vector(d.usage)}")


def zones(names: Sequence[str], d: Derivation, unembed: Callable[[Ty], object],
          outer: Usage, inner: Usage) -> ZonedSequent:
    """Read a sequent off a calculus node: `outer`-annotated entries, then `inner` ones; the rest dropped."""
    o = tuple((x, unembed(a)) for x, a, u in zip(names, d.ctx.types, d.usage) if u == outer)
    i = tuple((x, unembed(a)) for x, a, u in zip(names, d.ctx.types, d.usage) if u == inner)
    return ZonedSequent(o, i, unembed(d.ty))


def root_names(d: Derivation) -> List[str]:
    return display_names(d.ctx.names)


def split_names(names: Sequence[str], left: Sequence[Usage], right: Sequence[Usage],
                inner: Usage) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    return (tuple(x for x, u in zip(names, left) if u == inner),
            tuple(x for x, u in zip(names, right) if u == inner))
