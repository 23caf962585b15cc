"""
Error vocabulary shared by every package.

Library code raises these; the workbench and the API turn them into
result dictionaries.
"""

from typing import Optional, Sequence, Tuple


class LrError(Exception):
    """Base class: carries the rule tag and the node path where it failed."""

    def __init__(self, message: str, rule: Optional[str] = None, path: Sequence[int] = ()):
        self.message = message
        self.rule = rule
        self.path: Tuple[int, ...] = tuple(path)
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.rule:
            where.append(f"rule {self.rule}")
        if self.path:
            where.append("at " + ".".join(str(p) for p in self.path))
        if where:
            return f"{self.message} ({', '.join(where)})"
        return self.message

    def at(self, rule: Optional[str], path: Sequence[int]) -> "LrError":
        """Fill in location data if the raiser did not know it."""
        if self.rule is None:
            self.rule = rule
        if not self.path:
            self.path = tuple(path)
        self.args = (self._render(),)
        return self


# Configuration / input errors (exit code 2)

class ParseError(LrError):
    pass


class UnknownSemiring(LrError):
    pass


class ConfigError(LrError):
    """A setting or argument outside its allowed range."""


# Semantic errors (exit code 1)

class IndexOutOfRange(LrError):
    pass


class DimensionMismatch(LrError):
    pass


class ScopeError(LrError):
    pass


class TypeMismatch(LrError):
    pass


class UsageMismatch(LrError):
    """A usage inequality failed; `lhs ⊴ rhs` broke at `coordinate`."""

    def __init__(self, message: str, lhs: str = "", rhs: str = "", coordinate: Optional[int] = None,
                 relation: str = "<=", rule: Optional[str] = None, path: Sequence[int] = ()):
        self.lhs = lhs
        self.rhs = rhs
        self.coordinate = coordinate
        self.relation = relation
        super().__init__(message, rule=rule, path=path)


class MissingAnnotation(LrError):
    pass


class NoMeet(LrError):
    pass


class BoundUsageError(LrError):
    pass


class EnvUsageError(LrError):
    pass


class EnvActMismatch(LrError):
    pass


class RenUsageError(LrError):
    pass


class SingleSubstUsageError(LrError):
    pass


class PartitionMismatch(LrError):
    pass


class NonDillType(LrError):
    pass


class ForbiddenBang(LrError):
    pass


class HypothesisFailed(LrError):
    pass


class DillRuleError(LrError):
    pass


class PdRuleError(LrError):
    pass


CONFIG_ERRORS = (ParseError, UnknownSemiring, ConfigError)
