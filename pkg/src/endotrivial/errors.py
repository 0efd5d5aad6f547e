"""Exception hierarchy. Everything raised on purpose derives from GroupError."""

from __future__ import annotations


class GroupError(Exception):
    pass


class CapExceeded(GroupError):
    pass


class MalformedPermutation(GroupError, ValueError):
    pass


class ForeignElement(GroupError, ValueError):
    pass


class NotNormal(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class PrimeNotDividing(GroupError, ValueError):
    pass


class NotPGroup(GroupError):
    pass


class SylowNotContained(GroupError):
    pass


class TrivialSubgroupError(GroupError, ValueError):
    pass


class HypothesisFailed(GroupError):
    pass


class NoFactorization(GroupError):
    pass


class BadFieldSpec(GroupError, ValueError):
    pass


class BadParameters(GroupError, ValueError):
    pass


class NotSplit(GroupError):
    pass


class NotSplitMetacyclic(GroupError):
    pass


class StronglyEmbeddedProper(GroupError):
    pass


class FormulaMismatch(GroupError):
    pass


class ParseError(GroupError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


class UnknownSuite(GroupError, KeyError):
    pass
