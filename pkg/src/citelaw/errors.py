"""Exception types shared across modules."""

from .corpus import CorpusError


class InsufficientDataError(ValueError):
    """Too few observations for the requested statistic."""


__all__ = ["CorpusError", "InsufficientDataError"]
