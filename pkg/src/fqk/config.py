"""Resource bounds and the exceptions raised when they are exceeded.

Bounds resolve in order: explicit argument, environment variable, default.
"""
from __future__ import annotations

import os

DEFAULT_MAX_N = 64
DEFAULT_MAX_CLASSIFY_N = 10**6
DEFAULT_MAX_LEVEL = 10**4


class FqkError(Exception):
    """Base class for library errors."""


class ResourceBoundError(FqkError):
    """A requested size exceeds the configured bound."""


class VerificationError(FqkError):
    """A certified identity failed to hold."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_matrix_n(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("FQK_MAX_N", DEFAULT_MAX_N)


def max_classify_n(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("FQK_MAX_CLASSIFY_N", DEFAULT_MAX_CLASSIFY_N)


def max_level(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("FQK_MAX_LEVEL", DEFAULT_MAX_LEVEL)


def check_bound(value: int, bound: int, what: str) -> None:
    if value > bound:
        raise ResourceBoundError(f"{what} = {value} exceeds the configured bound {bound}")
