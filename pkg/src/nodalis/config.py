"""Resource bounds shared by the library and the command line."""

import os

DEFAULT_MAX_N = 7
DEFAULT_MAX_DELTA = 4


class ResourceLimitError(ValueError):
    """Raised when a request exceeds the configured size bounds."""


def max_n() -> int:
    """Largest vertex count accepted by the enumerators.

    The environment variable ``NODALIS_MAX_N`` overrides the default.
    """
    raw = os.environ.get("NODALIS_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ResourceLimitError(f"NODALIS_MAX_N must be an integer, got {raw!r}")
    if value < 1:
        raise ResourceLimitError("NODALIS_MAX_N must be positive")
    return value


def max_delta() -> int:
    """Largest node count accepted by :func:`nodalis.tau.node_count`.

    ``NODALIS_MAX_N`` caps this as well, since a delta-node count lives on
    the delta-point universal space.
    """
    return min(DEFAULT_MAX_DELTA, max_n()) if "NODALIS_MAX_N" not in os.environ else max_n()


def check_n(n: int, what: str = "n") -> None:
    if n < 1:
        raise ValueError(f"{what} must be at least 1, got {n}")
    bound = max_n()
    if n > bound:
        raise ResourceLimitError(f"{what}={n} exceeds the configured bound {bound} (set NODALIS_MAX_N)")


def check_delta(delta: int) -> None:
    if delta < 1:
        raise ValueError(f"delta must be at least 1, got {delta}")
    bound = max_delta()
    if delta > bound:
        raise ResourceLimitError(f"delta={delta} exceeds the configured bound {bound} (set NODALIS_MAX_N)")
