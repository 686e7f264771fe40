"""Input validation shared by the estimator wrappers and the command line."""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

from .exceptions import PreconditionError
from .geometry import Domain, domain_from_dict


def check_domain(d) -> Domain:
    """Accept a Domain or its dictionary form."""
    if isinstance(d, Domain):
        return d
    if isinstance(d, Mapping):
        return domain_from_dict(dict(d))
    raise PreconditionError(f"expected a domain or domain dictionary, got {type(d).__name__}")


def check_domains(X) -> list[Domain]:
    if isinstance(X, (Domain, Mapping)):
        X = [X]
    if not isinstance(X, Iterable):
        raise PreconditionError("expected an iterable of domains")
    out = [check_domain(d) for d in X]
    if not out:
        raise PreconditionError("found an empty collection of domains")
    return out


def check_scalar(value, name: str, lo: float = -math.inf, hi: float = math.inf,
                 lo_open: bool = False, hi_open: bool = False) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise PreconditionError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x):
        raise PreconditionError(f"{name} must be finite")
    below = x <= lo if lo_open else x < lo
    above = x >= hi if hi_open else x > hi
    if below or above:
        left, right = "(" if lo_open else "[", ")" if hi_open else "]"
        raise PreconditionError(f"{name}={x} outside {left}{lo}, {hi}{right}")
    return x


def check_order(n, name: str = "quad_order", minimum: int = 16) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise PreconditionError(f"{name} must be an integer >= {minimum}, got {n!r}")
    return int(n)


def check_series_order(n) -> int:
    n = check_order(n, "series_n", 64)
    if n & (n - 1):
        raise PreconditionError(f"series_n must be a power of two, got {n}")
    return n
