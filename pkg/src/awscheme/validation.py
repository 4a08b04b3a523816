"""Input checks shared by the parameter classes, the estimators and the CLI.

Each helper returns the cleaned value or raises :class:`DomainError` with a
message naming the violated condition.
"""
from __future__ import annotations

import math
import numbers

import numpy as np

from .errors import DomainError


def check_q(q) -> float:
    q = check_real(q, "q")
    if not 0.0 < q < 1.0:
        raise DomainError(f"base q must satisfy 0 < q < 1, got {q!r}")
    return q


def check_real(value, name) -> float:
    if isinstance(value, bool) or not isinstance(value, (numbers.Real, np.floating, np.integer)):
        if isinstance(value, (complex, np.complexfloating)) and value.imag == 0:
            value = value.real
        else:
            raise DomainError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_complex(value, name) -> complex:
    try:
        value = complex(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_nonzero(value, name) -> complex:
    value = check_complex(value, name)
    if value == 0:
        raise DomainError(f"{name} must be nonzero")
    return value


def check_positive(value, name) -> float:
    value = check_real(value, name)
    if value <= 0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


def check_condition(ok: bool, message: str) -> None:
    if not ok:
        raise DomainError(message)


def check_nonneg_int(value, name) -> int:
    if isinstance(value, bool) or not isinstance(value, (numbers.Integral, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")
    return int(value)

