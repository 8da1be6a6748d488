"""Scalar helpers that work for both float and mpmath numbers.

The closed-form second- and third-order coefficients lose many digits to
cancellation when q0 is large (the particular-solution rates approach the
homogeneous ones).  Those formulas are therefore written against
:func:`sqrt` and friends from this module so they can be evaluated either in
double precision or, inside :func:`extended`, with mpmath numbers.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import fields, is_dataclass, replace

import mpmath

MP_TYPES = (mpmath.mpf,)

#: working precision (decimal digits) used for the closed-form cascade
DEFAULT_DPS = 40


def is_mp(x) -> bool:
    return isinstance(x, MP_TYPES)


def sqrt(x):
    """Principal square root preserving the number type."""
    if is_mp(x):
        return mpmath.sqrt(x)
    return math.sqrt(x)


def to_mp(x):
    return mpmath.mpf(x)


def to_float(x):
    """Convert mpf scalars (also inside dicts, tuples and dataclasses) to float."""
    if is_mp(x):
        return float(x)
    if isinstance(x, dict):
        return {k: to_float(v) for k, v in x.items()}
    if isinstance(x, tuple):
        return tuple(to_float(v) for v in x)
    if is_dataclass(x) and not isinstance(x, type):
        return replace(x, **{f.name: to_float(getattr(x, f.name)) for f in fields(x)})
    return x


def mp_params(p):
    """Copy of a ModelParams with every physical constant as an mpf."""
    return replace(p, **{k: mpmath.mpf(getattr(p, k))
                         for k in ("mu", "zeta", "zeta_i", "xi", "gamma", "Lc")})


@contextmanager
def extended(dps: int | None = DEFAULT_DPS):
    """Temporarily raise the mpmath working precision (no-op for None)."""
    if dps is None:
        yield
        return
    with mpmath.workdps(dps):
        yield
