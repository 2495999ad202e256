"""Exact rational scalars and the float -> rational bridge.

`fractions.Fraction` already guarantees the invariants we need (positive
denominator, reduced form), so it is used directly as the exactness carrier.
What this module adds is the bridging policy: how floating-point spectra are
snapped to rationals before any exact polyhedral computation runs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Rational = Fraction

#: Denominator cap used when snapping eigenvalues/singular values.
SNAP_DENOMINATOR_CAP = 10**6


def parse_rational(text) -> Fraction:
    """Parse "p/q", "p", or a JSON number into a Fraction (floats exactly)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InputError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise InputError(f"non-finite value: {text!r}")
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {text!r}") from exc
    raise InputError(f"not a rational: {text!r}")


def format_rational(q: Fraction) -> str:
    return str(q)


def parse_vector(items) -> tuple[Fraction, ...]:
    return tuple(parse_rational(t) for t in items)


def from_float_exact(x: float) -> Fraction:
    """Exact (dyadic) rational of a float.  No rounding at all."""
    if not math.isfinite(x):
        raise InputError(f"non-finite value: {x!r}")
    return Fraction(x)


def snap_float(x: float, max_denominator: int = SNAP_DENOMINATOR_CAP) -> Fraction:
    if not math.isfinite(x):
        raise InputError(f"non-finite value: {x!r}")
    return Fraction(x).limit_denominator(max_denominator)


def snap_value(x: float, tol: float,
               max_denominator: int = SNAP_DENOMINATOR_CAP) -> Fraction | None:
    """Snap x to a small-denominator rational; None if no candidate is within tol."""
    q = snap_float(x, max_denominator)
    if abs(float(q) - x) <= tol:
        return q
    return None


def group_sorted(values: Sequence[float], tol: float) -> list[list[int]]:
    """Chain-group positions of a nonincreasing float vector: adjacent entries
    within tol land in one group (transitive chaining)."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def snap_spectrum(values: Sequence[float], grouping_tol: float,
                  max_denominator: int = SNAP_DENOMINATOR_CAP,
                  ) -> tuple[tuple[Fraction, ...], list[list[int]]] | None:
    """Bridge a sorted float spectrum into exact rationals.

    Entries are first grouped at grouping_tol (so true multiplicities become
    exact ties), each group is replaced by its mean, and the mean is snapped
    under the denominator cap.  Returns None when some group mean has no
    rational within grouping_tol of it, in which case callers fall back to
    interval-mode comparisons.
    """
    groups = group_sorted(values, grouping_tol)
    out: list[Fraction] = []
    for g in groups:
        mean = sum(values[i] for i in g) / len(g)
        q = snap_value(mean, max(grouping_tol, 1e-12), max_denominator)
        if q is None:
            return None
        out.extend([q] * len(g))
    return tuple(out), groups


def dot(a: Iterable[Fraction], b: Iterable[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(t: Fraction, a: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(t * x for x in a)


def norm2_sq(a: Sequence[Fraction]) -> Fraction:
    return sum((x * x for x in a), Fraction(0))
