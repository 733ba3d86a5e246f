"""Exact angle bookkeeping.

Phases are carried as `fractions.Fraction` values measured in units of pi
and reduced into [0, 2).  They stay exact through every gate composition;
floats appear only when a state or operator is materialized as a numpy
array.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import NonRationalPhase

RationalLike = int | Fraction


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce to Fraction; reject floats so nothing is silently rounded."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise NonRationalPhase(f"expected an exact rational, got {value!r}")


def mod2(phase: RationalLike) -> Fraction:
    """Reduce a phase (units of pi) into [0, 2)."""
    return as_fraction(phase) % 2


def phase_to_complex(phase: RationalLike) -> complex:
    angle = math.pi * float(Fraction(phase))
    return complex(math.cos(angle), math.sin(angle))


def phases_to_array(phases: Iterable[RationalLike]) -> np.ndarray:
    return np.array([phase_to_complex(p) for p in phases], dtype=complex)


def rational_to_json(value: Fraction, unit: str | None = None) -> dict:
    out = {"num": value.numerator, "den": value.denominator}
    if unit is not None:
        out["unit"] = unit
    return out


def rational_from_json(obj: dict) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))
