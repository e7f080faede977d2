"""Flux values for Aharonov-Bohm potentials and their gauge reduction.

The magnetic spectrum depends on the circulation ``nu`` only through its
distance to the nearest integer, so every flux is stored together with the
gauge-reduced representative ``min_n |nu - n|`` in [0, 1/2].  Rational input
is reduced in exact arithmetic (``fractions.Fraction``) so that downstream
eigenvalue merging can compare symbolic values without floating-point ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math


@dataclass(frozen=True)
class Flux:
    """A circulation value with its gauge-reduced representative.

    ``reduced`` is ``min_n |raw - n|`` and lies in [0, 1/2]; it is zero
    exactly when ``raw`` is an integer.  ``exact`` is True when the value is
    held as a Fraction and all derived spectral quantities are exact.
    """

    raw: Fraction | float
    reduced: Fraction | float
    exact: bool

    def __post_init__(self):
        if not (0 <= self.reduced <= Fraction(1, 2)):
            raise ValueError(f"reduced flux {self.reduced} outside [0, 1/2]")

    @property
    def reduced_float(self) -> float:
        return float(self.reduced)

    @property
    def is_integer(self) -> bool:
        return self.reduced == 0

    def __format__(self, spec: str) -> str:
        return format(self.reduced_float, spec)


def reduce_flux(nu) -> Flux:
    """Gauge-reduce a circulation value into [0, 1/2].

    Accepts int, Fraction, float, or a string ("p/q" or a decimal).  Strings
    of the form "p/q" and integer/Fraction inputs are reduced exactly;
    plain floats go through floating arithmetic and are flagged inexact.
    """
    if isinstance(nu, str):
        text = nu.strip()
        if "/" in text:
            nu = Fraction(text)
        else:
            nu = float(text)
    if isinstance(nu, bool):
        raise TypeError("flux must be a real number")
    if isinstance(nu, int):
        nu = Fraction(nu)
    if isinstance(nu, Fraction):
        frac = nu - math.floor(nu)
        reduced = min(frac, 1 - frac)
        return Flux(raw=nu, reduced=reduced, exact=True)
    nu = float(nu)
    if not math.isfinite(nu):
        raise ValueError(f"flux must be finite, got {nu}")
    reduced = abs(nu - round(nu))
    # round() can leave 0.5 on either side; fold symmetrically
    if reduced > 0.5:
        reduced = 1.0 - reduced
    return Flux(raw=nu, reduced=reduced, exact=False)
