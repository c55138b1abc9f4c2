"""Closed-form upper bounds on positive solutions of trinomial by t-nomial
systems.  Every value is the floor of an exact rational expression."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .errors import DomainError


def _check(t, least=3):
    if not isinstance(t, int) or t < least:
        raise DomainError(f"t must be an integer >= {least}, got {t!r}")


def new_bound_value(t):
    """Exact rational ``t^3/3 - 3t^2/2 + 25t/6 - 3`` (any integer t)."""
    t = Fraction(t)
    return t**3 / 3 - 3 * t**2 / 2 + 25 * t / 6 - 3


def new_bound(t):
    _check(t)
    return floor(new_bound_value(t))


def lrw_bound(t):
    _check(t)
    return 2**t - 2


def kpt_bound(t):
    _check(t)
    return floor(Fraction(2 * t**3, 3) + 5 * t)


def mr_bound(t):
    _check(t)
    t = Fraction(t)
    return floor(t**3 / 3 - t**2 + 8 * t / 3 - 2)


def thm2_bound(deg_p, deg_q):
    if deg_p < 0 or deg_q < 0:
        raise DomainError("degrees must be nonnegative")
    return deg_p + deg_q + 2


def collinear_bound(t):
    _check(t, 1)
    return 2 * t - 2


@dataclass(frozen=True)
class BoundReport:
    t: int
    lrw: int
    kpt: int
    mr: int
    new: int

    def row(self):
        return (self.lrw, self.kpt, self.mr, self.new)


def table(t_values):
    return [BoundReport(t, lrw_bound(t), kpt_bound(t), mr_bound(t), new_bound(t)) for t in t_values]
