"""Exact spectral multiplicities on the round 7-sphere and the index bound.

On the unit-curvature sphere (kappa = 4) the relevant first-order operator
on exact 27-type 4-forms has eigenvalues -(4 + l) indexed by an integer
level l >= 0, paired symmetrically with +(4 + l).  Three representation
dimensions enter per level:

    d(l)  = (l+7)! / (36 (l+4) l!)              total multiplicity
    d0(l) = 2 (l+7)! (l+5) / (6! (l+2)!)        harmonic-polynomial block
    d1(l) = 2 (l+7)! (l+4) / (5! l! (l+2)(l+6)) co-closed 1-form block

and max(0, d - d0 - d1) bounds the eigenvalue's multiplicity on the exact
27-type part from below.  Every division must be exact; a nonzero remainder
raises instead of rounding.  Levels whose ratio mu = -(4+l)/4 falls in the
destabilizing window -1 > mu > -(5/2)(gamma-1) contribute to the index
bound of the modified flow.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

KAPPA = 4  # unit-curvature normalization; fixed throughout this module


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


def _check_level(l: int) -> int:
    if not isinstance(l, int) or l < 0:
        raise ValueError(f"level must be a non-negative integer, got {l!r}")
    return l


def multiplicity_d(l: int) -> int:
    """Total multiplicity at level l."""
    _check_level(l)
    return _exact_div(factorial(l + 7), 36 * (l + 4) * factorial(l))


def multiplicity_d0(l: int) -> int:
    """Dimension of the harmonic-polynomial eigenspace at level l."""
    _check_level(l)
    return _exact_div(2 * factorial(l + 7) * (l + 5), factorial(6) * factorial(l + 2))


def multiplicity_d1(l: int) -> int:
    """Dimension of the co-closed one-form block at level l."""
    _check_level(l)
    return _exact_div(2 * factorial(l + 7) * (l + 4),
                      factorial(5) * factorial(l) * (l + 2) * (l + 6))


def dim_lower(l: int) -> int:
    """Lower bound max(0, d - d0 - d1) for the exact 27-type multiplicity."""
    return max(0, multiplicity_d(l) - multiplicity_d0(l) - multiplicity_d1(l))


def displayed_closed_form(l: int) -> Fraction:
    """A closed-form expression for the lower bound that does NOT match d - d0 - d1.

    Kept only as a flagged comparison column: at l = 3 it gives 3840 where
    the direct difference gives 160, while the direct difference reproduces
    the quoted total of 7047.  Returned as an exact rational since it need
    not be an integer.
    """
    _check_level(l)
    return Fraction((l * l + 5 * l - 16) * factorial(l + 7), 120 * (l + 4) * (l + 6))


def sphere_eigenvalue(l: int) -> int:
    """Eigenvalue -(4 + l); the spectrum pairs it with +(4 + l)."""
    _check_level(l)
    return -(4 + l)


def level_mu(l: int) -> Fraction:
    """Window ratio mu = eigenvalue / kappa at unit curvature."""
    return Fraction(sphere_eigenvalue(l), KAPPA)


def in_window(l: int, gamma) -> bool:
    """Whether level l's ratio lies in the destabilizing window for gamma."""
    if not gamma > 2:
        raise ValueError("the window requires gamma > 2")
    mu = level_mu(l)
    return -1 > mu > Fraction(-5, 2) * (Fraction(gamma) - 1)


@dataclass(frozen=True)
class MultiplicityRecord:
    l: int
    eigenvalue: int
    d: int
    d0: int
    d1: int
    lower_bound: int

    @staticmethod
    def at(l: int) -> "MultiplicityRecord":
        return MultiplicityRecord(
            l=l,
            eigenvalue=sphere_eigenvalue(l),
            d=multiplicity_d(l),
            d0=multiplicity_d0(l),
            d1=multiplicity_d1(l),
            lower_bound=dim_lower(l),
        )


def index_lower_bound(l_min: int, l_max: int, gamma) -> tuple[int, list[MultiplicityRecord]]:
    """Sum the windowed multiplicity bounds over l_min <= l <= l_max.

    Returns the total and the per-level records (all levels in range, not
    just the windowed ones; filtering happened in the sum).
    """
    _check_level(l_min)
    _check_level(l_max)
    if l_min > l_max:
        raise ValueError(f"empty level range [{l_min}, {l_max}]")
    records = [MultiplicityRecord.at(l) for l in range(l_min, l_max + 1)]
    total = sum(r.lower_bound for r in records if in_window(r.l, gamma))
    return total, records


def write_csv(path, records: list[MultiplicityRecord], gamma) -> None:
    """Emit the per-level report; big integers as decimal strings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["l", "eigenvalue", "d", "d0", "d1", "lower_bound", "in_window(gamma)"])
        for r in records:
            writer.writerow([r.l, r.eigenvalue, r.d, r.d0, r.d1, r.lower_bound,
                             str(in_window(r.l, gamma)).lower()])
