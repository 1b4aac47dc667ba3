"""Grid solution of the Buchstab delay differential equation.

omega(u) = 1/u on [1, 2], and (u*omega(u))' = omega(u-1) for u > 2.  The
solver integrates u*omega(u) forward segment by segment (method of steps)
with the composite trapezoid rule on a uniform grid; the integrand on each
unit segment is the already-computed part of the grid shifted back by one,
so the march is well-defined and second-order accurate.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError, DomainError


class BuchstabTable:
    """Sampled values of the Buchstab function on [1, u_max]."""

    __slots__ = ("u_max", "steps_per_unit", "h", "values")

    def __init__(self, u_max: float, steps_per_unit: int, values: np.ndarray) -> None:
        self.u_max = float(u_max)
        self.steps_per_unit = int(steps_per_unit)
        self.h = 1.0 / steps_per_unit
        values.setflags(write=False)
        self.values = values

    def omega(self, u: float) -> float:
        """omega(u); exact 1/u on [1, 2], linear interpolation beyond."""
        if u < 1.0 - 1e-12 or u > self.u_max + 1e-12:
            raise DomainError(f"u={u} outside table range [1, {self.u_max}]")
        if u <= 2.0:
            return 1.0 / u
        pos = (u - 1.0) * self.steps_per_unit
        i = min(int(pos), self.values.size - 2)
        frac = pos - i
        return float(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)

    def grid(self) -> np.ndarray:
        """The grid abscissas 1 + i/steps_per_unit."""
        return 1.0 + np.arange(self.values.size) / self.steps_per_unit


def solve(u_max: float = 8.0, h: float = 1e-4) -> BuchstabTable:
    """Build a table of omega on [1, u_max] with grid step h.

    h must be (up to rounding) the reciprocal of an integer, so the delay
    u - 1 lands exactly on the grid.  Values are checked against the known
    envelope 0.5 <= omega <= 1; escaping it means the integrator is broken.
    """
    if h <= 0 or h > 0.01:
        raise DomainError("step must lie in (0, 0.01]")
    if u_max < 2:
        raise DomainError("u_max must be at least 2")
    m = round(1.0 / h)
    if abs(m * h - 1.0) > 1e-9:
        raise DomainError("1/h must be an integer so the delay stays on-grid")
    npts = math.ceil(round((u_max - 1.0) * m, 6)) + 1
    u = 1.0 + np.arange(npts) / m
    values = np.empty(npts)
    head = min(m, npts - 1)
    values[: head + 1] = 1.0 / u[: head + 1]
    f = 1.0  # u * omega(u) at u = 2
    i = m
    while i < npts - 1:
        hi = min(i + m, npts - 1)
        integrand = values[i - m : hi - m + 1]  # omega(t - 1) on the segment
        steps = np.cumsum((integrand[:-1] + integrand[1:]) * (0.5 / m))
        accumulated = f + np.concatenate([[0.0], steps])
        values[i : hi + 1] = accumulated / u[i : hi + 1]
        f = accumulated[-1]
        i = hi
    if values.min() < 0.5 - 1e-9 or values.max() > 1.0 + 1e-9:
        raise ArithmeticError("solution escaped the envelope [1/2, 1]")
    return BuchstabTable(u_max, m, values)


def omega(table: BuchstabTable, u: float) -> float:
    return table.omega(u)


def refinement_delta(u_max: float, h: float) -> float:
    """Max change of the grid values when the step is halved.

    Exposes the empirical convergence order: a second-order integrator
    moves by O(h**2) under refinement.
    """
    coarse = solve(u_max, h)
    fine = solve(u_max, h / 2)
    return float(np.abs(coarse.values - fine.values[::2]).max())


def phi_asymptotic(x: float, beta: float, table: BuchstabTable) -> float:
    """Density prediction omega(1/beta) * x / (beta * log x) for the number
    of integers up to x free of prime factors below x**beta."""
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1)")
    if x <= 1:
        raise DomainError("x must exceed 1")
    if 1.0 / beta > table.u_max + 1e-12:
        raise CapacityError(f"table covers u <= {table.u_max}, need {1.0 / beta}")
    return table.omega(1.0 / beta) * x / (beta * math.log(x))
