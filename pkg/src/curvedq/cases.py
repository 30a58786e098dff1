"""
Desk-scale parameter sets shared by the verification suites and the tests.

Couplings are fixed in the dimensionless combinations (omega R^2, alpha R)
so that the number of bound levels does not change with R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Coulomb, Oscillator, ProblemSpec, SpaceKind

__all__ = ["DeskCase", "DIMENSIONS", "RADII", "SYSTEMS", "desk_cases", "system_label"]

DIMENSIONS = (2, 3, 5)
RADII = (1.0, 2.0)


@dataclass(frozen=True)
class DeskCase:
    system: str
    spec: ProblemSpec
    Ls: tuple[int, ...]

    @property
    def key(self) -> tuple:
        s = self.spec
        return (self.system, s.n, s.R, s.interaction.coupling)


def system_label(spec: ProblemSpec) -> str:
    return f"{spec.space.value}-{spec.interaction.kind}"


# (space, kind, dimensionless couplings, angular momenta)
SYSTEMS = (
    (SpaceKind.SPHERE, "oscillator", (1.0,), (0, 1)),
    (SpaceKind.SPHERE, "coulomb", (1.0, 2.0), (0, 1)),
    (SpaceKind.TWO_SHEETED, "oscillator", (math.sqrt(20.0), math.sqrt(72.0)), (0, 1)),
    (SpaceKind.TWO_SHEETED, "coulomb", (30.0,), (0, 1)),
    (SpaceKind.ONE_SHEETED, "oscillator", (math.sqrt(2.0),), (8, 9)),
    (SpaceKind.ONE_SHEETED, "coulomb", (2.0,), (4, 5)),
)


def _interaction(space: SpaceKind, kind: str, g: float, R: float):
    # sphere couplings are taken as given, hyperboloid ones as omega R^2 / alpha R
    if kind == "oscillator":
        return Oscillator(g if space is SpaceKind.SPHERE else g / R**2)
    return Coulomb(g if space is SpaceKind.SPHERE else g / R)


def desk_cases(dims=DIMENSIONS, radii=RADII) -> list[DeskCase]:
    """All (system, n, R, coupling) combinations at desk scale."""
    out = []
    for space, kind, couplings, Ls in SYSTEMS:
        for g in couplings:
            for n in dims:
                for R in radii:
                    spec = ProblemSpec(space, n, R, _interaction(space, kind, g, R))
                    out.append(DeskCase(system_label(spec), spec, Ls))
    return out
