"""Deterministic rational sample points for pointwise verification.

Coordinates are drawn uniformly from the integers of a closed range
(default [-5, 5]) with a seeded generator; points where a supplied
rejection predicate fires (poles) are redrawn.  All verdicts that rely on
samples echo (count, seed, range) in their report details.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from .errors import PlecticError

DEFAULT_RANGE = (-5, 5)
DEFAULT_COUNT = 50
DEFAULT_SEED = 0

_MAX_REJECTS = 1000


@dataclass(frozen=True)
class SampleConfig:
    count: int = DEFAULT_COUNT
    seed: int = DEFAULT_SEED
    low: int = DEFAULT_RANGE[0]
    high: int = DEFAULT_RANGE[1]

    def describe(self) -> dict:
        return {
            "samples": self.count,
            "seed": self.seed,
            "coordinate_range": [self.low, self.high],
        }


def sample_points(
    dim: int,
    config: SampleConfig,
    reject: Optional[Callable[[Tuple[Fraction, ...]], bool]] = None,
) -> List[Tuple[Fraction, ...]]:
    """Draw config.count points in Q^dim, redrawing rejected ones."""
    rng = random.Random(config.seed)
    points = []
    rejects = 0
    while len(points) < config.count:
        point = tuple(Fraction(rng.randint(config.low, config.high)) for _ in range(dim))
        if reject is not None and reject(point):
            rejects += 1
            if rejects > _MAX_REJECTS:
                raise PlecticError("sampling rejected too many points (pole-dense input?)")
            continue
        points.append(point)
    return points


def pole_rejector(form) -> Callable[[Tuple[Fraction, ...]], bool]:
    """Rejection predicate: any coefficient denominator vanishes at the point."""

    def reject(point) -> bool:
        for coeff in form.terms.values():
            if coeff.den.evaluate(point) == 0:
                return True
        return False

    return reject
