"""Convergence-table records shared by every asymptotic check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class ConvergenceRow:
    """One sample of a limit law: ``observed`` at ``n`` against ``target``.

    ``k`` is the secondary index of the table (derivative order, zero index,
    connection index, sample point index); ``label`` names the quantity.
    """

    n: int
    observed: object
    target: object
    abs_error: object
    k: int | None = None
    label: str = ""

    @classmethod
    def make(cls, n, observed, target, k=None, label=""):
        return cls(n, observed, target, abs(observed - target), k, label)


def errors(rows: Sequence[ConvergenceRow]) -> list:
    return [row.abs_error for row in rows]


def strictly_decreasing(values) -> bool:
    values = list(values)
    return all(b < a for a, b in zip(values, values[1:]))


def stabilizes(values, rel: float = 0.05) -> bool:
    """True when the last three values differ pairwise by less than ``rel`` relatively."""
    tail = list(values)[-3:]
    if len(tail) < 3:
        return False
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = tail[i], tail[j]
            scale = max(abs(a), abs(b))
            if scale == 0:
                continue
            if abs(a - b) >= rel * scale:
                return False
    return True
