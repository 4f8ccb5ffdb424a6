"""Integer-flag boxes, branching at zero, and the deletion conditions D1-D4.

Flag meanings per coordinate:

* ``0``: the interval is ``[0, 0]`` (coordinate fixed at zero),
* ``1``: the interval still contains 0 (undecided),
* ``2``: the interval excludes 0 (coordinate forced nonzero).

The real-valued search box is stored once by the solver; a flag vector plus that
box describes every node. Indices are 0-based throughout the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import NotBranchable

ZERO, ONE, TWO = 0, 1, 2


@dataclass(frozen=True)
class FlagBox:
    flags: Tuple[int, ...]

    def __post_init__(self):
        flags = tuple(int(f) for f in self.flags)
        if any(f not in (ZERO, ONE, TWO) for f in flags):
            raise ValueError(f"flags must be 0, 1 or 2: {flags}")
        object.__setattr__(self, "flags", flags)

    @classmethod
    def parse(cls, text: str) -> "FlagBox":
        return cls(tuple(int(ch) for ch in text))

    def __str__(self) -> str:
        return "".join(map(str, self.flags))

    def __len__(self) -> int:
        return len(self.flags)

    @property
    def n_zero(self) -> int:
        return self.flags.count(ZERO)

    @property
    def n_two(self) -> int:
        return self.flags.count(TWO)

    def as_array(self) -> np.ndarray:
        return np.array(self.flags, dtype=np.int8)

    def indices(self, flag: int) -> Tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.flags) if f == flag)


class Verdict(enum.Enum):
    INFEASIBLE = "Infeasible"
    TERMINAL_FIXED_SUPPORT = "TerminalFixedSupport"
    TERMINAL_FREE_SUPPORT = "TerminalFreeSupport"
    CONTINUE = "Continue"


@dataclass(frozen=True)
class DeletionVerdict:
    kind: Verdict
    support: Tuple[int, ...] = ()

    @property
    def terminal(self) -> bool:
        return self.kind in (Verdict.TERMINAL_FIXED_SUPPORT, Verdict.TERMINAL_FREE_SUPPORT)


def initial_flagbox(p: int) -> FlagBox:
    if p < 1:
        raise ValueError("p must be at least 1")
    return FlagBox((ONE,) * p)


def branch(fb: FlagBox, eta: int) -> Tuple[FlagBox, FlagBox]:
    """Split coordinate ``eta`` at zero: (child fixed at 0, child forced nonzero)."""
    if fb.flags[eta] != ONE:
        raise NotBranchable(f"coordinate {eta} has flag {fb.flags[eta]} in {fb}")
    head, tail = fb.flags[:eta], fb.flags[eta + 1:]
    return FlagBox(head + (ZERO,) + tail), FlagBox(head + (TWO,) + tail)


def check_deletion(fb: FlagBox, p: int, k: int) -> DeletionVerdict:
    """Classify a box by counting forced-nonzero and fixed-zero coordinates.

    D1/D2 (too many forced nonzeros / too many fixed zeros) delete the box.
    D3 (exactly k forced nonzeros) resolves the support to the flag-2
    coordinates, the remaining undecided ones becoming zero. D4 (exactly p - k
    fixed zeros) resolves it to every coordinate not fixed at zero. When D3 and
    D4 both hold the two supports coincide and D3 is reported.
    """
    if not 1 <= k < p:
        raise ValueError(f"need 1 <= k < p, got k={k}, p={p}")
    n2, n0 = fb.n_two, fb.n_zero
    if n2 > k or n0 > p - k:
        return DeletionVerdict(Verdict.INFEASIBLE)
    if n2 == k:
        return DeletionVerdict(Verdict.TERMINAL_FIXED_SUPPORT, fb.indices(TWO))
    if n0 == p - k:
        return DeletionVerdict(Verdict.TERMINAL_FREE_SUPPORT, support(fb))
    return DeletionVerdict(Verdict.CONTINUE)


def support(fb: FlagBox) -> Tuple[int, ...]:
    """Coordinates not fixed at zero."""
    return tuple(i for i, f in enumerate(fb.flags) if f != ZERO)
