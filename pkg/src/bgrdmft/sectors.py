"""Occupation-number configurations and total-momentum symmetry sectors.

A configuration of N bosons on d momentum modes is an integer vector
(n_0, ..., n_{d-1}) with sum N.  Each configuration is an eigenstate of the
lattice translation operator with total momentum sum_k k*n_k mod d, so the
N-particle space splits into d sectors labelled by P = 0..d-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .errors import InvalidArgumentError, UnsupportedDimensionError

# Dense linear algebra downstream becomes infeasible past this sector size.
MAX_SECTOR_DIMENSION = 200_000

ConfigState = tuple[int, ...]


def total_momentum(state: ConfigState, d: int) -> int:
    """Total lattice momentum sum_k k*n_k mod d of an occupation vector."""
    if len(state) != d:
        raise InvalidArgumentError(f"state has length {len(state)}, expected {d}")
    return sum(k * n for k, n in enumerate(state)) % d


def _compositions(n: int, d: int):
    """Yield all length-d tuples of nonnegative ints summing to n."""
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def _canonical_key(state: ConfigState):
    # Condensate-like configurations (large single-mode occupation) come
    # first; ties break lexicographically descending on the full vector.
    return (-max(state), tuple(-x for x in state))


@dataclass(frozen=True)
class Sector:
    """Ordered basis of the fixed-(d, N, P) symmetry sector."""

    d: int
    N: int
    P: int
    states: tuple[ConfigState, ...]
    index: dict[ConfigState, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "index", {s: i for i, s in enumerate(self.states)}
        )

    @property
    def dimension(self) -> int:
        return len(self.states)

    def position(self, state: ConfigState) -> int:
        """Basis position of a configuration; KeyError if not in the sector."""
        return self.index[tuple(state)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.d,
                "N": self.N,
                "P": self.P,
                "states": [list(s) for s in self.states],
            }
        )


def enumerate_sector(d: int, N: int, P: int) -> Sector:
    """All occupation vectors with sum N and total momentum P, in canonical order.

    The order is deterministic: max occupation descending, then
    lexicographically descending, which places condensate vertices ahead of
    interior configurations.
    """
    if d < 1:
        raise InvalidArgumentError(f"d must be >= 1, got {d}")
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    if not 0 <= P < d:
        raise InvalidArgumentError(f"P must lie in [0, {d}), got {P}")
    if comb(N + d - 1, N) > d * MAX_SECTOR_DIMENSION:
        # The largest sector holds at least comb/d states; refuse before
        # enumerating anything.
        raise UnsupportedDimensionError(
            f"(d={d}, N={N}) yields a sector larger than {MAX_SECTOR_DIMENSION}"
        )
    states = sorted(
        (s for s in _compositions(N, d) if total_momentum(s, d) == P),
        key=_canonical_key,
    )
    if len(states) > MAX_SECTOR_DIMENSION:
        raise UnsupportedDimensionError(
            f"sector dimension {len(states)} exceeds {MAX_SECTOR_DIMENSION}"
        )
    return Sector(d=d, N=N, P=P, states=tuple(states))


def sector_dimension(d: int, N: int, P: int) -> int:
    """Number of configurations in the (d, N, P) sector."""
    return enumerate_sector(d, N, P).dimension


def sector_from_json(text: str) -> Sector:
    obj = json.loads(text)
    return Sector(
        d=obj["d"],
        N=obj["N"],
        P=obj["P"],
        states=tuple(tuple(s) for s in obj["states"]),
    )
