"""Lattice paths, visit counts, and the event predicates of the capped walk.

Conventions used throughout the package:

* A path is a finite sequence of +/-1 steps from the origin; positions are
  ``S_0 = 0, S_i = S_{i-1} + step_i``.
* The visit count of a site x counts the times ``1 <= j <= m`` with
  ``S_j = x``.  The visit at time 0 is NOT counted.  This matters for
  small paths: the single step (+1) gives site 0 a count of 0, not 1.
* "Reach" events condition on the walk hitting a target level n for the
  first time with every visit count at most L0 (wire tag ``"B"``);
  "confined" additionally requires the interior of the path to stay
  strictly between 0 and n (tag ``"B+"``); "irreducible" confined paths
  admit no internal regeneration split (tag ``"L"``).

All functions are pure; nothing here holds mutable state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional


# -- Paths and visit counts --------------------------------------------------


@dataclass(frozen=True)
class LatticePath:
    """A finite +/-1-step walk started at 0, stored as its step sequence.

    Positions and visit profiles are recomputed on demand; paths at the
    scales handled here are short, so no caching is kept.
    """

    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.steps):
            raise ValueError("steps must be +1 or -1")

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def positions(self) -> tuple[int, ...]:
        """S_0 = 0 followed by the partial sums; length = steps + 1."""
        pos = [0]
        for s in self.steps:
            pos.append(pos[-1] + s)
        return tuple(pos)

    @property
    def final(self) -> int:
        return sum(self.steps)

    def probability(self) -> "DyadicProb":
        """Simple-random-walk probability of this exact step sequence."""
        return DyadicProb(1, self.length)

    def shifted_suffix(self, start: int) -> "LatticePath":
        """The path re-rooted at time ``start`` (positions relative to S_start)."""
        return LatticePath(self.steps[start:])


def path(*steps: int) -> LatticePath:
    """Convenience constructor: ``path(1, -1, 1)``."""
    return LatticePath(tuple(steps))


@dataclass(frozen=True)
class LocalTimeProfile:
    """Visit counts per site over times 1..m (time 0 excluded)."""

    counts: dict[int, int]

    def total(self) -> int:
        return sum(self.counts.values())

    def max_count(self) -> int:
        return max(self.counts.values(), default=0)

    def __getitem__(self, site: int) -> int:
        return self.counts.get(site, 0)


def local_time_profile(p: LatticePath) -> LocalTimeProfile:
    """Visit counts of every site at times 1..m.  Sum of counts = length."""
    counts: dict[int, int] = {}
    pos = 0
    for s in p.steps:
        pos += s
        counts[pos] = counts.get(pos, 0) + 1
    return LocalTimeProfile(counts)


def first_hit(p: LatticePath, level: int) -> Optional[int]:
    """Smallest i >= 1 with S_i = level, or None if the path never hits it.

    The walk's start does not count as a hit of level 0; the convention
    that level 0 is hit at time 0 is the caller's business.
    """
    pos = 0
    for i, s in enumerate(p.steps, start=1):
        pos += s
        if pos == level:
            return i
    return None


# -- Exact dyadic arithmetic --------------------------------------------------


@dataclass(frozen=True)
class DyadicProb:
    """An exact nonnegative dyadic rational ``numerator / 2**exponent``.

    Arithmetic is exact integer arithmetic; values are kept normalized
    (odd numerator unless zero) so equal values compare equal and
    serialize identically regardless of how they were accumulated.
    """

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.numerator < 0 or self.exponent < 0:
            raise ValueError("numerator and exponent must be nonnegative")
        n, e = self.numerator, self.exponent
        if n == 0:
            e = 0
        else:
            while n % 2 == 0 and e > 0:
                n //= 2
                e -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    def __add__(self, other: "DyadicProb") -> "DyadicProb":
        e = max(self.exponent, other.exponent)
        n = (self.numerator << (e - self.exponent)) + (
            other.numerator << (e - other.exponent)
        )
        return DyadicProb(n, e)

    def __mul__(self, other: "DyadicProb") -> "DyadicProb":
        return DyadicProb(self.numerator * other.numerator,
                          self.exponent + other.exponent)

    def _cmp_key(self, other: "DyadicProb") -> tuple[int, int]:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent),
                other.numerator << (e - other.exponent))

    def __le__(self, other: "DyadicProb") -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __lt__(self, other: "DyadicProb") -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2 ** self.exponent)

    def as_float(self) -> float:
        """Float crossing point of the exact world; lossy past 2^53."""
        return float(self.as_fraction())

    def to_json(self) -> dict:
        """Decimal-string serialization; exact payloads never become floats."""
        return {"numerator": str(self.numerator), "exponent": self.exponent}

    @staticmethod
    def from_json(obj: dict) -> "DyadicProb":
        return DyadicProb(int(obj["numerator"]), int(obj["exponent"]))


DyadicProb.ZERO = DyadicProb(0, 0)
DyadicProb.ONE = DyadicProb(1, 0)


@dataclass(frozen=True)
class ProbInterval:
    """A rigorous probability bracket [lower, upper], exact rationals."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError("need 0 <= lower <= upper <= 1")

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def to_json(self) -> dict:
        return {
            "lower": {"numerator": str(self.lower.numerator),
                      "denominator": str(self.lower.denominator)},
            "upper": {"numerator": str(self.upper.numerator),
                      "denominator": str(self.upper.denominator)},
        }


# -- Event parameters ---------------------------------------------------------


@dataclass(frozen=True)
class EventParams:
    """Visit cap L0 and target level n for the walk events.

    L0 = 1 is accepted for exploration but warned about: the regenerative
    analysis this package implements assumes L0 >= 2.
    """

    L0: int
    n: int = 0

    def __post_init__(self):
        if self.L0 < 1:
            raise ValueError("L0 must be >= 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.L0 == 1:
            warnings.warn("L0 = 1 is outside the supported analysis (L0 >= 2); "
                          "results are exploratory", stacklevel=2)


# -- Event predicates ----------------------------------------------------------


def is_confined_reach(p: LatticePath, params: EventParams) -> bool:
    """Does the path realize the confined-reach event (tag "B+") for level n?

    True iff the path ends at its first hit of n, its interior stays
    strictly inside (0, n), and every visit count is at most L0.  For
    n = 0 the event is the certain event, realized by the empty path.
    """
    n = params.n
    m = p.length
    if n == 0:
        return m == 0
    if m == 0:
        return False
    pos = p.positions
    if pos[m] != n:
        return False
    for i in range(1, m):
        if not 0 < pos[i] < n:
            return False
    return local_time_profile(p).max_count() <= params.L0


def _split_indices(positions: tuple[int, ...]) -> list[int]:
    """Indices 0 < j < m with max(positions[:j]) < positions[j] < min(positions[j+1:]).

    Such a j is an internal regeneration: the level positions[j] is hit
    exactly once, everything before sits strictly below and everything
    after strictly above.
    """
    m = len(positions) - 1
    if m < 2:
        return []
    prefix_max = [positions[0]]
    for i in range(1, m):
        prefix_max.append(max(prefix_max[-1], positions[i]))
    suffix_min = [0] * (m + 1)
    suffix_min[m] = positions[m]
    for i in range(m - 1, 0, -1):
        suffix_min[i] = min(positions[i], suffix_min[i + 1])
    out = []
    for j in range(1, m):
        if prefix_max[j - 1] < positions[j] < suffix_min[j + 1]:
            out.append(j)
    return out


def is_irreducible(p: LatticePath, params: EventParams) -> bool:
    """Does a confined-reach path admit no internal regeneration split?

    A split at level 0 < k < n cuts the path at the first hit of k into a
    confined-reach prefix for k and a shifted confined-reach suffix for
    n - k.  Irreducible means no such k exists (tag "L").  Raises if the
    path is not a confined-reach path for params -- callers filter first.
    """
    if not is_confined_reach(p, params):
        raise ValueError("is_irreducible requires a confined-reach path")
    n = params.n
    if n == 0:
        return False  # the n = 0 irreducible event is empty by convention
    for k in range(1, n):
        t = first_hit(p, k)
        if t is None:
            continue
        prefix = LatticePath(p.steps[:t])
        suffix = p.shifted_suffix(t)
        if is_confined_reach(prefix, EventParams(params.L0, k)) and \
           is_confined_reach(suffix, EventParams(params.L0, n - k)):
            return False
    return True


def regeneration_levels(p: LatticePath) -> list[tuple[int, int]]:
    """Certified regeneration levels of a finite prefix, as (level, hit time).

    A level nu >= 1 is reported when it is hit exactly once within the
    prefix and every strictly later position exceeds it.  Levels hit at
    the last step are uncertifiable inside the prefix (nothing later to
    check) and are excluded.
    """
    pos = p.positions
    m = p.length
    out = []
    suffix_min = [0] * (m + 1)
    if m >= 1:
        suffix_min[m] = pos[m]
        for i in range(m - 1, 0, -1):
            suffix_min[i] = min(pos[i], suffix_min[i + 1])
    prefix_max = 0
    for j in range(1, m):  # j = m excluded: boundary, uncertifiable
        if prefix_max < pos[j] < suffix_min[j + 1]:
            out.append((pos[j], j))
        prefix_max = max(prefix_max, pos[j])
    return out


def in_excursion_class(p: LatticePath, params: EventParams,
                       allow_negative: bool) -> bool:
    """Membership in the irreducible-excursion classes behind the limit law.

    The class collects step sequences whose final position is a strict
    maximum, whose sites are visited at most L0 times *counting the start
    at time 0*, and which contain no internal regeneration split.  With
    ``allow_negative=False`` the interior must additionally stay strictly
    positive (the law of every excursion after the first); with
    ``allow_negative=True`` dips below 0 are allowed (first-excursion
    class).  The empty path belongs to the first-excursion class only.
    """
    m = p.length
    if m == 0:
        return allow_negative
    pos = p.positions
    final = pos[m]
    if any(pos[i] >= final for i in range(m)):
        return False
    profile = local_time_profile(p)
    # The start counts here, unlike in the reach events.
    if profile[0] + 1 > params.L0:
        return False
    if profile.max_count() > params.L0:
        return False
    if not allow_negative and any(pos[i] <= 0 for i in range(1, m + 1)):
        return False
    return not _split_indices(pos)


# -- Enumeration helper --------------------------------------------------------


def iter_paths(length: int) -> Iterator[LatticePath]:
    """All 2^length step sequences of the given length (test helper)."""
    if length == 0:
        yield LatticePath(())
        return
    for mask in range(1 << length):
        yield LatticePath(tuple(1 if mask >> i & 1 else -1
                                for i in range(length)))
