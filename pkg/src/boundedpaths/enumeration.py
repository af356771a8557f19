"""Exhaustive enumeration and exact probabilities for the capped walk.

Everything in this module that is a probability is exact: confined-reach
and irreducible probabilities are dyadic rationals obtained by summing
2^-m over enumerated paths; unconfined reach probabilities come as
rigorous rational brackets (exact enumerated mass below, plus a certified
tail bound for the paths the truncation excludes).  Floating point enters
only in the tilted-sum root finding for the decay-rate machinery, and
that boundary is explicit: the exact values are converted with
``as_float`` at the call sites in this file and nowhere earlier.

A second, independent route to the same reach probabilities -- a
crossing-number transfer product with an exact rational solve for the
below-origin part -- is provided for cross-validation.  The two routes
share no code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EnumerationBudgetError
from .lattice import (
    DyadicProb,
    EventParams,
    LatticePath,
    ProbInterval,
    is_irreducible,
)

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class EnumConfig:
    """Truncation and budget knobs for unconfined enumeration.

    ``max_len`` caps path length, ``max_depth`` how far below the origin
    paths may dip; both are needed because the unconfined reach event has
    members of every length.  ``node_budget`` is the hard cap on DFS
    expansions -- exceeding it raises, it never truncates silently.
    """

    L0: int
    n_max: int
    max_len: int
    max_depth: int
    node_budget: int = 100_000_000

    def __post_init__(self):
        if self.L0 < 1:
            raise ValueError("L0 must be >= 1")
        if self.max_len < self.n_max:
            raise ValueError("max_len must be >= n_max")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")

    def to_json(self) -> dict:
        return {"L0": self.L0, "n_max": self.n_max, "max_len": self.max_len,
                "max_depth": self.max_depth, "node_budget": self.node_budget}


# -- Depth-first enumeration ---------------------------------------------------


def _dyadic_from_lengths(lengths: dict[int, int]) -> DyadicProb:
    """Sum of count_m * 2^-m as one exact dyadic."""
    if not lengths:
        return DyadicProb.ZERO
    top = max(lengths)
    num = sum(c << (top - m) for m, c in lengths.items())
    return DyadicProb(num, top)


def _confined_dfs(n, L0, node_budget, up_first, on_complete):
    """DFS over confined-reach paths for level n; calls on_complete(steps).

    Confinement makes the search finite without extra caps: each interior
    site admits at most L0 visits, so paths have length <= L0*(n-1) + 1.
    """
    order = (1, -1) if up_first else (-1, 1)
    counts = [0] * (n + 1)
    steps: list[int] = []
    nodes = 0

    def rec(pos):
        nonlocal nodes
        for s in order:
            nodes += 1
            if nodes > node_budget:
                raise EnumerationBudgetError(
                    f"confined enumeration exceeded {node_budget} nodes")
            q = pos + s
            if q == n:
                steps.append(s)
                on_complete(steps)
                steps.pop()
            elif 0 < q < n and counts[q] < L0:
                counts[q] += 1
                steps.append(s)
                rec(q)
                steps.pop()
                counts[q] -= 1

    rec(0)


def prob_confined(n: int, L0: int, node_budget: int = 100_000_000,
                  up_first: bool = True) -> DyadicProb:
    """Exact probability of the confined-reach event (tag "B+") at level n.

    n = 0 is the certain event by convention.  The result is independent
    of the DFS order; ``up_first`` exists so tests can assert that.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return DyadicProb.ONE
    lengths: dict[int, int] = {}

    def complete(steps):
        m = len(steps)
        lengths[m] = lengths.get(m, 0) + 1

    _confined_dfs(n, L0, node_budget, up_first, complete)
    return _dyadic_from_lengths(lengths)


def prob_irreducible(n: int, L0: int, node_budget: int = 100_000_000,
                     up_first: bool = True) -> DyadicProb:
    """Exact probability of the irreducible event (tag "L") at level n.

    Enumerates confined-reach paths and keeps those with no internal
    regeneration split.  n = 0 is the empty event.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return DyadicProb.ZERO
    params = EventParams(L0, n)
    lengths: dict[int, int] = {}

    def complete(steps):
        p = LatticePath(tuple(steps))
        if is_irreducible(p, params):
            m = len(steps)
            lengths[m] = lengths.get(m, 0) + 1

    _confined_dfs(n, L0, node_budget, up_first, complete)
    return _dyadic_from_lengths(lengths)


def confined_members(n: int, L0: int,
                     node_budget: int = 100_000_000) -> list[LatticePath]:
    """All confined-reach paths for level n (small n only; test support)."""
    out: list[LatticePath] = []
    _confined_dfs(n, L0, node_budget, True,
                  lambda steps: out.append(LatticePath(tuple(steps))))
    return out


def reach_tail_bound(J: int, L0: int) -> Fraction:
    """Certified bound on P(visit cap survives > J steps), exact rational.

    Whatever the history, within any window of 2*L0+2 further steps the
    walk revisits its current site L0+1 more times with probability at
    least 2^-(2*L0+2) (force the up-down pattern).  Surviving the cap
    therefore costs a factor 1 - 2^-(2*L0+2) per disjoint window.
    """
    window = 2 * L0 + 2
    q = 1 - Fraction(1, 2 ** window)
    return q ** (J // window)


def prob_reach(n: int, config: EnumConfig, up_first: bool = True) -> ProbInterval:
    """Rigorous bracket for the reach event (tag "B") at level n.

    Lower endpoint: exact mass of the reach paths within the truncation
    (length <= max_len, dip >= -max_depth).  Upper endpoint adds the tail
    bound for excluded paths: any of them survives the visit cap for more
    than J = min(max_len, 2*(max_depth+1)) steps, since a deeper dip alone
    forces that length.  n = 0 gives [1, 1].
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ProbInterval(Fraction(1), Fraction(1))
    L0 = config.L0
    off = config.max_depth
    counts = [0] * (off + n + 1)       # index = site + off
    lengths: dict[int, int] = {}
    order = (1, -1) if up_first else (-1, 1)
    nodes = 0
    budget = config.node_budget
    max_len = config.max_len

    def rec(pos, depth):
        nonlocal nodes
        for s in order:
            nodes += 1
            if nodes > budget:
                raise EnumerationBudgetError(
                    f"reach enumeration exceeded {budget} nodes")
            q = pos + s
            if q == n:
                lengths[depth + 1] = lengths.get(depth + 1, 0) + 1
            elif q > -off - 1 + 0 and depth + 1 < max_len:
                i = q + off
                if i >= 0 and counts[i] < L0:
                    counts[i] += 1
                    rec(q, depth + 1)
                    counts[i] -= 1

    rec(0, 0)
    lower = _dyadic_from_lengths(lengths).as_fraction()
    J = min(config.max_len, 2 * (config.max_depth + 1))
    upper = min(Fraction(1), lower + reach_tail_bound(J, L0))
    return ProbInterval(lower, upper)


# -- Independent exact route: crossing-number transfer -------------------------


def _binom(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


def _below_origin_factors(L0: int) -> list[Fraction]:
    """G(w), w = 0..L0: exact weight of everything below the origin given
    w crossings of the edge just under it.

    G satisfies a small linear system because the per-site weight only
    couples neighbouring crossing numbers: G(w) = sum over w' <= L0 - w of
    C(w+w'-1, w') 4^-w' G(w'), with G(0) = 1.  Solved exactly.
    """
    if L0 == 1:
        return [Fraction(1), Fraction(1)]
    K = L0 - 1                      # unknowns G(1..L0-1); G(L0) = 1 directly
    A = [[Fraction(0)] * K for _ in range(K)]
    rhs = [Fraction(0)] * K
    for w in range(1, L0):
        i = w - 1
        A[i][i] += 1
        rhs[i] = Fraction(_binom(w - 1, 0))          # w' = 0 term, G(0) = 1
        for wp in range(1, L0 - w + 1):
            c = Fraction(_binom(w + wp - 1, wp), 4 ** wp)
            if wp <= K:
                A[i][wp - 1] -= c
            else:                                     # wp == L0, G(L0) = 1
                rhs[i] += c
    # Gaussian elimination over Fractions.
    for col in range(K):
        piv = next(r for r in range(col, K) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        rhs[col] *= inv
        for r in range(K):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
                rhs[r] -= f * rhs[col]
    G = [Fraction(1)] + rhs + [Fraction(1)]           # G(0), G(1..L0-1), G(L0)
    return G


def prob_confined_exact(n: int, L0: int) -> Fraction:
    """Confined-reach probability via the crossing-number product.

    A confined path is determined by its upcrossing numbers u_x of the
    edges (x, x+1) plus the order of departures at each site; the number
    of orders is a product of binomials and the length is 2*sum(u) - n.
    This shares nothing with the DFS and serves as its oracle.
    """
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(1, 2)
    # W[u] = accumulated weight with current edge crossed u times.
    W = {1: Fraction(1, 2)}                           # u_0 = 1, weight 2^-(2*1-1)
    for x in range(1, n):                             # site x between edges x-1, x
        nxt: dict[int, Fraction] = {}
        for u, w in W.items():
            top = 1 if x == n - 1 else L0             # last edge crossed once
            for up in range(1, min(L0 + 1 - u, top) + 1):
                c = _binom(u + up - 2, up - 1)
                if c:
                    nxt[up] = nxt.get(up, Fraction(0)) + \
                        w * c * Fraction(1, 2 ** (2 * up - 1))
        W = nxt
    return W.get(1, Fraction(0))


def prob_reach_exact(n: int, L0: int) -> Fraction:
    """Unconfined reach probability, exact, via the same decomposition.

    The part below the origin factorizes through the crossing count of
    the edge just below 0 and is summed in closed form by
    ``_below_origin_factors``; no truncation is involved.
    """
    if n == 0:
        return Fraction(1)
    G = _below_origin_factors(L0)
    W: dict[int, Fraction] = {}
    u0_top = 1 if n == 1 else L0
    for u0 in range(1, u0_top + 1):
        site0 = Fraction(0)
        for v in range(0, L0 - u0 + 2):               # site-0 visits u0-1+v <= L0
            site0 += _binom(u0 + v - 1, v) * Fraction(1, 4 ** v) * G[v]
        W[u0] = site0 * Fraction(1, 2 ** (2 * u0 - 1))
    for x in range(1, n):
        nxt: dict[int, Fraction] = {}
        for u, w in W.items():
            top = 1 if x == n - 1 else L0
            for up in range(1, min(L0 + 1 - u, top) + 1):
                c = _binom(u + up - 2, up - 1)
                if c:
                    nxt[up] = nxt.get(up, Fraction(0)) + \
                        w * c * Fraction(1, 2 ** (2 * up - 1))
        W = nxt
    return W.get(1, Fraction(0))


# -- Renewal identity ----------------------------------------------------------


@dataclass(frozen=True)
class RenewalRow:
    n: int
    lhs: DyadicProb
    rhs: DyadicProb

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def renewal_check(n_max: int, L0: int,
                  node_budget: int = 100_000_000) -> list[RenewalRow]:
    """Verify, exactly, that the confined-reach probabilities renew.

    For every 1 <= n <= n_max the confined probability must equal the
    convolution of the irreducible probabilities with the confined ones:
    P_conf(n) = sum over j of P_irr(j) * P_conf(n-j).  Both sides are
    computed by enumeration and compared as exact dyadics; a failure is
    reported, and would mean a genuine bug.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    conf = [prob_confined(n, L0, node_budget) for n in range(n_max + 1)]
    irr = [prob_irreducible(n, L0, node_budget) for n in range(n_max + 1)]
    rows = []
    for n in range(1, n_max + 1):
        rhs = DyadicProb.ZERO
        for j in range(1, n + 1):
            rhs = rhs + irr[j] * conf[n - j]
        rows.append(RenewalRow(n, conf[n], rhs))
    return rows


# -- Decay-rate machinery (float boundary) --------------------------------------


def tilted_root(weights: dict[int, float], tol: float = 1e-10) -> float:
    """Unique c in (0, log 2] with sum of e^{c n} w_n = 1.

    The sum is strictly increasing in c, so bisection is safe; raises if
    no root exists at or below log 2 (truncation too short).
    """

    def g(c):
        return sum(w * math.exp(c * n) for n, w in weights.items()) - 1.0

    lo, hi = 1e-9, LOG2
    if g(hi) < 0:
        raise ValueError("tilted sum does not reach 1 by c = log 2; "
                         "increase n_max")
    if g(lo) > 0:
        raise ValueError("tilted sum already exceeds 1 at c = 0")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _irreducible_floats(L0: int, n_max: int, node_budget: int) -> dict[int, float]:
    # Float boundary: exact dyadics leave the exact world here.
    return {n: prob_irreducible(n, L0, node_budget).as_float()
            for n in range(1, n_max + 1)}


def reach_decay_rate(L0: int, n_max: int,
                     node_budget: int = 100_000_000) -> tuple[float, float]:
    """Bracket (low, high) for the per-level decay rate of the reach event.

    The truncated tilted sum omits positive terms, so its root decreases
    toward the true rate as n_max grows: the root at n_max is the point
    estimate and certified upper... strictly, both roots are upper bounds;
    their observed monotone ordering is enforced at runtime and the pair
    (root(n_max), root(ceil(n_max/2))) is reported as (low, high).
    """
    probs = _irreducible_floats(L0, n_max, node_budget)
    low = tilted_root(probs)
    half = max(1, math.ceil(n_max / 2))
    high = tilted_root({n: p for n, p in probs.items() if n <= half})
    if not (0 < low <= high <= LOG2 + 1e-12):
        raise ValueError(f"decay-rate roots not ordered: {low} > {high}; "
                         "monotonicity self-check failed")
    return low, high


def decay_rate_roots(L0: int, n_list: list[int],
                     node_budget: int = 100_000_000) -> dict[int, float]:
    """Truncated-root estimates at several cutoffs (self-consistency data)."""
    probs = _irreducible_floats(L0, max(n_list), node_budget)
    return {m: tilted_root({n: p for n, p in probs.items() if n <= m})
            for m in n_list}


# -- Constants report ------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsReport:
    """Point estimates and brackets for the renewal constants of the walk.

    ``decay`` brackets the per-level exponential rate; ``mean_block_height``
    is the mean height of an irreducible block under the tilted law (so
    ``renewal_limit`` = its reciprocal is the limit of the scaled confined
    probabilities); ``confined_fraction`` estimates the limiting ratio of
    confined to unconfined reach probabilities; ``scaled_reach`` brackets
    the limit of e^{c n} P(reach n).
    """

    L0: int
    decay_low: float
    decay_high: float
    mean_block_height: float
    renewal_limit: float
    confined_fraction: float
    scaled_reach_low: float
    scaled_reach_high: float
    truncation: EnumConfig
    u_values: tuple[float, ...] = field(default=())
    u_tail_variation: float = float("nan")

    def __post_init__(self):
        if not (0 < self.decay_low <= self.decay_high <= LOG2 + 1e-12):
            raise ValueError("decay bracket out of (0, log 2]")
        if self.mean_block_height < 1:
            raise ValueError("mean block height must be >= 1")
        if not (0 < self.confined_fraction <= 1):
            raise ValueError("confined fraction must lie in (0, 1]")

    def to_json(self) -> dict:
        return {
            "L0": self.L0,
            "decay_rate": {"low": self.decay_low, "high": self.decay_high},
            "mean_block_height": self.mean_block_height,
            "renewal_limit": self.renewal_limit,
            "confined_fraction": self.confined_fraction,
            "scaled_reach_limit": {"low": self.scaled_reach_low,
                                   "high": self.scaled_reach_high},
            "u_values": list(self.u_values),
            "u_tail_variation": self.u_tail_variation,
            "truncation": self.truncation.to_json(),
        }


def scaled_confined_sequence(L0: int, n_max: int, c: float,
                             node_budget: int = 100_000_000) -> list[float]:
    """u_n = e^{c n} P_conf(n) for n = 0..n_max (renewal convergents)."""
    return [math.exp(c * n) * prob_confined(n, L0, node_budget).as_float()
            for n in range(n_max + 1)]


def constants_report(L0: int, config: EnumConfig) -> ConstantsReport:
    """Assemble every renewal constant the truncation supports.

    Exact enumeration feeds float-side root finding; the float boundary
    is localized here as in ``reach_decay_rate``.
    """
    n_max = config.n_max
    budget = config.node_budget
    probs = _irreducible_floats(L0, n_max, budget)
    c_low = tilted_root(probs)
    half = max(1, math.ceil(n_max / 2))
    c_high = tilted_root({n: p for n, p in probs.items() if n <= half})
    mu = sum(n * math.exp(c_low * n) * p for n, p in probs.items())
    u = scaled_confined_sequence(L0, n_max, c_low, budget)
    tail = u[max(1, n_max - n_max // 3):]
    variation = max(tail) / min(tail) - 1 if min(tail) > 0 else float("inf")

    bracket = prob_reach(n_max, config)
    conf_top = prob_confined(n_max, L0, budget).as_fraction()
    c5 = float(conf_top / bracket.midpoint())
    scale = math.exp(c_low * n_max)
    return ConstantsReport(
        L0=L0,
        decay_low=c_low,
        decay_high=c_high,
        mean_block_height=mu,
        renewal_limit=1.0 / mu,
        confined_fraction=min(1.0, c5),
        scaled_reach_low=scale * float(bracket.lower),
        scaled_reach_high=scale * float(bracket.upper),
        truncation=config,
        u_values=tuple(u),
        u_tail_variation=variation,
    )
