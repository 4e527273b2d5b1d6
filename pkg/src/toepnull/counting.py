"""Counting specs by nullity: transition model, dynamic program, closed forms.

The walk of nullity values along an embedding chain is Markov in the
terminal pair (previous nullity, current nullity).  For each pair class
the census of the q^2 one-step extensions is fixed:

    class            pair              census of next nullity
    zero_zero        (0, 0)            0: q^2 - q + 1    1: q - 1
    one_zero         (1, 0)            0: q^2 - q        1: q
    ascending        (d - 1, d)        d+1: 1   d: 2q - 2   d-1: (q - 1)^2
    plateau          (d, d), d >= 1    d: q     d-1: q^2 - q
    descending       (d, d - 1), d>=2  d-2: q^2

Every row sums to q^2.  Summing products of these weights over the
order-0 start (q - 1 invertible 1 x 1 matrices in state (0, 0), one
zero matrix in state (0, 1), a virtual nullity 0 in front) counts specs
exactly; the ``enumeration`` module validates that claim wholesale.

Everything here is exact integer arithmetic; counts get large fast and
stay correct.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Sequence, Tuple

from .field import is_prime


class RuleClass(Enum):
    """The five terminal-pair classes with distinct extension censuses."""

    ZERO_ZERO = "zero_zero"
    ONE_ZERO = "one_zero"
    ASCENDING = "ascending"
    PLATEAU = "plateau"
    DESCENDING = "descending"


@dataclass(frozen=True)
class PairState:
    """Terminal pair (previous nullity, current nullity) of a spec.

    For an order-0 spec the previous nullity is the virtual value 0.
    """

    prev: int
    cur: int

    def __post_init__(self) -> None:
        for v in (self.prev, self.cur):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"nullities are nonnegative integers, got {v!r}")
        if abs(self.cur - self.prev) > 1:
            raise ValueError(
                f"consecutive nullities differ by at most 1, got {self.prev, self.cur}"
            )

    @property
    def rule_class(self) -> RuleClass:
        if self.cur == self.prev + 1:
            return RuleClass.ASCENDING
        if self.cur == 0:
            return RuleClass.ZERO_ZERO if self.prev == 0 else RuleClass.ONE_ZERO
        if self.cur == self.prev:
            return RuleClass.PLATEAU
        return RuleClass.DESCENDING


def _check_modulus(q: int) -> None:
    if not isinstance(q, int) or isinstance(q, bool) or not is_prime(q):
        raise ValueError(f"modulus must be a prime integer, got {q!r}")


def transition_weights(state: PairState, q: int) -> Tuple[Tuple[int, int], ...]:
    """Census over the q^2 one-step extensions as (next nullity, count) pairs."""
    _check_modulus(q)
    c = state.cur
    cls = state.rule_class
    if cls is RuleClass.ZERO_ZERO:
        return ((0, q * q - q + 1), (1, q - 1))
    if cls is RuleClass.ONE_ZERO:
        return ((0, q * q - q), (1, q))
    if cls is RuleClass.ASCENDING:
        return ((c + 1, 1), (c, 2 * q - 2), (c - 1, (q - 1) ** 2))
    if cls is RuleClass.PLATEAU:
        return ((c, q), (c - 1, q * q - q))
    return ((c - 1, q * q),)


# ---------------------------------------------------------------------------
# dynamic program over pair states


def _initial_distribution(q: int) -> Dict[PairState, int]:
    # order 0: a_0 != 0 gives nullity 0, a_0 == 0 gives nullity 1,
    # with a virtual previous nullity of 0 in both cases
    return {PairState(0, 0): q - 1, PairState(0, 1): 1}


def _step(dist: Dict[PairState, int], q: int) -> Dict[PairState, int]:
    nxt: Dict[PairState, int] = {}
    for state, mass in dist.items():
        for value, weight in transition_weights(state, q):
            key = PairState(state.cur, value)
            nxt[key] = nxt.get(key, 0) + mass * weight
    return nxt


def state_distribution(n: int, q: int) -> Dict[PairState, int]:
    """How many order-n specs end in each terminal pair, per the model."""
    _check_modulus(q)
    if n < 0:
        raise ValueError("order must be nonnegative")
    dist = _initial_distribution(q)
    for _ in range(n):
        dist = _step(dist, q)
    return dist


@dataclass(frozen=True)
class CountTable:
    """N(m, nu) for 0 <= m <= n: row m holds counts for nu = 0 .. m+1."""

    q: int
    counts: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    def row(self, m: int) -> Tuple[int, ...]:
        return self.counts[m]

    def count(self, m: int, nu: int) -> int:
        if not 0 <= m <= self.n:
            raise ValueError(f"order {m} outside this table (0..{self.n})")
        if not 0 <= nu <= m + 1:
            raise ValueError(f"nullity {nu} impossible at order {m}")
        return self.counts[m][nu]


def count_table(n: int, q: int) -> CountTable:
    """Counts of order-m specs by nullity for all m <= n, by the weight DP."""
    _check_modulus(q)
    if n < 0:
        raise ValueError("order must be nonnegative")
    rows: List[Tuple[int, ...]] = []
    dist = _initial_distribution(q)
    for m in range(n + 1):
        by_nu: Dict[int, int] = {}
        for state, mass in dist.items():
            by_nu[state.cur] = by_nu.get(state.cur, 0) + mass
        rows.append(tuple(by_nu.get(nu, 0) for nu in range(m + 2)))
        if m < n:
            dist = _step(dist, q)
    return CountTable(q=q, counts=tuple(rows))


def rank_spectrum(n: int, q: int) -> Dict[int, int]:
    """Counts of order-n specs by rank, highest rank first."""
    table = count_table(n, q)
    row = table.row(n)
    return {n + 1 - nu: row[nu] for nu in range(n + 2)}


@dataclass(frozen=True)
class ThetaEta:
    """Counts of order-n specs ending (0,0) [theta] and (1,0) [eta]."""

    n: int
    theta: int
    eta: int


def theta_eta(n: int) -> ThetaEta:
    """Terminal-pair split of the invertible order-n count over GF(2), from the DP."""
    if n < 1:
        raise ValueError("terminal-pair split needs order >= 1")
    dist = state_distribution(n, 2)
    return ThetaEta(
        n=n,
        theta=dist.get(PairState(0, 0), 0),
        eta=dist.get(PairState(1, 0), 0),
    )


# ---------------------------------------------------------------------------
# weighted string counting


def count_string(start: PairState, values: Sequence[int], q: int) -> int:
    """Number of extension chains realizing ``values`` from a ``start`` pair.

    ``values`` restates the current nullity as its first entry (matching
    how tent strings are usually written) and continues with the
    proposed successors; each successor multiplies in its census weight.
    An empty ``values`` counts the base spec itself: 1.

    Raises ValueError when the string does not start at ``start.cur`` or
    takes a step the grammar forbids; the message names the position.
    """
    _check_modulus(q)
    vals = list(values)
    if not vals:
        return 1
    if vals[0] != start.cur:
        raise ValueError(
            f"position 0: string starts at {vals[0]}, state is at {start.cur}"
        )
    state = start
    total = 1
    for pos in range(1, len(vals)):
        v = vals[pos]
        weight = None
        for value, w in transition_weights(state, q):
            if value == v:
                weight = w
                break
        if weight is None:
            raise ValueError(
                f"position {pos}: step {state.cur} -> {v} is not grammar-legal"
            )
        total *= weight
        state = PairState(state.cur, v)
    return total


# ---------------------------------------------------------------------------
# all-positive walks


def _positive_distribution(n: int, q: int) -> Dict[PairState, int]:
    """Mass over pair states after n steps from a fresh nullity-1 start,
    never touching 0."""
    dist = {PairState(0, 1): 1}
    for _ in range(n):
        nxt: Dict[PairState, int] = {}
        for state, mass in dist.items():
            for value, weight in transition_weights(state, q):
                if value >= 1:
                    key = PairState(state.cur, value)
                    nxt[key] = nxt.get(key, 0) + mass * weight
        dist = nxt
    return dist


def positive_excursion_count(n: int, q: int) -> int:
    """Weighted count of length-n excursions: nullity 1 at the start,
    positive throughout, back to 0 exactly at step n."""
    _check_modulus(q)
    if n < 1:
        raise ValueError("an excursion needs at least one step")
    dist = _positive_distribution(n - 1, q)
    total = 0
    for state, mass in dist.items():
        for value, weight in transition_weights(state, q):
            if value == 0:
                total += mass * weight
    return total


def nullity1_structured_count(n: int) -> int:
    """Order-n GF(2) specs of nullity 1 whose whole nullity string stays
    positive."""
    if n < 1:
        raise ValueError("needs order >= 1")
    dist = _positive_distribution(n, 2)
    return sum(mass for state, mass in dist.items() if state.cur == 1)


def iter_positive_strings(length: int) -> Iterator[Tuple[int, ...]]:
    """All grammar-valid strings of exactly ``length`` values with every
    value positive (so they start at 1).  Depth-first, ascending."""
    if length < 1:
        return

    def walk(prefix: Tuple[int, ...], prev: int, cur: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == length:
            yield prefix
            return
        for nxt in _positive_next(prev, cur):
            yield from walk(prefix + (nxt,), cur, nxt)

    yield from walk((1,), 0, 1)


def _positive_next(prev: int, cur: int) -> Tuple[int, ...]:
    if prev < cur:
        return (cur - 1, cur, cur + 1) if cur > 1 else (cur, cur + 1)
    if prev == cur:
        return (cur - 1, cur) if cur > 1 else (cur,)
    return (cur - 1,) if cur > 1 else ()


def positive_string_counts(m: int, k: int) -> int:
    """P(m, k): all-positive strings of length m + 1 ending at k.

    Counted by explicitly enumerating the strings, not by weights, so it
    is an independent companion to the weighted counts above.
    """
    if m < 0:
        raise ValueError("length index must be nonnegative")
    if k < 1:
        raise ValueError("an all-positive string cannot end below 1")
    return sum(1 for s in iter_positive_strings(m + 1) if s[-1] == k)


# ---------------------------------------------------------------------------
# closed forms over GF(2)


def closed_theta(n: int) -> int:
    """(2^(2n+1) + 1) / 3, the closed form for the (0, 0) terminal count."""
    if n < 1:
        raise ValueError("closed form defined for n >= 1")
    value, rem = divmod(2 ** (2 * n + 1) + 1, 3)
    assert rem == 0
    return value


def closed_eta(n: int) -> int:
    """(2^(2n) - 1) / 3, the closed form for the (1, 0) terminal count."""
    if n < 1:
        raise ValueError("closed form defined for n >= 1")
    value, rem = divmod(2 ** (2 * n) - 1, 3)
    assert rem == 0
    return value


def invertible_formula(n: int) -> int:
    """Summed-up count of invertible order-n GF(2) specs.

    Assembles the invertible count from first-singularity positions and
    the theta/eta closed forms; must reproduce 4^n.
    """
    if n < 2:
        raise ValueError("formula defined for n >= 2")
    total = n * 2 ** (n - 1) + (n - 1) * 2 ** (n - 2)
    for j in range(1, n - 1):
        total += (closed_theta(j) + 2 * closed_eta(j)) * ((n - 1) - j) * 2 ** (n - 2 - j)
    total += 3 * closed_theta(n - 1) + 2 * closed_eta(n - 1)
    return total


def nullity_count_closed(n: int, k: int) -> int:
    """Closed-form N(n, k) over GF(2): 4^n invertible, 3 * 4^(n-k) for
    nullity 1 <= k <= n, and exactly one spec (all zeros) of nullity n+1."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    if not 0 <= k <= n + 1:
        raise ValueError(f"nullity {k} impossible at order {n}")
    if k == 0:
        return 4**n
    if k == n + 1:
        return 1
    return 3 * 4 ** (n - k)
