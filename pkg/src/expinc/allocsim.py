"""Equilibrium income allocations: counting, occupancy multiplicity and uniform sampling.

An allocation gives each of ``N`` labelled agents an integer income from a
set of levels so that the incomes add up to ``Y``. Grouping allocations by
their occupancy vector ``a_k`` (how many agents sit at level ``eps_k``), the
number of allocations realising an occupancy is the multinomial coefficient
``N! / prod_k a_k!`` and its entropy is the log of that count. When every
allocation is equally likely, the occupancy of maximal multiplicity is the
most probable income distribution, and it is exponential in shape.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    BelowSupport,
    ConstraintViolation,
    EmptyInput,
    NegativeSigma,
    SearchSpaceTooLarge,
)
from .expofit import ExponentialLaw

MAX_OCCUPANCIES = 5_000_000


@dataclass(frozen=True)
class AllocationSpace:
    n_agents: int
    total_income: int
    levels: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_agents < 1:
            raise ConstraintViolation(f"n_agents must be >= 1, got {self.n_agents}")
        if self.total_income < 0:
            raise ConstraintViolation(f"total_income must be >= 0, got {self.total_income}")
        levels = tuple(range(self.total_income + 1)) if self.levels is None else tuple(int(v) for v in self.levels)
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ConstraintViolation("levels must be strictly increasing")
        if not levels or levels[0] < 0:
            raise ConstraintViolation("levels must be non-empty and non-negative")
        object.__setattr__(self, "levels", levels)

    @property
    def default_levels(self) -> bool:
        return self.levels == tuple(range(self.total_income + 1))


@dataclass(frozen=True)
class Allocation:
    incomes: tuple[int, ...]

    def check(self, space: AllocationSpace) -> None:
        allowed = set(space.levels)
        if len(self.incomes) != space.n_agents:
            raise ConstraintViolation(f"expected {space.n_agents} incomes, got {len(self.incomes)}")
        if any(i not in allowed for i in self.incomes):
            raise ConstraintViolation("income outside the allowed levels")
        if sum(self.incomes) != space.total_income:
            raise ConstraintViolation(f"incomes sum to {sum(self.incomes)}, not {space.total_income}")


@dataclass(frozen=True)
class Occupancy:
    """Agents per income level, with multiplicity ``Omega`` and entropy ``ln Omega``."""

    counts: Mapping[int, int]
    multiplicity: int
    entropy: float

    def vector(self, levels: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.counts.get(lv, 0) for lv in levels)


def count_allocations(space: AllocationSpace) -> int:
    """Number of allocations, ``C(Y + N - 1, N - 1)`` for the default levels ``0..Y``."""
    n, y = space.n_agents, space.total_income
    if space.default_levels:
        return math.comb(y + n - 1, n - 1)
    ways = [1] + [0] * y
    for _ in range(n):
        nxt = [0] * (y + 1)
        for s, w in enumerate(ways):
            if w:
                for lv in space.levels:
                    if s + lv > y:
                        break
                    nxt[s + lv] += w
        ways = nxt
    return ways[y]


def multinomial(counts: Sequence[int]) -> int:
    """``(sum counts)! / prod(c!)`` as an exact integer."""
    total, out = 0, 1
    for c in counts:
        total += c
        out *= math.comb(total, c)
    return out


def _make(counts: Mapping[int, int], multiplicity: int) -> Occupancy:
    nonzero = {lv: c for lv, c in sorted(counts.items()) if c}
    return Occupancy(counts=nonzero, multiplicity=multiplicity, entropy=math.log(multiplicity))


def occupancy_multiplicity(space: AllocationSpace, counts: Mapping[int, int]) -> Occupancy:
    """Multiplicity and entropy of one occupancy, after checking both sum constraints."""
    allowed = set(space.levels)
    bad = [lv for lv in counts if lv not in allowed]
    if bad:
        raise ConstraintViolation(f"levels {bad} are not in the allocation space")
    if any(c < 0 for c in counts.values()):
        raise ConstraintViolation("counts must be non-negative")
    agents = sum(counts.values())
    income = sum(lv * c for lv, c in counts.items())
    if agents != space.n_agents:
        raise ConstraintViolation(f"counts cover {agents} agents, expected {space.n_agents}")
    if income != space.total_income:
        raise ConstraintViolation(f"counts carry income {income}, expected {space.total_income}")
    return _make(counts, multinomial(list(counts.values())))


def count_occupancies(space: AllocationSpace, cap: int | None = None) -> int:
    """Number of occupancy vectors; stops early and returns ``cap + 1`` once above ``cap``."""
    n, y = space.n_agents, space.total_income
    limit = None if cap is None else cap + 1
    # f[r, s]: multisets of r levels summing to s, over the levels seen so far
    f = np.zeros((n + 1, y + 1), dtype=object if limit is None else np.int64)
    f[0, 0] = 1
    for lv in space.levels:
        if lv > y:
            break
        for r in range(1, n + 1):
            if lv == 0:
                f[r] += f[r - 1]
            else:
                f[r, lv:] += f[r - 1, : y + 1 - lv]
            if limit is not None:
                np.minimum(f[r], limit, out=f[r])
        if limit is not None and f[n, y] >= limit:
            return limit
    return int(f[n, y])


def _walk(levels: Sequence[int], n: int, y: int) -> Iterator[tuple[list[tuple[int, int]], int]]:
    """Yield ``(nonzero (level, count) pairs, prod of count factorials)`` for every occupancy.

    The yielded list is reused; copy it to keep it.
    """
    chosen: list[tuple[int, int]] = []
    fact = [math.factorial(k) for k in range(n + 1)]

    def rec(i: int, r: int, s: int, denom: int):
        if i == 0:
            lv = levels[0]
            if r * lv == s:
                if r:
                    chosen.append((lv, r))
                yield chosen, denom * fact[r]
                if r:
                    chosen.pop()
            return
        lv, below_lo, below_hi = levels[i], levels[0], levels[i - 1]
        for c in range(min(r, s // lv if lv else r) + 1):
            r2, s2 = r - c, s - c * lv
            if r2 * below_lo <= s2 <= r2 * below_hi:
                if c:
                    chosen.append((lv, c))
                yield from rec(i - 1, r2, s2, denom * fact[c])
                if c:
                    chosen.pop()

    top = len(levels) - 1
    while top > 0 and levels[top] > y:
        top -= 1
    yield from rec(top, n, y, 1)


def iter_occupancies(space: AllocationSpace, cap: int = MAX_OCCUPANCIES) -> Iterator[Occupancy]:
    """Every occupancy vector of the space with its multiplicity."""
    total = count_occupancies(space, cap)
    if total > cap:
        raise SearchSpaceTooLarge(f"more than {cap} occupancy vectors for N={space.n_agents}, Y={space.total_income}")
    nfact = math.factorial(space.n_agents)
    for pairs, denom in _walk(space.levels, space.n_agents, space.total_income):
        yield _make(dict(pairs), nfact // denom)


def argmax_occupancy(space: AllocationSpace, cap: int = MAX_OCCUPANCIES) -> Occupancy:
    """Occupancy of maximal multiplicity by exhaustive search.

    Ties go to the lexicographically smallest count vector ``(a_0, a_1, ...)``
    taken in ascending level order.
    """
    total = count_occupancies(space, cap)
    if total > cap:
        raise SearchSpaceTooLarge(f"more than {cap} occupancy vectors for N={space.n_agents}, Y={space.total_income}")
    levels = space.levels
    best_denom, best_vec = None, None
    for pairs, denom in _walk(levels, space.n_agents, space.total_income):
        if best_denom is not None and denom > best_denom:
            continue
        d = dict(pairs)
        vec = tuple(d.get(lv, 0) for lv in levels)
        if best_denom is None or denom < best_denom or vec < best_vec:
            best_denom, best_vec = denom, vec
    counts = dict(zip(levels, best_vec))
    return _make(counts, math.factorial(space.n_agents) // best_denom)


def iter_allocations(space: AllocationSpace) -> Iterator[Allocation]:
    """Every allocation, in lexicographic order. Only sensible for tiny spaces."""
    n, y = space.n_agents, space.total_income
    levels = [lv for lv in space.levels if lv <= y]
    for combo in itertools.product(levels, repeat=n - 1):
        last = y - sum(combo)
        if last in space.levels:
            yield Allocation(tuple(combo) + (last,))


def sample_uniform_array(space: AllocationSpace, seed: int | None, m: int) -> np.ndarray:
    """``m`` uniform random allocations as an ``(m, N)`` integer array.

    Stars and bars: a composition of ``Y`` into ``N`` parts is a choice of
    ``N - 1`` bar positions among ``Y + N - 1`` slots. A uniform subset is the
    set of slots carrying the ``N - 1`` smallest i.i.d. uniform keys. Keys
    come from ``numpy.random.default_rng(seed)`` (PCG64), so a seed fixes the
    draws on every platform.
    """
    if not space.default_levels:
        raise ConstraintViolation("uniform sampling requires the default levels 0..Y")
    n, y = space.n_agents, space.total_income
    k, slots = n - 1, y + n - 1
    if k == 0:
        return np.full((m, 1), y, dtype=np.int64)
    if k == slots:
        return np.zeros((m, n), dtype=np.int64)
    rng = np.random.default_rng(seed)
    out = np.empty((m, n), dtype=np.int64)
    chunk = max(1, 4_000_000 // slots)
    for start in range(0, m, chunk):
        stop = min(m, start + chunk)
        keys = rng.random((stop - start, slots))
        cuts = np.sort(np.argpartition(keys, k - 1, axis=1)[:, :k], axis=1)
        edges = np.concatenate(
            [np.full((stop - start, 1), -1), cuts, np.full((stop - start, 1), slots)], axis=1
        )
        out[start:stop] = np.diff(edges, axis=1) - 1
    return out


def sample_uniform(space: AllocationSpace, seed: int | None, m: int) -> list[Allocation]:
    """``m`` independent allocations, each equally likely."""
    return [Allocation(tuple(int(v) for v in row)) for row in sample_uniform_array(space, seed, m)]


def empirical_distribution(allocs) -> dict[int, float]:
    """Pooled fraction of agents at each income level."""
    if isinstance(allocs, np.ndarray):
        flat = allocs.ravel()
        if flat.size == 0:
            raise EmptyInput("no allocations given")
        levels, counts = np.unique(flat, return_counts=True)
        return {int(lv): float(c) / flat.size for lv, c in zip(levels, counts)}
    allocs = list(allocs)
    if not allocs:
        raise EmptyInput("no allocations given")
    tally = Counter(i for a in allocs for i in a.incomes)
    total = sum(tally.values())
    return {lv: tally[lv] / total for lv in sorted(tally)}


def continuum_density(law: ExponentialLaw, x: float) -> float:
    """Density ``exp(-(x - mu)/theta) / theta`` on ``x >= mu``."""
    if x < law.mu:
        raise BelowSupport(f"x = {x!r} lies below the support edge mu = {law.mu!r}")
    return math.exp(-(x - law.mu) / law.theta) / law.theta


def mu_from_production(sigma: float, omega: float, r: float, mrts: float) -> float:
    """Support edge implied by production: ``sigma * omega - sigma * r * mrts``.

    ``sigma`` is the marginal employment level, ``omega`` the minimum wage,
    ``r`` the interest rate and ``mrts`` the marginal rate of technical
    substitution of labour for capital.
    """
    if sigma < 0:
        raise NegativeSigma(f"marginal employment level must be >= 0, got {sigma}")
    return sigma * omega - sigma * r * mrts
