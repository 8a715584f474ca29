"""Bounded-memory agents: endowment, expected utility, choice, learning, forgetting.

A residual context is the previously implemented full solution (an int). Only
the bits outside the agent's own slot are read from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import Landscape

WEIGHT_TOL = 1e-9


@dataclass
class Agent:
    id: int
    slot: int
    memory: list[int] = field(default_factory=list)
    is_member: bool = False


def _check_weights(alpha: float, beta: float) -> None:
    if abs(alpha + beta - 1.0) > WEIGHT_TOL:
        raise ValueError(f"alpha+beta must equal 1 (got {alpha}+{beta})")


def init_agent(agent_id: int, slot: int, rng: np.random.Generator, q: int, s: int) -> Agent:
    """Endow an agent with ``q`` distinct sub-solutions drawn without replacement."""
    if not 1 <= q < (1 << s):
        raise ValueError(f"q={q} must satisfy 1 <= q < 2**{s}")
    memory = [int(v) for v in rng.choice(1 << s, size=q, replace=False)]
    return Agent(agent_id, slot, memory)


def expected_utility(
    agent: Agent,
    sub: int,
    ctx: int,
    landscape: Landscape,
    alpha: float = 0.5,
    beta: float = 0.5,
) -> float:
    """Utility of playing ``sub`` while the other slots keep their values in ``ctx``.

    Own slot performance weighted by ``alpha`` plus the mean performance of the
    remaining slots weighted by ``beta``.
    """
    _check_weights(alpha, beta)
    part = landscape.partition
    full = part.insert(ctx, agent.slot, sub)
    own = landscape.agent_performance(full, agent.slot)
    if part.m == 1:
        return alpha * own
    rest = 0.0
    for r in range(part.m):
        if r != agent.slot:
            rest += landscape.agent_performance(full, r)
    return alpha * own + beta * (rest / (part.m - 1))


class UtilityTable:
    """Expected utility for every (slot, full solution) pair, precomputed.

    Uses the same arithmetic as ``expected_utility``, so lookups agree with the
    direct computation exactly. Rows are kept as Python lists because scalar
    indexing into them is much cheaper than into numpy arrays.
    """

    def __init__(self, landscape: Landscape, alpha: float = 0.5, beta: float = 0.5):
        _check_weights(alpha, beta)
        self.landscape = landscape
        self.partition = landscape.partition
        self.alpha = alpha
        self.beta = beta
        phi = landscape.slot_performance_all()
        m = self.partition.m
        rows = []
        for slot in range(m):
            if m == 1:
                rows.append((alpha * phi[slot]).tolist())
                continue
            rest = np.zeros(phi.shape[1])
            for r in range(m):
                if r != slot:
                    rest = rest + phi[r]
            rows.append((alpha * phi[slot] + beta * (rest / (m - 1))).tolist())
        self.rows: list[list[float]] = rows
        self._shift = [self.partition.shift(slot) for slot in range(m)]
        self._keep = [~self.partition.mask(slot) for slot in range(m)]

    def utility(self, slot: int, sub: int, ctx: int) -> float:
        return self.rows[slot][(ctx & self._keep[slot]) | (sub << self._shift[slot])]

    def utilities(self, slot: int, subs: list[int], ctx: int) -> list[float]:
        row = self.rows[slot]
        base = ctx & self._keep[slot]
        shift = self._shift[slot]
        return [row[base | (s << shift)] for s in subs]


def _pick_tied(values: list[float], best: float, rng: np.random.Generator) -> int:
    """Index of a uniformly chosen entry equal to ``best``; draws only on a tie."""
    tied = [i for i, v in enumerate(values) if v == best]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def choose_solution(agent: Agent, ctx: int, table: UtilityTable, rng: np.random.Generator) -> int:
    if not agent.memory:
        raise ValueError(f"agent {agent.id} has an empty memory")
    values = table.utilities(agent.slot, agent.memory, ctx)
    return agent.memory[_pick_tied(values, max(values), rng)]


def learn(agent: Agent, rng: np.random.Generator, p: float, s: int) -> int | None:
    """With probability ``p`` add one unknown Hamming-1 neighbour of the memory.

    Returns the learned sub-solution, or None when nothing was learned.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 0.0 or rng.random() >= p:
        return None
    return add_neighbour(agent, rng, s)


def add_neighbour(agent: Agent, rng: np.random.Generator, s: int) -> int | None:
    """Unconditional part of ``learn``: pick uniformly among unknown neighbours."""
    known = set(agent.memory)
    candidates = sorted({x ^ (1 << b) for x in known for b in range(s)} - known)
    if not candidates:
        return None
    new = candidates[int(rng.integers(len(candidates)))]
    agent.memory.append(new)
    return new


def forget(
    agent: Agent,
    ctx: int,
    table: UtilityTable,
    rng: np.random.Generator,
    p: float,
    implemented: int | None = None,
) -> int | None:
    """With probability ``p`` drop the known sub-solution of lowest utility under ``ctx``.

    ``implemented`` is never dropped. Returns the removed sub-solution or None.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 0.0 or rng.random() >= p:
        return None
    return drop_worst(agent, ctx, table, implemented)


def drop_worst(agent: Agent, ctx: int, table: UtilityTable, implemented: int | None = None) -> int | None:
    """Unconditional part of ``forget``; equal lowest utilities go to the entry known longest."""
    if len(agent.memory) <= 1:
        return None
    removable = [x for x in agent.memory if x != implemented]
    if not removable:
        return None
    values = table.utilities(agent.slot, removable, ctx)
    worst = removable[values.index(min(values))]
    agent.memory.remove(worst)
    return worst
