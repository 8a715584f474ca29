"""Second-price team formation: schedule, bids, allocation, audit log."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .agent import Agent, UtilityTable


class Bid(NamedTuple):
    agent_id: int
    slot: int
    amount: float


@dataclass(frozen=True)
class AuctionOutcome:
    winners: tuple[int, ...]
    payments: tuple[float, ...]
    bids: tuple[Bid, ...]


def auction_times(t_horizon: int, tau: int) -> list[int]:
    """Timesteps (1-based) at which the team is re-formed.

    Auctions fall on every ``t`` with ``(t - 1) % (T / tau) == 0``, which gives
    exactly ``tau`` auctions and always includes ``t = 1``.
    """
    if tau < 1:
        raise ValueError("tau must be at least 1")
    if t_horizon % tau:
        raise ValueError(f"t_horizon={t_horizon} is not divisible by tau={tau}")
    return list(range(1, t_horizon + 1, t_horizon // tau))


def compute_bid(agent: Agent, ctx: int, table: UtilityTable) -> Bid:
    if not agent.memory:
        raise ValueError(f"agent {agent.id} has an empty memory")
    return Bid(agent.id, agent.slot, max(table.utilities(agent.slot, agent.memory, ctx)))


def second_price(amounts: Sequence[float], rng: np.random.Generator) -> tuple[int, float]:
    """Winner index and payment for one slot.

    Highest amount wins (uniform among exact ties); the winner pays the
    second-highest amount, which equals the winning amount when tied.
    """
    if len(amounts) < 2:
        raise ValueError("second price undefined with fewer than 2 bidders")
    top = max(amounts)
    tied = [i for i, a in enumerate(amounts) if a == top]
    winner = tied[0] if len(tied) == 1 else tied[int(rng.integers(len(tied)))]
    payment = max(a for i, a in enumerate(amounts) if i != winner)
    return winner, payment


def run_auction(
    agents: Sequence[Agent],
    ctx: int,
    table: UtilityTable,
    rng: np.random.Generator,
) -> AuctionOutcome:
    """Fill every slot with its highest bidder and update membership flags.

    Payments are recorded only; they do not enter performance or utility.
    """
    m = table.partition.m
    by_slot: list[list[Agent]] = [[] for _ in range(m)]
    for a in agents:
        by_slot[a.slot].append(a)
    bids: list[Bid] = []
    winners: list[int] = []
    payments: list[float] = []
    for slot, candidates in enumerate(by_slot):
        if len(candidates) < 2:
            raise ValueError(f"slot {slot}: second price undefined with {len(candidates)} candidate(s)")
        slot_bids = [compute_bid(a, ctx, table) for a in candidates]
        idx, pay = second_price([b.amount for b in slot_bids], rng)
        bids.extend(slot_bids)
        winners.append(candidates[idx].id)
        payments.append(pay)
    won = set(winners)
    for a in agents:
        a.is_member = a.id in won
    return AuctionOutcome(tuple(winners), tuple(payments), tuple(bids))


def write_audit_log(records: Iterable[tuple[int, AuctionOutcome]], path: str | Path) -> None:
    """CSV with one row per (timestep, slot): all bids as ``id:amount``, winner, payment."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "slot", "bids", "winner", "payment"])
        for t, outcome in records:
            for slot, (winner, payment) in enumerate(zip(outcome.winners, outcome.payments)):
                bids = " ".join(
                    f"{b.agent_id}:{b.amount!r}" for b in outcome.bids if b.slot == slot
                )
                writer.writerow([t, slot, bids, winner, repr(payment)])
