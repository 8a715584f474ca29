"""NK task environment: interdependence structures, contribution tables, evaluation.

Solutions are encoded as Python ints. Decision ``d_1`` is the most significant
of the ``N`` bits, so the integer reads like the bit string ``d_1 d_2 ... d_N``
and concatenating slot sub-solutions is integer concatenation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_EXHAUSTIVE_CAP = 24


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, width: int) -> tuple[int, ...]:
    if value < 0 or value >> width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


@dataclass(frozen=True)
class Partition:
    """Split of ``n`` decisions into ``m`` contiguous slots of ``s = n // m`` bits."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if self.n % self.m:
            raise ValueError(f"n={self.n} is not divisible by m={self.m}")

    @property
    def s(self) -> int:
        return self.n // self.m

    def decisions(self, slot: int) -> range:
        self._check_slot(slot)
        return range(slot * self.s, (slot + 1) * self.s)

    def shift(self, slot: int) -> int:
        self._check_slot(slot)
        return self.s * (self.m - 1 - slot)

    def mask(self, slot: int) -> int:
        return ((1 << self.s) - 1) << self.shift(slot)

    def extract(self, full: int, slot: int) -> int:
        return (full >> self.shift(slot)) & ((1 << self.s) - 1)

    def insert(self, full: int, slot: int, sub: int) -> int:
        if sub < 0 or sub >> self.s:
            raise ValueError(f"sub-solution {sub} does not fit in {self.s} bits")
        return (full & ~self.mask(slot)) | (sub << self.shift(slot))

    def join(self, subs: Sequence[int]) -> int:
        if len(subs) != self.m:
            raise ValueError(f"expected {self.m} sub-solutions, got {len(subs)}")
        full = 0
        for slot, sub in enumerate(subs):
            full = self.insert(full, slot, sub)
        return full

    def _check_slot(self, slot: int) -> None:
        if not 0 <= slot < self.m:
            raise IndexError(f"slot {slot} out of range for m={self.m}")


@dataclass(frozen=True)
class InteractionMatrix:
    """Which ``k`` other decisions co-determine each decision's contribution.

    ``depends[i]`` is an ordered tuple of 0-based indices; the order fixes
    the bit layout of the contribution table index.
    """

    partition: Partition
    k: int
    depends: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.partition.n
        if not 0 <= self.k <= n - 1:
            raise ValueError(f"k={self.k} outside [0, {n - 1}]")
        if len(self.depends) != n:
            raise ValueError("need one dependency list per decision")
        for i, deps in enumerate(self.depends):
            if len(deps) != self.k or len(set(deps)) != self.k:
                raise ValueError(f"decision {i}: need {self.k} distinct dependencies")
            if i in deps or any(not 0 <= j < n for j in deps):
                raise ValueError(f"decision {i}: invalid dependency list {deps}")

    @property
    def n(self) -> int:
        return self.partition.n

    def as_array(self) -> np.ndarray:
        """Boolean N x N matrix, ``[i, j]`` true when ``j`` affects ``i`` (diagonal set)."""
        out = np.eye(self.n, dtype=bool)
        for i, deps in enumerate(self.depends):
            out[i, list(deps)] = True
        return out


def build_interaction_matrix(n: int, m: int, k: int) -> InteractionMatrix:
    """Deterministic block structure.

    Each decision first depends on the other decisions of its own slot, then
    on the decisions of the cyclically next slot (lowest index first), then the
    one after, until ``k`` dependencies are collected. With n=12, m=3 this gives
    block-diagonal coupling for k=3, full coupling for k=11, and for k=5 the own
    block plus the first two decisions of the next block.
    """
    part = Partition(n, m)
    if not 0 <= k <= n - 1:
        raise ValueError(f"k={k} must satisfy 0 <= k <= n-1={n - 1}")
    s = part.s
    depends = []
    for i in range(n):
        block = i // s
        order = [j for j in part.decisions(block) if j != i]
        for step in range(1, m):
            order.extend(part.decisions((block + step) % m))
        depends.append(tuple(order[:k]))
    return InteractionMatrix(part, k, tuple(depends))


class Landscape:
    """Contribution tables over an interaction structure.

    ``tables[i, idx]`` is the contribution of decision ``i`` when the bit string
    ``(d_i, d_dep1, ..., d_depK)``, read most-significant-first, equals ``idx``.
    """

    def __init__(self, matrix: InteractionMatrix, tables: np.ndarray):
        tables = np.array(tables, dtype=np.float64)
        expected = (matrix.n, 1 << (matrix.k + 1))
        if tables.shape != expected:
            raise ValueError(f"tables must have shape {expected}, got {tables.shape}")
        if np.any(tables < 0.0) or np.any(tables > 1.0):
            raise ValueError("contributions must lie in [0, 1]")
        tables.setflags(write=False)
        self.matrix = matrix
        self.tables = tables
        self._contrib_all: np.ndarray | None = None

    @property
    def partition(self) -> Partition:
        return self.matrix.partition

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def k(self) -> int:
        return self.matrix.k

    def table_index(self, i: int, d: int) -> int:
        n, k = self.n, self.k
        idx = (d >> (n - 1 - i)) & 1
        for j in self.matrix.depends[i]:
            idx = (idx << 1) | ((d >> (n - 1 - j)) & 1)
        return idx

    def contribution(self, i: int, d: int) -> float:
        if not 0 <= i < self.n:
            raise IndexError(f"decision {i} out of range for n={self.n}")
        self._check_solution(d)
        return float(self.tables[i, self.table_index(i, d)])

    def agent_performance(self, d: int, slot: int) -> float:
        total = 0.0
        decisions = self.partition.decisions(slot)
        for i in decisions:
            total += self.contribution(i, d)
        return total / len(decisions)

    def team_performance(self, d: int) -> float:
        total = 0.0
        for i in range(self.n):
            total += self.contribution(i, d)
        return total / self.n

    def contributions_all(self) -> np.ndarray:
        """Contributions of every decision for all ``2**N`` solutions, shape (2**N, N)."""
        if self._contrib_all is None:
            self._contrib_all = self._contributions_for(np.arange(1 << self.n, dtype=np.int64))
            self._contrib_all.setflags(write=False)
        return self._contrib_all

    def _contributions_for(self, xs: np.ndarray) -> np.ndarray:
        n = self.n
        out = np.empty((xs.size, n), dtype=np.float64)
        for i in range(n):
            idx = (xs >> (n - 1 - i)) & 1
            for j in self.matrix.depends[i]:
                idx = (idx << 1) | ((xs >> (n - 1 - j)) & 1)
            out[:, i] = self.tables[i][idx]
        return out

    def slot_performance_all(self) -> np.ndarray:
        """Agent performance of each slot for every solution, shape (M, 2**N).

        Summation runs in ascending decision order, matching ``agent_performance``
        bit for bit.
        """
        contrib = self.contributions_all()
        part = self.partition
        out = np.empty((part.m, contrib.shape[0]))
        for slot in range(part.m):
            acc = np.zeros(contrib.shape[0])
            for i in part.decisions(slot):
                acc = acc + contrib[:, i]
            out[slot] = acc / part.s
        return out

    def team_performance_all(self) -> np.ndarray:
        return _sequential_mean(self.contributions_all())

    def global_optimum(self, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[int, float]:
        """Exhaustive argmax of team performance; ties go to the lowest encoding."""
        if self.n > cap:
            raise ValueError(f"n={self.n} exceeds exhaustive-search cap {cap}")
        if self._contrib_all is not None or self.n <= 16:
            perf = self.team_performance_all()
            best = int(np.argmax(perf))
            return best, float(perf[best])
        best, best_value = 0, -1.0
        chunk = 1 << 18
        for start in range(0, 1 << self.n, chunk):
            xs = np.arange(start, min(start + chunk, 1 << self.n), dtype=np.int64)
            perf = _sequential_mean(self._contributions_for(xs))
            j = int(np.argmax(perf))
            if perf[j] > best_value:
                best, best_value = start + j, float(perf[j])
        return best, best_value

    def _check_solution(self, d: int) -> None:
        if d < 0 or d >> self.n:
            raise ValueError(f"solution {d} does not fit in {self.n} bits")


def _sequential_mean(contrib: np.ndarray) -> np.ndarray:
    acc = np.zeros(contrib.shape[0])
    for i in range(contrib.shape[1]):
        acc = acc + contrib[:, i]
    return acc / contrib.shape[1]


def generate_landscape(matrix: InteractionMatrix, rng: np.random.Generator) -> Landscape:
    """Draw every table entry from U[0, 1).

    The stream is consumed decision-major, bit pattern ascending, so a given
    generator state always yields the same landscape.
    """
    tables = rng.random((matrix.n, 1 << (matrix.k + 1)))
    return Landscape(matrix, tables)


def write_landscape_csv(landscape: Landscape, path: str | Path) -> None:
    """One row per decision: index, dependency indices, then table values (0-based)."""
    k = landscape.k
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["decision"]
            + [f"dep_{j}" for j in range(k)]
            + [f"f_{idx}" for idx in range(1 << (k + 1))]
        )
        for i, deps in enumerate(landscape.matrix.depends):
            writer.writerow([i, *deps, *(repr(float(v)) for v in landscape.tables[i])])


def read_landscape_csv(path: str | Path, m: int) -> Landscape:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    k = sum(1 for col in header if col.startswith("dep_"))
    depends = tuple(tuple(int(v) for v in row[1 : 1 + k]) for row in body)
    tables = np.array([[float(v) for v in row[1 + k :]] for row in body])
    matrix = InteractionMatrix(Partition(len(body), m), k, depends)
    return Landscape(matrix, tables)
