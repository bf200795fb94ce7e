"""Monte Carlo driver for the attacker's random optimisation problem.

Sample ``k`` (1-based) draws every random table from ``substream(seed, k)``
and the resulting optimal attacks are counted in ``k`` order, so the output
is the same for any number of workers.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .sampling import Beta, FlatSampler, PointMass, ShiftedNegExp, dimension, substream

CHUNK = 4096


@dataclass(frozen=True)
class AttackDistribution:
    """Predictive attack probabilities, one simplex per context.

    ``contexts`` are label tuples over ``context_roles`` (empty for the
    simultaneous game, ``("d1",)`` or ``("d1", "b")`` otherwise). ``se`` is
    ``None`` for directly elicited distributions.
    """

    attacks: Tuple[str, ...]
    contexts: Tuple[tuple, ...]
    p: np.ndarray
    se: Optional[np.ndarray] = None
    n: Optional[int] = None
    seed: Optional[int] = None
    context_roles: Tuple[str, ...] = ()
    counts: Optional[np.ndarray] = None

    def row(self, *context) -> np.ndarray:
        try:
            return self.p[self.contexts.index(tuple(context))]
        except ValueError:
            raise KeyError(f"no attack distribution for context {context!r}") from None

    def se_row(self, *context) -> Optional[np.ndarray]:
        if self.se is None:
            return None
        return self.se[self.contexts.index(tuple(context))]

    def as_dict(self) -> dict:
        return {c: dict(zip(self.attacks, map(float, r))) for c, r in zip(self.contexts, self.p)}

    @classmethod
    def from_table(cls, attacks, table: dict, context_roles=()):
        """Build from ``{context tuple: sequence of probabilities}``; no standard errors."""
        contexts = tuple(tuple(c) if isinstance(c, tuple) else (c,) for c in table)
        if not context_roles:
            contexts = tuple(() if c == ((),) else c for c in contexts)
        p = np.array([list(v) for v in table.values()], dtype=float)
        if p.shape[1] != len(attacks):
            raise ValueError(f"rows have {p.shape[1]} entries, expected {len(attacks)} attacks")
        return cls(tuple(attacks), contexts, p, context_roles=tuple(context_roles))


@dataclass(frozen=True)
class TableSlot:
    name: str
    offset: int
    shape: Tuple[int, ...]


class AttackerPlan:
    """The attacker's random tables laid out in one flat draw vector.

    ``evaluate`` maps a block of draws to the optimal attack index per
    context; it must be a module-level function so the plan pickles.
    """

    def __init__(self, tables: Sequence[tuple], evaluate: Callable, contexts, attacks, context_roles):
        items, self.slots, off = [], {}, 0
        for name, specs, shape, binary in tables:
            start = off
            for spec in specs:
                is_bin = binary and (isinstance(spec, Beta) or (isinstance(spec, PointMass) and not spec.is_simplex))
                items.append((spec, is_bin))
                off += 2 if is_bin else dimension(spec)
            if off - start != int(np.prod(shape)):
                raise ValueError(f"{name}: {off - start} slots drawn for shape {shape}")
            self.slots[name] = TableSlot(name, start, tuple(shape))
        self.sampler = FlatSampler(items)
        self.evaluate = evaluate
        self.contexts = tuple(contexts)
        self.attacks = tuple(attacks)
        self.context_roles = tuple(context_roles)

    def view(self, draws: np.ndarray, name: str) -> np.ndarray:
        s = self.slots[name]
        size = int(np.prod(s.shape))
        return draws[:, s.offset:s.offset + size].reshape((draws.shape[0],) + s.shape)

    def draw(self, seed: int, ks: range) -> np.ndarray:
        out = np.empty((len(ks), self.sampler.size))
        for row, k in enumerate(ks):
            self.sampler.draw(substream(seed, k).generator, out[row])
        return out

    def best_attacks(self, seed: int, ks: range) -> np.ndarray:
        return self.evaluate(self, self.draw(seed, ks))


def table_specs(rows: dict, spaces, roles, exp_param: str = "rate") -> list:
    """Row specs in the declared product order of ``roles``.

    ``exp_param`` fixes how shifted exponential rows read their parameter.
    """
    out = []
    for key in itertools.product(*(spaces[r] for r in roles)):
        spec = rows[key]
        if isinstance(spec, ShiftedNegExp):
            spec = replace(spec, reading=exp_param)
        out.append(spec)
    return out


def _chunk_job(args):
    plan, seed, start, stop = args
    return plan.best_attacks(seed, range(start, stop))


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = 1
    cap = os.environ.get("ARA_WORKERS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, int(workers))


def simulate(plan: AttackerPlan, n: int, seed: int, workers: Optional[int] = None) -> AttackDistribution:
    """Frequency estimate of the attacker's optimal action per context."""
    if not isinstance(n, (int, np.integer)) or n <= 0:
        raise ValueError(f"number of samples must be a positive integer, got {n!r}")
    if seed is None:
        raise ValueError("a seed is required for Monte Carlo prediction")
    workers = resolve_workers(workers)
    bounds = [(s, min(s + CHUNK, n + 1)) for s in range(1, n + 1, CHUNK)]
    jobs = [(plan, seed, a, b) for a, b in bounds]
    if workers == 1 or len(jobs) == 1:
        parts = [_chunk_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_chunk_job, jobs))
    best = np.concatenate(parts, axis=0)
    n_a = len(plan.attacks)
    counts = np.stack([np.bincount(best[:, j], minlength=n_a) for j in range(best.shape[1])])
    p = counts / n
    se = np.sqrt(p * (1.0 - p) / n)
    return AttackDistribution(plan.attacks, plan.contexts, p, se, int(n), int(seed),
                              plan.context_roles, counts)
