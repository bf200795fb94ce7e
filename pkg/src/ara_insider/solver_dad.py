"""Defend-Attack-Defend game with a detection node.

The defender picks ``d1``, the insider attacks with ``a``, the outcome ``s``
and detection ``e`` are observed, then the defender responds with ``d2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .model import CPT, Scenario, utility_eval
from .montecarlo import AttackDistribution, AttackerPlan, simulate, table_specs
from .solver_core import argmax_first


@dataclass
class Policy:
    """Defender solution.

    ``d2_rule`` is keyed by the observed history: ``(d1, s, e)``, or
    ``(d1, b, s, e)`` in the culture model. ``intermediates`` holds
    psi(d1, a); the culture model also fills ``psi_b`` with psi(d1, b).
    """

    d1_star: str
    d2_rule: Dict[tuple, str]
    psi_table: Dict[str, float]
    intermediates: Dict[tuple, float]
    psi_b: Dict[tuple, float] = field(default_factory=dict)


def optimal_second_defense(scenario: Scenario, d1, s, e) -> str:
    u = scenario.defender.utility
    d2s = scenario.labels("d2")
    return d2s[argmax_first([utility_eval(u, d1, s, e, d2) for d2 in d2s])]


def second_defense_rule(scenario: Scenario) -> Dict[tuple, str]:
    return {(d1, s, e): optimal_second_defense(scenario, d1, s, e)
            for d1 in scenario.labels("d1") for s in scenario.labels("s") for e in scenario.labels("e")}


def expected_after_attack(scenario: Scenario, d1, a, cpt_s: CPT, utility) -> float:
    """Sum over s and e of ``utility(s, e) * p(e|d1,a,s) * p(s|d1,a)``."""
    total = 0.0
    cpt_e = scenario.defender.cpt_e
    for s, ps in zip(scenario.labels("s"), cpt_s.row(d1, a)):
        inner = sum(utility(s, e) * pe for e, pe in zip(scenario.labels("e"), cpt_e.row(d1, a, s)))
        total += inner * ps
    return total


def psi_d1_a(scenario: Scenario, d1, a) -> float:
    u = scenario.defender.utility

    def best(s, e):
        return utility_eval(u, d1, s, e, optimal_second_defense(scenario, d1, s, e))

    return float(expected_after_attack(scenario, d1, a, scenario.defender.cpt_s, best))


def psi_d1_a_table(scenario: Scenario) -> Dict[tuple, float]:
    return {(d1, a): psi_d1_a(scenario, d1, a) for d1 in scenario.labels("d1") for a in scenario.labels("a")}


def direct_attack_distribution(scenario: Scenario) -> AttackDistribution:
    """The defender's directly elicited p(a|d1) as an AttackDistribution."""
    cpt = scenario.defender.direct_attack_dist
    if cpt is None:
        raise ValueError("scenario has no defender.direct_attack_dist")
    roles = tuple(cpt.given)
    return AttackDistribution.from_table(
        scenario.labels("a"), {tuple(k): v for k, v in cpt.rows.items()}, roles)


def attack_row(dist: AttackDistribution, scenario: Scenario, d1) -> np.ndarray:
    if dist.context_roles == ("d1", "b"):
        row = dist.row(d1, scenario.labels("b")[1])
    else:
        row = dist.row(d1)
    if len(row) != len(scenario.labels("a")):
        raise ValueError(f"attack distribution for {d1!r} has {len(row)} entries, "
                         f"expected {len(scenario.labels('a'))}")
    return row


def solve_dad(scenario: Scenario, attack_dist: Optional[AttackDistribution] = None) -> Policy:
    if attack_dist is None:
        attack_dist = direct_attack_distribution(scenario)
    inter = psi_d1_a_table(scenario)
    attacks = scenario.labels("a")
    psi = {}
    for d1 in scenario.labels("d1"):
        row = attack_row(attack_dist, scenario, d1)
        psi[d1] = float(sum(inter[(d1, a)] * p for a, p in zip(attacks, row)))
    d1s = scenario.labels("d1")
    d1_star = d1s[argmax_first([psi[d] for d in d1s])]
    return Policy(d1_star, second_defense_rule(scenario), psi, inter)


def _dad_eval(plan: AttackerPlan, draws: np.ndarray) -> np.ndarray:
    ua = plan.view(draws, "random_utility")     # (m, A, S, E, D2)
    pd2 = plan.view(draws, "random_cpt_d2")     # (m, D1, A, S, E, D2)
    pe = plan.view(draws, "random_cpt_e")       # (m, D1, A, S, E)
    ps = plan.view(draws, "random_cpt_s")       # (m, D1, A, S)
    psi_ase = np.einsum("masex,mjasex->mjase", ua, pd2)
    psi_as = np.einsum("mjase,mjase->mjas", psi_ase, pe)
    psi_a = np.einsum("mjas,mjas->mja", psi_as, ps)
    return psi_a.argmax(axis=2)


def attacker_plan(scenario: Scenario, s_table, contexts, context_roles) -> AttackerPlan:
    """Plan shared by the DAD and culture models; only the s-table differs."""
    sp, att = scenario.spaces, scenario.attacker
    missing = [k for k in ("random_utility", "random_cpt_d2", "random_cpt_e")
               if att is None or getattr(att, k) is None]
    if missing or s_table is None:
        raise ValueError(f"attacker tables missing: {missing or ['random_cpt_s']}")
    n1, na, ns, ne, n2 = (len(sp[r]) for r in ("d1", "a", "s", "e", "d2"))
    ep = scenario.mc.exp_param
    tables = [
        ("random_utility", table_specs(att.random_utility.rows, sp, ("a", "s", "e", "d2"), ep),
         (na, ns, ne, n2), False),
        ("random_cpt_d2", table_specs(att.random_cpt_d2.rows, sp, ("d1", "a", "s", "e")),
         (n1, na, ns, ne, n2), n2 == 2),
        ("random_cpt_e", table_specs(att.random_cpt_e.rows, sp, ("d1", "a", "s")), (n1, na, ns, ne), True),
        ("random_cpt_s", table_specs(s_table.rows, sp, ("d1", "a")), (n1, na, ns), True),
    ]
    return AttackerPlan(tables, _dad_eval, contexts, sp["a"], context_roles)


def predict_attack_dad(scenario: Scenario, n: Optional[int] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None) -> AttackDistribution:
    """Monte Carlo estimate of p(a|d1) from the attacker's random problem.

    Each sample draws one joint set of attacker tables, shared by every d1.
    """
    n = scenario.mc.n if n is None else n
    seed = scenario.mc.seed if seed is None else seed
    plan = attacker_plan(scenario, scenario.attacker.random_cpt_s if scenario.attacker else None,
                         [(d1,) for d1 in scenario.labels("d1")], ("d1",))
    return simulate(plan, n, seed, workers)
