"""Culture model: culture ``c`` and blocking ``b`` are resolved before the
attack, and a blocked attack ends the game."""
from __future__ import annotations

from typing import Dict, Optional

from .model import Scenario, utility_eval
from .montecarlo import AttackDistribution, simulate
from .solver_core import argmax_first
from .solver_dad import (Policy, attack_row, attacker_plan, direct_attack_distribution,
                         expected_after_attack)


class UnreachableNode(ValueError):
    pass


def blocked_label(scenario: Scenario) -> str:
    return scenario.labels("b")[0]


def not_blocked_label(scenario: Scenario) -> str:
    return scenario.labels("b")[1]


def optimal_second_defense_culture(scenario: Scenario, d1, b, s, e) -> str:
    if b == blocked_label(scenario):
        raise UnreachableNode(f"unreachable decision node: no second defense after b={b!r}")
    u = scenario.defender.utility
    d2s = scenario.labels("d2")
    vals = [utility_eval(u, d1, s, e, d2, b=b, blocked=blocked_label(scenario)) for d2 in d2s]
    return d2s[argmax_first(vals)]


def psi_d1_b_a(scenario: Scenario, d1, a) -> float:
    """psi(d1, not-blocked, a) with every additive term included."""
    u = scenario.defender.utility
    nb, blk = not_blocked_label(scenario), blocked_label(scenario)

    def best(s, e):
        d2 = optimal_second_defense_culture(scenario, d1, nb, s, e)
        return utility_eval(u, d1, s, e, d2, b=nb, blocked=blk)

    return float(expected_after_attack(scenario, d1, a, scenario.defender_s_not_blocked, best))


def psi_d1_b_a_table(scenario: Scenario) -> Dict[tuple, float]:
    return {(d1, a): psi_d1_b_a(scenario, d1, a) for d1 in scenario.labels("d1") for a in scenario.labels("a")}


def psi_d1_b(scenario: Scenario, d1, b, attack_dist: Optional[AttackDistribution] = None) -> float:
    if b == blocked_label(scenario):
        return float(utility_eval(scenario.defender.utility, d1, b=b, blocked=b))
    if attack_dist is None:
        raise ValueError("the not-blocked branch needs an attack distribution")
    row = attack_row(attack_dist, scenario, d1)
    return float(sum(psi_d1_b_a(scenario, d1, a) * p for a, p in zip(scenario.labels("a"), row)))


def solve_culture(scenario: Scenario, attack_dist: Optional[AttackDistribution] = None) -> Policy:
    if attack_dist is None:
        attack_dist = direct_attack_distribution(scenario)
    d1s, bs, cs = scenario.labels("d1"), scenario.labels("b"), scenario.labels("c")
    cpt_b, cpt_c = scenario.defender.cpt_b, scenario.defender.cpt_c
    psi_b = {(d1, b): psi_d1_b(scenario, d1, b, attack_dist) for d1 in d1s for b in bs}
    psi = {}
    for d1 in d1s:
        total = 0.0
        for c, pc in zip(cs, cpt_c.row(d1)):
            total += sum(psi_b[(d1, b)] * pb for b, pb in zip(bs, cpt_b.row(d1, c))) * pc
        psi[d1] = float(total)
    nb = not_blocked_label(scenario)
    rule = {(d1, nb, s, e): optimal_second_defense_culture(scenario, d1, nb, s, e)
            for d1 in d1s for s in scenario.labels("s") for e in scenario.labels("e")}
    d1_star = d1s[argmax_first([psi[d] for d in d1s])]
    return Policy(d1_star, rule, psi, psi_d1_b_a_table(scenario), psi_b)


def predict_attack_culture(scenario: Scenario, n: Optional[int] = None, seed: Optional[int] = None,
                           workers: Optional[int] = None) -> AttackDistribution:
    """p(a | d1, b=not-blocked); nothing is produced for the blocked branch."""
    n = scenario.mc.n if n is None else n
    seed = scenario.mc.seed if seed is None else seed
    nb = not_blocked_label(scenario)
    plan = attacker_plan(scenario, scenario.attacker_s_not_blocked,
                         [(d1, nb) for d1 in scenario.labels("d1")], ("d1", "b"))
    return simulate(plan, n, seed, workers)
