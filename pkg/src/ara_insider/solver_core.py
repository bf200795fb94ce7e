"""Two-player simultaneous game: defender expected utilities and the
Monte Carlo prediction of the attacker's choice."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .model import LabelError, Scenario
from .montecarlo import AttackDistribution, AttackerPlan, simulate, table_specs
from .sampling import substream


def argmax_first(values) -> int:
    """Index of the maximum; ties go to the lowest index."""
    return int(np.argmax(np.asarray(values, dtype=float)))


def _u_das(scenario: Scenario, d, a, s) -> float:
    try:
        return scenario.defender.utility.u_das[(d, a, s)]
    except KeyError:
        raise LabelError(f"defender.utility.u_das: no value for {(d, a, s)!r}") from None


def psi_da(scenario: Scenario, d, a) -> float:
    """Defender's expected utility of (d, a), integrating out the outcome."""
    row = scenario.defender.cpt_s.row(d, a)
    return float(sum(_u_das(scenario, d, a, s) * p for s, p in zip(scenario.labels("s"), row)))


def psi_da_table(scenario: Scenario) -> np.ndarray:
    return np.array([[psi_da(scenario, d, a) for a in scenario.labels("a")] for d in scenario.labels("d")])


def _attack_row(scenario: Scenario, attack_dist) -> np.ndarray:
    if isinstance(attack_dist, AttackDistribution):
        row = attack_dist.row()
    else:
        row = np.asarray(attack_dist, dtype=float)
    if row.shape != (len(scenario.labels("a")),):
        raise ValueError(f"attack distribution has shape {row.shape}, expected {len(scenario.labels('a'))} attacks")
    return row


def solve_simultaneous(scenario: Scenario, attack_dist, *, method: str = "exact",
                       n: Optional[int] = None, seed: Optional[int] = None):
    """Optimal defense for the simultaneous game.

    Returns ``(d_star, psi, se)`` where ``psi`` maps each defense to its
    expected utility. With ``method="mc"`` the expectation is estimated by
    sampling (attack, outcome) pairs, one stream per defense, and ``se`` holds
    the standard errors; otherwise the sums are exact and ``se`` is ``None``.
    """
    p_a = _attack_row(scenario, attack_dist)
    ds, attacks, outcomes = scenario.labels("d"), scenario.labels("a"), scenario.labels("s")
    if method == "exact":
        table = psi_da_table(scenario)
        psi = dict(zip(ds, map(float, table @ p_a)))
        se = None
    elif method == "mc":
        if n is None or n <= 0 or seed is None:
            raise ValueError("method='mc' needs a positive n and a seed")
        u = np.array([[[_u_das(scenario, d, a, s) for s in outcomes] for a in attacks] for d in ds])
        ps = scenario.defender.cpt_s.array(scenario.spaces)
        psi, se = {}, {}
        for i, d in enumerate(ds):
            gen = substream(seed, i).generator
            a_k = gen.choice(len(attacks), size=n, p=p_a)
            cum = np.cumsum(ps[i], axis=-1)
            s_k = (gen.random(n)[:, None] > cum[a_k]).sum(axis=1)
            s_k = np.minimum(s_k, len(outcomes) - 1)
            vals = u[i, a_k, s_k]
            psi[d] = float(vals.mean())
            se[d] = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    d_star = ds[argmax_first([psi[d] for d in ds])]
    return d_star, psi, se


def _simultaneous_eval(plan: AttackerPlan, draws: np.ndarray) -> np.ndarray:
    ua = plan.view(draws, "random_utility")      # (m, D, A, S)
    ps = plan.view(draws, "random_cpt_s")        # (m, D, A, S)
    pd = plan.view(draws, "random_cpt_d")        # (m, D)
    psi = np.einsum("mdas,mdas,md->ma", ua, ps, pd)
    return psi.argmax(axis=1)[:, None]


def simultaneous_plan(scenario: Scenario) -> AttackerPlan:
    sp, att = scenario.spaces, scenario.attacker
    if att is None or att.random_utility is None or att.random_cpt_s is None or att.random_cpt_d is None:
        raise ValueError("attacker random utility, random_cpt_s and random_cpt_d are required")
    nd, na, ns = len(sp["d"]), len(sp["a"]), len(sp["s"])
    tables = [
        ("random_utility", table_specs(att.random_utility.rows, sp, ("d", "a", "s"), scenario.mc.exp_param), (nd, na, ns), False),
        ("random_cpt_s", table_specs(att.random_cpt_s.rows, sp, ("d", "a")), (nd, na, ns), ns == 2),
        ("random_cpt_d", table_specs(att.random_cpt_d.rows, sp, ()), (nd,), nd == 2),
    ]
    return AttackerPlan(tables, _simultaneous_eval, [()], sp["a"], ())


def elicit_attack_distribution(scenario: Scenario, n: Optional[int] = None, seed: Optional[int] = None,
                               workers: Optional[int] = None) -> AttackDistribution:
    """Predictive p(a) from simulating an expected-utility-maximising attacker."""
    n = scenario.mc.n if n is None else n
    seed = scenario.mc.seed if seed is None else seed
    return simulate(simultaneous_plan(scenario), n, seed, workers)
