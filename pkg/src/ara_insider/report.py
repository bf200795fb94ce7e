"""Run the right pipeline for a scenario and collect the results."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from . import __version__
from .model import Scenario, validate
from .montecarlo import AttackDistribution
from .solver_core import argmax_first, elicit_attack_distribution, psi_da_table, solve_simultaneous
from .solver_culture import not_blocked_label, predict_attack_culture, solve_culture
from .solver_dad import direct_attack_distribution, predict_attack_dad, solve_dad

NORMAL_READING = "second parameter is the standard deviation"
EXP_READING = {"rate": "100 - Exp(k): k is the rate (mean 1/k)",
               "mean": "100 - Exp(k): k is the mean"}


@dataclass
class SolveReport:
    model: str
    d1_labels: tuple
    psi: Dict[str, float]
    d1_star: str
    predict: str
    psi_se: Optional[Dict[str, float]] = None
    d2_rule: Dict[tuple, str] = field(default_factory=dict)
    intermediates: Dict[tuple, float] = field(default_factory=dict)
    psi_b: Dict[tuple, float] = field(default_factory=dict)
    attack_dist: Optional[AttackDistribution] = None
    attack_labels: tuple = ()
    metadata: Dict[str, str] = field(default_factory=dict)


def _psi_se(inter_row: np.ndarray, dist: AttackDistribution, p: np.ndarray) -> float:
    # multinomial standard error of sum_a psi(a) * p_hat(a)
    mean = float(inter_row @ p)
    var = float(inter_row ** 2 @ p) - mean ** 2
    return float(np.sqrt(max(var, 0.0) / dist.n))


def solve(scenario: Scenario, predict: Optional[str] = None, n: Optional[int] = None,
          seed: Optional[int] = None, workers: Optional[int] = None) -> SolveReport:
    """Validate, predict the attack (directly or by simulation) and solve."""
    validate(scenario)
    if predict is None:
        predict = "direct" if scenario.defender.direct_attack_dist is not None else "ara"
    if predict not in ("direct", "ara"):
        raise ValueError(f"unknown prediction mode {predict!r}")
    if predict == "direct" and scenario.defender.direct_attack_dist is None:
        raise ValueError("--predict direct needs defender.direct_attack_dist")
    if predict == "ara" and scenario.attacker is None:
        raise ValueError("--predict ara needs the attacker block")
    n = scenario.mc.n if n is None else n
    seed = scenario.mc.seed if seed is None else seed
    if predict == "ara" and seed is None:
        raise ValueError("a seed is required for --predict ara (mc.seed or --seed)")

    model = scenario.model
    meta = {
        "tool_version": __version__,
        "model": model,
        "predict": predict,
        "normal_param": NORMAL_READING,
        "exp_param": EXP_READING[scenario.mc.exp_param],
    }
    if predict == "ara":
        meta.update(n=str(n), seed=str(seed))

    if model == "simultaneous":
        if predict == "ara":
            dist = elicit_attack_distribution(scenario, n, seed, workers)
        else:
            cpt = scenario.defender.direct_attack_dist
            dist = AttackDistribution.from_table(scenario.labels("a"), {(): cpt.row()})
        d_star, psi, _ = solve_simultaneous(scenario, dist)
        table = psi_da_table(scenario)
        labels = scenario.labels("d")
        inter = {(d, a): float(table[i, j]) for i, d in enumerate(labels)
                 for j, a in enumerate(scenario.labels("a"))}
        se = None
        if predict == "ara":
            se = {d: _psi_se(table[i], dist, dist.row()) for i, d in enumerate(labels)}
        return SolveReport(model, labels, psi, d_star, predict, se, {}, inter,
                           attack_dist=dist if predict == "ara" else None,
                           attack_labels=scenario.labels("a"), metadata=meta)

    if predict == "ara":
        predictor = predict_attack_dad if model == "dad" else predict_attack_culture
        dist = predictor(scenario, n, seed, workers)
    else:
        dist = direct_attack_distribution(scenario)
    policy = (solve_dad if model == "dad" else solve_culture)(scenario, dist)
    labels = scenario.labels("d1")
    se = None
    if predict == "ara":
        se = {}
        for d1 in labels:
            row = np.array([policy.intermediates[(d1, a)] for a in scenario.labels("a")])
            ctx = (d1,) if model == "dad" else (d1, not_blocked_label(scenario))
            s = _psi_se(row, dist, dist.row(*ctx))
            if model == "culture":
                # psi(d1) is linear in psi(d1, not-blocked) with weight P(not-blocked | d1)
                nb = not_blocked_label(scenario)
                w = sum(pc * scenario.defender.cpt_b.row(d1, c)[1]
                        for c, pc in zip(scenario.labels("c"), scenario.defender.cpt_c.row(d1)))
                s *= w
                meta["attack_context"] = f"b={nb}"
            se[d1] = s
    return SolveReport(model, labels, policy.psi_table, policy.d1_star, predict, se,
                       policy.d2_rule, policy.intermediates, policy.psi_b,
                       attack_dist=dist if predict == "ara" else None,
                       attack_labels=scenario.labels("a"), metadata=meta)


def psi_report(model: str, psi: Dict[str, float], predict: str = "", metadata=None) -> SolveReport:
    """A report holding only a psi table, e.g. a model-averaged one."""
    labels = tuple(psi)
    d1_star = labels[argmax_first([psi[d] for d in labels])]
    return SolveReport(model, labels, dict(psi), d1_star, predict, metadata=dict(metadata or {}))
