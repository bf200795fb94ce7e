"""Scenario builders and transforms shared by the solver tests."""
from dataclasses import replace

from ara_insider.model import RandomUtility
from ara_insider.sampling import Normal, PointMass, ShiftedNegExp
from ara_insider.scenario_io import from_document


def affine_utility(scenario, scale, shift):
    """Apply u -> scale * u + shift to every attacker utility row."""
    def tr(spec):
        if isinstance(spec, Normal):
            return Normal(scale * spec.mean + shift, scale * spec.sd)
        if isinstance(spec, ShiftedNegExp):
            # scale * (shift - Exp(rate k)) + c = (scale*shift + c) - Exp(rate k/scale)
            k = spec.k / scale if spec.reading == "rate" else spec.k * scale
            return ShiftedNegExp(scale * spec.shift + shift, k, spec.reading)
        if isinstance(spec, PointMass):
            return PointMass(scale * spec.value + shift)
        raise TypeError(spec)

    ru = scenario.attacker.random_utility
    new = RandomUtility(ru.over, {k: tr(v) for k, v in ru.rows.items()}, ru.path)
    return replace(scenario, attacker=replace(scenario.attacker, random_utility=new))


def two_by_two(u, p_success, attacker=None, direct=(0.5, 0.5)):
    """Simultaneous game with one or two defenses, two attacks, binary outcome.

    ``u[d][a] = (u_success, u_fail)``, ``p_success[d][a]``.
    """
    ds = list(u)
    doc = {
        "version": 1, "model": "simultaneous",
        "spaces": {"d": ds, "a": ["a1", "a2"], "s": ["s1", "s2"]},
        "defender": {
            "utility": {"u_das": {d: {a: {"s1": u[d][a][0], "s2": u[d][a][1]} for a in u[d]} for d in ds}},
            "cpt_s": {"rows": {d: {a: {"s1": p_success[d][a], "s2": 1 - p_success[d][a]}
                                   for a in u[d]} for d in ds}},
            "direct_attack_dist": {"rows": {"a1": direct[0], "a2": direct[1]}},
        },
        "mc": {"n": 1000, "seed": 3},
    }
    if attacker is not None:
        doc["attacker"] = attacker
    return from_document(doc)


def point(v):
    return {"point": {"value": v}}
