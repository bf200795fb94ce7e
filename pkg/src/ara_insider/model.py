"""Scenario declaration and validation.

Spaces are referred to by role name: ``d1, a, s, e, d2`` for the
defend-attack-defend games, plus ``b, c`` for the culture variant and
``d, a, s`` for the simultaneous game. Binary spaces put the "positive" label
first (success, detected, blocked, good); Beta rows and point masses on a
binary target give the probability of that first label.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from .sampling import Beta, DistError, DistSpec, Dirichlet, PointMass, dimension

VARIANTS = ("simultaneous", "dad", "culture")
UTILITY_SCALE = 100.0
ROW_TOL = 1e-9

# (target, given) per table and variant
DEFENDER_TABLES = {
    "simultaneous": {
        "cpt_s": ("s", ("d", "a")),
        "direct_attack_dist": ("a", ()),
    },
    "dad": {
        "cpt_s": ("s", ("d1", "a")),
        "cpt_e": ("e", ("d1", "a", "s")),
        "direct_attack_dist": ("a", ("d1",)),
    },
    "culture": {
        "cpt_s": ("s", ("d1", "a")),
        "cpt_s_not_blocked": ("s", ("d1", "a")),
        "cpt_e": ("e", ("d1", "a", "s")),
        "cpt_b": ("b", ("d1", "c")),
        "cpt_c": ("c", ("d1",)),
        "direct_attack_dist": ("a", ("d1",)),
    },
}
ATTACKER_TABLES = {
    "simultaneous": {
        "random_cpt_s": ("s", ("d", "a")),
        "random_cpt_d": ("d", ()),
    },
    "dad": {
        "random_cpt_d2": ("d2", ("d1", "a", "s", "e")),
        "random_cpt_e": ("e", ("d1", "a", "s")),
        "random_cpt_s": ("s", ("d1", "a")),
    },
    "culture": {
        "random_cpt_d2": ("d2", ("d1", "a", "s", "e")),
        "random_cpt_e": ("e", ("d1", "a", "s")),
        "random_cpt_s": ("s", ("d1", "a")),
        "random_cpt_s_not_blocked": ("s", ("d1", "a")),
    },
}
RANDOM_UTILITY_OVER = {
    "simultaneous": ("d", "a", "s"),
    "dad": ("a", "s", "e", "d2"),
    "culture": ("a", "s", "e", "d2"),
}
SPACES = {
    "simultaneous": ("d", "a", "s"),
    "dad": ("d1", "a", "s", "e", "d2"),
    "culture": ("d1", "a", "s", "e", "d2", "b", "c"),
}
OPTIONAL_TABLES = {"direct_attack_dist", "cpt_s_not_blocked", "random_cpt_s_not_blocked"}


@dataclass(frozen=True)
class Issue:
    path: str
    message: str
    level: str = "error"

    def __str__(self):
        return f"{self.level}: {self.path}: {self.message}"


class ScenarioError(ValueError):
    """Raised with every problem found, not just the first."""

    def __init__(self, issues):
        self.issues = list(issues)
        errors = [i for i in self.issues if i.level == "error"]
        super().__init__("\n".join(str(i) for i in errors) or "invalid scenario")


class LabelError(KeyError):
    pass


def row_path(base: str, key: tuple) -> str:
    return f"{base}.rows[{','.join(json.dumps(k) for k in key)}]"


@dataclass(frozen=True)
class CPT:
    """Conditional probability table; each row is aligned with the target's labels."""

    target: str
    given: Tuple[str, ...]
    rows: Mapping[tuple, Tuple[float, ...]]
    path: str = ""

    def row(self, *key) -> Tuple[float, ...]:
        try:
            return self.rows[tuple(key)]
        except KeyError:
            raise LabelError(f"{self.path or 'cpt'}: no row for {key!r}") from None

    def array(self, spaces: Mapping[str, tuple]) -> np.ndarray:
        """Dense array indexed by (given..., target) in declared label order."""
        dims = [len(spaces[g]) for g in self.given] + [len(spaces[self.target])]
        out = np.empty(dims)
        for idx in itertools.product(*(range(len(spaces[g])) for g in self.given)):
            key = tuple(spaces[g][i] for g, i in zip(self.given, idx))
            out[idx] = self.row(*key)
        return out


@dataclass(frozen=True)
class RandomCPT:
    target: str
    given: Tuple[str, ...]
    rows: Mapping[tuple, DistSpec]
    path: str = ""


@dataclass(frozen=True)
class RandomUtility:
    over: Tuple[str, ...]
    rows: Mapping[tuple, DistSpec]
    path: str = ""


@dataclass(frozen=True)
class AdditiveUtility:
    """Defender utility as a sum of marginal terms.

    ``u_das`` is only used by the simultaneous game, where the defender's
    utility is a full table over (d, a, s).
    """

    u_d1: Mapping[str, float] = field(default_factory=dict)
    u_se: Mapping[tuple, float] = field(default_factory=dict)
    u_d2: Mapping[str, float] = field(default_factory=dict)
    u_b: Optional[Mapping[str, float]] = None
    u_das: Optional[Mapping[tuple, float]] = None


@dataclass(frozen=True)
class Defender:
    utility: AdditiveUtility
    cpt_s: Optional[CPT] = None
    cpt_e: Optional[CPT] = None
    cpt_b: Optional[CPT] = None
    cpt_c: Optional[CPT] = None
    cpt_s_not_blocked: Optional[CPT] = None
    direct_attack_dist: Optional[CPT] = None


@dataclass(frozen=True)
class Attacker:
    random_utility: Optional[RandomUtility] = None
    random_cpt_d2: Optional[RandomCPT] = None
    random_cpt_e: Optional[RandomCPT] = None
    random_cpt_s: Optional[RandomCPT] = None
    random_cpt_d: Optional[RandomCPT] = None
    random_cpt_s_not_blocked: Optional[RandomCPT] = None


@dataclass(frozen=True)
class MCConfig:
    n: int = 10_000
    seed: Optional[int] = None
    exp_param: str = "rate"


@dataclass(frozen=True)
class Scenario:
    model: str
    spaces: Mapping[str, Tuple[str, ...]]
    defender: Defender
    attacker: Optional[Attacker] = None
    mc: MCConfig = MCConfig()
    version: int = 1

    def labels(self, role: str) -> Tuple[str, ...]:
        return tuple(self.spaces[role])

    def with_mc(self, **kw) -> "Scenario":
        return replace(self, mc=replace(self.mc, **kw))

    # defaults for the not-blocked branch fall back to the plain tables
    @property
    def defender_s_not_blocked(self) -> Optional[CPT]:
        return self.defender.cpt_s_not_blocked or self.defender.cpt_s

    @property
    def attacker_s_not_blocked(self) -> Optional[RandomCPT]:
        if self.attacker is None:
            return None
        return self.attacker.random_cpt_s_not_blocked or self.attacker.random_cpt_s


def utility_eval(u: AdditiveUtility, d1, s=None, e=None, d2=None, *, b=None, blocked=None) -> float:
    """Total defender utility for one terminal history.

    A blocked attack (``b == blocked``) ends the game, so only u(d1) + u(b)
    count there.
    """
    def get(table, key, name):
        try:
            return table[key]
        except (KeyError, TypeError):
            raise LabelError(f"{name}: unknown label {key!r}") from None

    total = get(u.u_d1, d1, "u_d1")
    if b is not None:
        if u.u_b is None:
            raise LabelError("u_b: missing from utility")
        total += get(u.u_b, b, "u_b")
        if blocked is not None and b == blocked:
            return total
    return total + get(u.u_se, (s, e), "u_se") + get(u.u_d2, d2, "u_d2")


def _check_space(role, labels, issues):
    path = f"spaces.{role}"
    if not labels:
        issues.append(Issue(path, "space is empty"))
        return
    if len(set(labels)) != len(labels):
        issues.append(Issue(path, "labels are not unique"))
    for lab in labels:
        if not isinstance(lab, str) or not lab:
            issues.append(Issue(path, f"label {lab!r} is not a non-empty string"))


def _expected_keys(spaces, given):
    return list(itertools.product(*(spaces[g] for g in given)))


def _check_shape(table, target, given, spaces, issues) -> bool:
    ok = True
    if target is not None and table.target != target:
        issues.append(Issue(f"{table.path}.target", f"expected {target!r}, got {table.target!r}"))
        ok = False
    if tuple(table.given) != tuple(given):
        issues.append(Issue(f"{table.path}.given", f"expected {list(given)}, got {list(table.given)}"))
        ok = False
    for r in (*given, *((target,) if target else ())):
        if r not in spaces:
            ok = False
    return ok


def _check_coverage(rows, keys, path, spaces, given, issues):
    expected = set(keys)
    for k in keys:
        if k not in rows:
            issues.append(Issue(row_path(path, k), "missing row"))
    for k in rows:
        if k not in expected:
            bad = [lab for g, lab in zip(given, k) if lab not in spaces.get(g, ())]
            what = f"unknown label {bad[0]!r}" if bad else "row key has wrong arity"
            issues.append(Issue(row_path(path, k), what))


def _check_cpt(cpt: CPT, target, given, spaces, issues):
    if not _check_shape(cpt, target, given, spaces, issues):
        return
    n = len(spaces[target])
    _check_coverage(cpt.rows, _expected_keys(spaces, given), cpt.path, spaces, given, issues)
    for k, row in cpt.rows.items():
        p = row_path(cpt.path, k)
        if len(row) != n:
            issues.append(Issue(p, f"row has {len(row)} entries, target {target!r} has {n} labels"))
            continue
        if any(not (0.0 <= x <= 1.0) for x in row):
            issues.append(Issue(p, "entries must lie in [0, 1]"))
        tot = float(sum(row))
        if abs(tot - 1.0) > ROW_TOL:
            issues.append(Issue(p, f"row sum {tot:.6g} ≠ 1"))


def _check_random_cpt(rc: RandomCPT, target, given, spaces, issues):
    if not _check_shape(rc, target, given, spaces, issues):
        return
    n = len(spaces[target])
    _check_coverage(rc.rows, _expected_keys(spaces, given), rc.path, spaces, given, issues)
    for k, spec in rc.rows.items():
        p = row_path(rc.path, k)
        if isinstance(spec, Beta) or (isinstance(spec, PointMass) and not spec.is_simplex):
            if n != 2:
                issues.append(Issue(p, f"scalar probability needs a binary target, {target!r} has {n} labels"))
            elif isinstance(spec, PointMass) and not (0.0 <= spec.value <= 1.0):
                issues.append(Issue(p, "point probability must lie in [0, 1]"))
        elif isinstance(spec, (Dirichlet, PointMass)):
            if dimension(spec) != n:
                issues.append(Issue(p, f"arity {dimension(spec)} does not match {n} labels of {target!r}"))
        else:
            issues.append(Issue(p, f"{type(spec).__name__} is not a distribution over probabilities"))


def _check_random_utility(ru: RandomUtility, over, spaces, issues):
    if tuple(ru.over) != tuple(over):
        issues.append(Issue(f"{ru.path}.over", f"expected {list(over)}, got {list(ru.over)}"))
        return
    _check_coverage(ru.rows, _expected_keys(spaces, over), ru.path, spaces, over, issues)
    for k, spec in ru.rows.items():
        if isinstance(spec, (Beta, Dirichlet)) or (isinstance(spec, PointMass) and spec.is_simplex):
            issues.append(Issue(row_path(ru.path, k), "utility rows must be scalar distributions"))


def _check_map(table, labels, path, issues, scale=True):
    if table is None:
        issues.append(Issue(path, "required for this model"))
        return
    for lab in labels:
        if lab not in table:
            issues.append(Issue(f"{path}[{json.dumps(lab)}]", "missing value"))
    for lab, v in table.items():
        if lab not in labels:
            issues.append(Issue(f"{path}[{json.dumps(lab)}]", f"unknown label {lab!r}"))
        elif scale and abs(v) > UTILITY_SCALE:
            issues.append(Issue(f"{path}[{json.dumps(lab)}]", f"{v} is outside [-100, 100]", "warning"))


def _check_keyed(table, keys, path, issues):
    if table is None:
        issues.append(Issue(path, "required for this model"))
        return
    for k in keys:
        if k not in table:
            issues.append(Issue(f"{path}[{','.join(json.dumps(x) for x in k)}]", "missing value"))
    wanted = set(keys)
    for k, v in table.items():
        p = f"{path}[{','.join(json.dumps(x) for x in k)}]"
        if k not in wanted:
            issues.append(Issue(p, f"unknown label tuple {k!r}"))
        elif abs(v) > UTILITY_SCALE:
            issues.append(Issue(p, f"{v} is outside [-100, 100]", "warning"))


def check(scenario: Scenario) -> list:
    """Every finding (errors and warnings) for a scenario."""
    issues: list = []
    model = scenario.model
    if model not in VARIANTS:
        return [Issue("model", f"unknown model {model!r}; expected one of {list(VARIANTS)}")]
    spaces = scenario.spaces
    for role in SPACES[model]:
        if role not in spaces:
            issues.append(Issue(f"spaces.{role}", "required for this model"))
        else:
            _check_space(role, spaces[role], issues)
    for role in spaces:
        if role not in SPACES[model]:
            issues.append(Issue(f"spaces.{role}", f"not used by the {model} model"))
    for role in ("s", "e", "b", "c"):
        if role in spaces and role in SPACES[model] and len(spaces[role]) != 2:
            issues.append(Issue(f"spaces.{role}", "must be binary"))
    if any(i.level == "error" for i in issues):
        return issues

    u = scenario.defender.utility
    if model == "simultaneous":
        _check_keyed(u.u_das, _expected_keys(spaces, ("d", "a", "s")), "defender.utility.u_das", issues)
    else:
        _check_map(u.u_d1, spaces["d1"], "defender.utility.u_d1", issues)
        _check_keyed(u.u_se, _expected_keys(spaces, ("s", "e")), "defender.utility.u_se", issues)
        _check_map(u.u_d2, spaces["d2"], "defender.utility.u_d2", issues)
        if model == "culture":
            _check_map(u.u_b, spaces["b"], "defender.utility.u_b", issues)
        elif u.u_b is not None:
            issues.append(Issue("defender.utility.u_b", f"not used by the {model} model"))

    d = scenario.defender
    for key, (target, given) in DEFENDER_TABLES[model].items():
        table = getattr(d, key)
        if table is None:
            if key not in OPTIONAL_TABLES:
                issues.append(Issue(f"defender.{key}", "required for this model"))
            continue
        _check_cpt(table, target, given, spaces, issues)
    for key in ("cpt_s", "cpt_e", "cpt_b", "cpt_c", "cpt_s_not_blocked", "direct_attack_dist"):
        if key not in DEFENDER_TABLES[model] and getattr(d, key) is not None:
            issues.append(Issue(f"defender.{key}", f"not used by the {model} model"))

    att = scenario.attacker
    if att is None:
        if d.direct_attack_dist is None:
            issues.append(Issue("attacker", "required when defender.direct_attack_dist is absent"))
    else:
        if att.random_utility is None:
            issues.append(Issue("attacker.random_utility", "required for this model"))
        else:
            _check_random_utility(att.random_utility, RANDOM_UTILITY_OVER[model], spaces, issues)
        for key, (target, given) in ATTACKER_TABLES[model].items():
            table = getattr(att, key)
            if table is None:
                if key not in OPTIONAL_TABLES:
                    issues.append(Issue(f"attacker.{key}", "required for this model"))
                continue
            _check_random_cpt(table, target, given, spaces, issues)
        for key in ("random_cpt_d2", "random_cpt_e", "random_cpt_s", "random_cpt_d", "random_cpt_s_not_blocked"):
            if key not in ATTACKER_TABLES[model] and getattr(att, key) is not None:
                issues.append(Issue(f"attacker.{key}", f"not used by the {model} model"))

    mc = scenario.mc
    if not isinstance(mc.n, int) or isinstance(mc.n, bool) or mc.n <= 0:
        issues.append(Issue("mc.n", f"must be a positive integer, got {mc.n!r}"))
    if mc.seed is not None and (not isinstance(mc.seed, int) or isinstance(mc.seed, bool)):
        issues.append(Issue("mc.seed", f"must be an integer, got {mc.seed!r}"))
    if mc.exp_param not in ("rate", "mean"):
        issues.append(Issue("mc.exp_param", f"must be 'rate' or 'mean', got {mc.exp_param!r}"))
    return issues


def validate(scenario: Scenario) -> Scenario:
    """Return the scenario unchanged if it has no errors, else raise ScenarioError."""
    issues = check(scenario)
    if any(i.level == "error" for i in issues):
        raise ScenarioError(issues)
    return scenario


def warnings_of(scenario: Scenario) -> list:
    return [i for i in check(scenario) if i.level == "warning"]


__all__ = [
    "AdditiveUtility", "Attacker", "CPT", "DistError", "Defender", "Issue", "LabelError",
    "MCConfig", "RandomCPT", "RandomUtility", "Scenario", "ScenarioError", "check",
    "utility_eval", "validate",
]
