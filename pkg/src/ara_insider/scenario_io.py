"""Scenario documents (JSON) and report text.

Table rows are nested objects keyed by label, one nesting level per
conditioning space, in the order listed in ``model.DEFENDER_TABLES`` and
``model.ATTACKER_TABLES``. Errors carry document paths such as
``defender.cpt_s.rows["Random audits","Large"]``.
"""
from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from .model import (ATTACKER_TABLES, CPT, DEFENDER_TABLES, RANDOM_UTILITY_OVER, SPACES, VARIANTS,
                    AdditiveUtility, Attacker, Defender, Issue, MCConfig, RandomCPT, RandomUtility,
                    Scenario, ScenarioError, check, row_path)
from .sampling import Beta, DistError, Dirichlet, Normal, PointMass, ShiftedNegExp

TOP_KEYS = {"version", "model", "spaces", "defender", "attacker", "mc"}
DEFENDER_KEYS = {"utility", "cpt_s", "cpt_e", "cpt_b", "cpt_c", "cpt_s_not_blocked", "direct_attack_dist"}
ATTACKER_KEYS = {"random_utility", "random_cpt_d2", "random_cpt_e", "random_cpt_s", "random_cpt_d",
                 "random_cpt_s_not_blocked"}
UTILITY_KEYS = {"u_d1", "u_se", "u_d2", "u_b", "u_das"}
MC_KEYS = {"n", "seed", "exp_param"}
DIST_FIELDS = {
    "normal": ("mean", "sd"),
    "shifted_neg_exp": ("shift", "rate"),
    "beta": ("a", "b"),
    "dirichlet": ("alphas",),
    "point": ("value",),
}


def bundled(name: str) -> Optional[Path]:
    """Path of a bundled data file, matched with or without its extension."""
    root = resources.files("ara_insider") / "data"
    for cand in (name, f"{name}.scenario", f"{name}.csv"):
        p = root / cand
        if p.is_file():
            return Path(str(p))
    return None


class _Reader:
    def __init__(self, lenient: bool):
        self.lenient = lenient
        self.issues: List[Issue] = []

    def err(self, path, msg):
        self.issues.append(Issue(path, msg))

    def keys(self, obj, allowed, path, required=()):
        if not isinstance(obj, dict):
            self.err(path, "expected an object")
            return False
        for k in obj:
            if k not in allowed:
                self.issues.append(Issue(f"{path}.{k}" if path else k, "unknown key",
                                         "warning" if self.lenient else "error"))
        for k in required:
            if k not in obj:
                self.err(f"{path}.{k}" if path else k, "required key missing")
        return True

    def nested(self, obj, depth, path, leaf, prefix=()):
        """Flatten ``depth`` levels of label-keyed objects into tuple keys."""
        out = {}
        if depth == 0:
            value = leaf(obj, row_path(path, prefix))
            if value is not None:
                out[prefix] = value
            return out
        if not isinstance(obj, dict):
            self.err(row_path(path, prefix) if prefix else f"{path}.rows", "expected an object keyed by label")
            return out
        for k, v in obj.items():
            out.update(self.nested(v, depth - 1, path, leaf, prefix + (k,)))
        return out

    def number(self, v, path):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.err(path, f"expected a number, got {v!r}")
            return None
        return v

    def prob_row(self, target_labels):
        def leaf(obj, path):
            if not isinstance(obj, dict):
                self.err(path, "expected an object mapping target label to probability")
                return None
            for k in obj:
                if k not in target_labels:
                    self.err(f"{path}[{json.dumps(k)}]", f"unknown label {k!r}")
            missing = [lab for lab in target_labels if lab not in obj]
            if missing:
                self.err(path, f"missing probabilities for {missing}")
                return None
            vals = [self.number(obj[lab], f"{path}[{json.dumps(lab)}]") for lab in target_labels]
            return None if None in vals else tuple(vals)
        return leaf

    def dist(self, obj, path):
        if not isinstance(obj, dict) or len(obj) != 1:
            self.err(path, f"expected one of {sorted(DIST_FIELDS)} as a single-key object")
            return None
        (kind, params), = obj.items()
        if kind not in DIST_FIELDS:
            self.err(path, f"unknown distribution {kind!r}")
            return None
        if not isinstance(params, dict):
            self.err(f"{path}.{kind}", "expected an object")
            return None
        fields = DIST_FIELDS[kind]
        for k in params:
            if k not in fields:
                self.err(f"{path}.{kind}.{k}", "unknown key")
        if any(f not in params for f in fields):
            self.err(f"{path}.{kind}", f"needs {list(fields)}")
            return None
        try:
            if kind == "normal":
                return Normal(params["mean"], params["sd"])
            if kind == "shifted_neg_exp":
                return ShiftedNegExp(params["shift"], params["rate"])
            if kind == "beta":
                return Beta(params["a"], params["b"])
            if kind == "dirichlet":
                if not isinstance(params["alphas"], list):
                    raise DistError("alphas", "expected a list")
                return Dirichlet(tuple(params["alphas"]))
            return PointMass(params["value"])
        except DistError as exc:
            self.err(f"{path}.{kind}.{exc.field}", str(exc).split(": ", 1)[-1])
        except (TypeError, ValueError) as exc:
            self.err(f"{path}.{kind}", str(exc))
        return None


def from_document(doc: dict, lenient: bool = False) -> Scenario:
    """Build and validate a Scenario from a parsed document."""
    r = _Reader(lenient)
    if not r.keys(doc, TOP_KEYS, "", ("version", "model", "spaces", "defender")):
        raise ScenarioError(r.issues)
    if "version" in doc and doc["version"] != 1:
        r.err("version", f"unsupported version {doc['version']!r}; expected 1")
    model = doc.get("model")
    if model not in VARIANTS:
        r.err("model", f"expected one of {list(VARIANTS)}, got {model!r}")
        raise ScenarioError(r.issues)

    spaces = {}
    if r.keys(doc.get("spaces"), set(SPACES[model]), "spaces", SPACES[model]):
        for role, labels in doc["spaces"].items():
            if not isinstance(labels, list):
                r.err(f"spaces.{role}", "expected a list of labels")
            else:
                spaces[role] = tuple(labels)
    if any(i.level == "error" for i in r.issues):
        raise ScenarioError(r.issues)

    dd = doc.get("defender")
    defender = None
    if r.keys(dd, DEFENDER_KEYS, "defender", ("utility",)):
        ud = dd.get("utility", {})
        u = AdditiveUtility()
        if r.keys(ud, UTILITY_KEYS, "defender.utility"):
            num = lambda v, p: r.number(v, p)

            def flat(key, depth):
                if key not in ud:
                    return None
                out = r.nested(ud[key], depth, f"defender.utility.{key}", num)
                return {k[0]: v for k, v in out.items()} if depth == 1 else out

            u = AdditiveUtility(flat("u_d1", 1) or {}, flat("u_se", 2) or {}, flat("u_d2", 1) or {},
                                flat("u_b", 1), flat("u_das", 3))
        tables = {}
        for key in DEFENDER_KEYS - {"utility"}:
            if key not in dd:
                continue
            path = f"defender.{key}"
            if key not in DEFENDER_TABLES[model]:
                r.err(path, f"not used by the {model} model")
                continue
            target, given = DEFENDER_TABLES[model][key]
            if r.keys(dd[key], {"rows"}, path, ("rows",)):
                rows = r.nested(dd[key]["rows"], len(given), path, r.prob_row(spaces.get(target, ())))
                tables[key] = CPT(target, given, rows, path)
        defender = Defender(u, **tables)

    attacker = None
    ad = doc.get("attacker")
    if ad is not None and r.keys(ad, ATTACKER_KEYS, "attacker"):
        tables = {}
        for key in ATTACKER_KEYS:
            if key not in ad:
                continue
            path = f"attacker.{key}"
            if not r.keys(ad[key], {"rows"}, path, ("rows",)):
                continue
            if key == "random_utility":
                over = RANDOM_UTILITY_OVER[model]
                tables[key] = RandomUtility(over, r.nested(ad[key]["rows"], len(over), path, r.dist), path)
            elif key not in ATTACKER_TABLES[model]:
                r.err(path, f"not used by the {model} model")
            else:
                target, given = ATTACKER_TABLES[model][key]
                tables[key] = RandomCPT(target, given, r.nested(ad[key]["rows"], len(given), path, r.dist), path)
        attacker = Attacker(**tables)

    mc = MCConfig()
    if "mc" in doc and r.keys(doc["mc"], MC_KEYS, "mc"):
        mc = MCConfig(**{k: v for k, v in doc["mc"].items() if k in MC_KEYS})

    if any(i.level == "error" for i in r.issues) or defender is None:
        raise ScenarioError(r.issues)
    scenario = Scenario(model, spaces, defender, attacker, mc, doc.get("version", 1))
    issues = r.issues + check(scenario)
    if any(i.level == "error" for i in issues):
        raise ScenarioError(issues)
    object.__setattr__(scenario, "_load_warnings", [i for i in issues if i.level == "warning"])
    return scenario


def load(text: str, lenient: bool = False) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([Issue(f"line {exc.lineno} column {exc.colno}", f"syntax error: {exc.msg}")]) from None
    return from_document(doc, lenient)


def load_file(path, lenient: bool = False) -> Scenario:
    return load(Path(path).read_text(encoding="utf-8"), lenient)


def load_warnings(scenario: Scenario) -> list:
    return list(getattr(scenario, "_load_warnings", []))


def _unflatten(rows: dict, value=lambda v: v):
    out: dict = {}
    for key, v in rows.items():
        if not key:
            return value(v)
        node = out
        for k in key[:-1]:
            node = node.setdefault(k, {})
        node[key[-1]] = value(v)
    return out


def dist_to_doc(spec) -> dict:
    if isinstance(spec, Normal):
        return {"normal": {"mean": spec.mean, "sd": spec.sd}}
    if isinstance(spec, ShiftedNegExp):
        return {"shifted_neg_exp": {"shift": spec.shift, "rate": spec.k}}
    if isinstance(spec, Beta):
        return {"beta": {"a": spec.a, "b": spec.b}}
    if isinstance(spec, Dirichlet):
        return {"dirichlet": {"alphas": list(spec.alphas)}}
    return {"point": {"value": list(spec.value) if spec.is_simplex else spec.value}}


def to_document(s: Scenario) -> dict:
    doc: dict = {"version": s.version, "model": s.model, "spaces": {k: list(v) for k, v in s.spaces.items()}}
    u = s.defender.utility
    ud: dict = {}
    if s.model == "simultaneous":
        ud["u_das"] = _unflatten(u.u_das or {})
    else:
        ud["u_d1"] = dict(u.u_d1)
        ud["u_se"] = _unflatten(u.u_se)
        ud["u_d2"] = dict(u.u_d2)
        if u.u_b is not None:
            ud["u_b"] = dict(u.u_b)
    d: dict = {"utility": ud}
    for key in DEFENDER_TABLES[s.model]:
        cpt = getattr(s.defender, key)
        if cpt is not None:
            target = s.spaces[cpt.target]
            d[key] = {"rows": _unflatten(cpt.rows, lambda row: dict(zip(target, row)))}
    doc["defender"] = d
    if s.attacker is not None:
        a: dict = {}
        if s.attacker.random_utility is not None:
            a["random_utility"] = {"rows": _unflatten(s.attacker.random_utility.rows, dist_to_doc)}
        for key in ATTACKER_TABLES[s.model]:
            t = getattr(s.attacker, key)
            if t is not None:
                a[key] = {"rows": _unflatten(t.rows, dist_to_doc)}
        doc["attacker"] = a
    mc = {"n": s.mc.n, "exp_param": s.mc.exp_param}
    if s.mc.seed is not None:
        mc["seed"] = s.mc.seed
    doc["mc"] = mc
    return doc


def save(scenario: Scenario) -> str:
    return json.dumps(to_document(scenario), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- reports

def fmt(x) -> str:
    """Six significant digits, trailing zeros kept."""
    if x is None:
        return ""
    x = float(x)
    if x == 0:
        x = 0.0
    return f"{x:#.6g}"


def _csv_text(sections) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, (header, rows) in enumerate(sections):
        if i:
            buf.write("\n")
        w.writerow(header)
        w.writerows(rows)
    return buf.getvalue()


def _report_sections(report, with_se=True):
    se = report.psi_se or {}
    head = ["model", "d1", "psi"] + (["se"] if with_se else [])
    psi_rows = [[report.model, d, fmt(report.psi[d])] + ([fmt(se.get(d))] if with_se else [])
                for d in report.d1_labels]
    sections = [(head, psi_rows)]

    pred_head = ["d1", "a", "p"] + (["se"] if with_se else []) + ["n", "seed"]
    pred_rows = []
    dist = report.attack_dist
    if dist is not None:
        for ci, ctx in enumerate(dist.contexts):
            for ai, a in enumerate(dist.attacks):
                row = [ctx[0] if ctx else "", a, fmt(dist.p[ci, ai])]
                if with_se:
                    row.append(fmt(dist.se[ci, ai]) if dist.se is not None else "")
                pred_rows.append(row + [str(dist.n), str(dist.seed)])
    sections.append((pred_head, pred_rows))
    return sections


def write_report(report, fmt_name: str = "csv", with_se: bool = True) -> str:
    """Report text; row order follows declared label order so output is byte-stable."""
    if fmt_name == "csv":
        sections = _report_sections(report, with_se)
        if report.intermediates:
            sections.append((["d1", "a", "psi_d1_a"],
                             [[d, a, fmt(v)] for (d, a), v in report.intermediates.items()]))
        if report.psi_b:
            sections.append((["d1", "b", "psi_d1_b"], [[d, b, fmt(v)] for (d, b), v in report.psi_b.items()]))
        if report.d2_rule:
            width = len(next(iter(report.d2_rule)))
            head = ["d1", "s", "e", "d2"] if width == 3 else ["d1", "b", "s", "e", "d2"]
            sections.append((head, [list(k) + [v] for k, v in report.d2_rule.items()]))
        meta = [["d1_star", report.d1_star]] + [[k, v] for k, v in report.metadata.items()]
        sections.append((["key", "value"], meta))
        return _csv_text(sections)
    if fmt_name == "markdown":
        return _markdown(report, with_se)
    raise ValueError(f"unknown report format {fmt_name!r}")


def _md_table(header, rows) -> List[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return lines


def _pivot(values: dict, rows, cols):
    return [[r] + [fmt(values[(r, c)]) for c in cols] for r in rows]


def _markdown(report, with_se) -> str:
    out = [f"# {report.model} model, {report.predict} attack prediction", ""]
    se = report.psi_se or {}
    head = ["d1", "psi"] + (["se"] if with_se else [])
    out += _md_table(head, [[d, fmt(report.psi[d])] + ([fmt(se.get(d))] if with_se else [])
                            for d in report.d1_labels])
    out += ["", f"Optimal first defense: **{report.d1_star}**", ""]
    attacks = list(report.attack_labels)
    if report.intermediates:
        out += ["## Expected utility per first defense and attack", ""]
        out += _md_table(["d1"] + attacks, _pivot(report.intermediates, report.d1_labels, attacks)) + [""]
    if report.psi_b:
        bs = list(dict.fromkeys(b for _, b in report.psi_b))
        out += ["## Expected utility per first defense and blocking outcome", ""]
        out += _md_table(["d1"] + bs, _pivot(report.psi_b, report.d1_labels, bs)) + [""]
    dist = report.attack_dist
    rows = []
    if dist is not None:
        out += ["## Predictive attack probabilities", ""]
        for ci, ctx in enumerate(dist.contexts):
            cells = []
            for ai in range(len(dist.attacks)):
                cell = fmt(dist.p[ci, ai])
                if with_se and dist.se is not None:
                    cell += f" ± {fmt(dist.se[ci, ai])}"
                cells.append(cell)
            rows.append([ctx[0] if ctx else ""] + cells)
        out += _md_table(["d1"] + attacks, rows) + [""]
    if report.d2_rule:
        width = len(next(iter(report.d2_rule)))
        head = ["d1", "s", "e", "d2"] if width == 3 else ["d1", "b", "s", "e", "d2"]
        out += ["## Second defense rule", ""]
        out += _md_table(head, [list(k) + [v] for k, v in report.d2_rule.items()]) + [""]
    out += ["## Metadata", ""]
    out += _md_table(["key", "value"], [[k, v] for k, v in report.metadata.items()])
    return "\n".join(out) + "\n"


def read_psi_table(text: str) -> tuple:
    """``(model, {d1: psi})`` from the first section of a CSV report."""
    first = text.split("\n\n", 1)[0]
    rows = list(csv.reader(io.StringIO(first)))
    if not rows or rows[0][:3] != ["model", "d1", "psi"]:
        raise ValueError("not a report: first section must start with header model,d1,psi")
    models = {r[0] for r in rows[1:]}
    if len(models) != 1:
        raise ValueError(f"report mixes models {sorted(models)}")
    table: Dict[str, float] = {}
    for r in rows[1:]:
        if r[1] in table:
            raise ValueError(f"duplicate d1 {r[1]!r}")
        table[r[1]] = float(r[2])
    return models.pop(), table
