"""Regenerate the bundled golden scenarios from the published example tables."""
import json
from pathlib import Path

D1 = ["anom. det. & data prov.", "info. sec. & train.", "random audits"]
A = ["small", "medium", "large"]
S = ["success", "fail"]
E = ["detected", "not detected"]
D2 = ["major upgrade", "minor upgrade", "no upgrade"]
B = ["blocked", "not blocked"]
C = ["good", "not so good"]

u_d1 = dict(zip(D1, [-100, -60, -50]))
u_d2 = dict(zip(D2, [0, 25, -100]))
u_se = {"success": {"detected": 50, "not detected": -100}, "fail": {"detected": 100, "not detected": 0}}

# p(e = detected | d1, a, s): [success small/med/large, fail small/med/large]
p_e = {D1[0]: [0.6, 0.7, 0.8, 0.7, 0.8, 0.9],
       D1[1]: [0.3, 0.4, 0.5, 0.4, 0.5, 0.6],
       D1[2]: [0.1] * 6}
p_s = {D1[0]: [0.1, 0.07, 0.05], D1[1]: [0.3, 0.25, 0.2], D1[2]: [0.5, 0.4, 0.3]}
direct = {D1[0]: [0.8, 0.15, 0.05], D1[1]: [0.2, 0.6, 0.2], D1[2]: [0.5, 0.4, 0.1]}


def binary(p, labels):
    return {labels[0]: p, labels[1]: round(1 - p, 12)}


cpt_e = {d: {a: {s: binary(p_e[d][3 * si + ai], E) for si, s in enumerate(S)} for ai, a in enumerate(A)} for d in D1}
cpt_s = {d: {a: binary(p_s[d][ai], S) for ai, a in enumerate(A)} for d in D1}
direct_rows = {d: dict(zip(A, direct[d])) for d in D1}

N = lambda m, sd: {"normal": {"mean": m, "sd": sd}}
X = lambda k: {"shifted_neg_exp": {"shift": 100, "rate": k}}
# columns: (success, detected), (fail, detected), (success, not), (fail, not)
cols = [("success", "detected"), ("fail", "detected"), ("success", "not detected"), ("fail", "not detected")]
major = [N(-85, 3), N(-95, 1), N(-80, 5), N(-90, 2)]
minor = {"small": [N(-55, 7), N(-65, 3), N(-50, 10), N(-60, 5)],
         "medium": [N(-50, 5), N(-65, 3), N(-40, 10), N(-60, 5)],
         "large": [N(-20, 5), N(-65, 3), N(-30, 10), N(-60, 5)]}
noup = {"small": [3, 3, 5, 5], "medium": [2, 2, 3, 3], "large": [1, 1, 1, 1]}
ru = {a: {s: {e: {} for e in E} for s in S} for a in A}
for a in A:
    for ci, (s, e) in enumerate(cols):
        ru[a][s][e] = {D2[0]: major[ci], D2[1]: minor[a][ci], D2[2]: X(noup[a][ci])}

Dir = lambda *al: {"dirichlet": {"alphas": list(al)}}
d2_tab = {
    "small": {D1[0]: [(1, 3, 6), (1, 9, 90), (2, 2, 4), (2, 18, 80)],
              D1[1]: [(1, 5, 4), (1, 9, 90), (2, 6, 2), (2, 18, 80)],
              D1[2]: [(1, 4, 5), (1, 9, 90), (2, 5, 3), (2, 18, 80)]},
    "medium": {D1[0]: [(2.5, 7, 0.5), (1, 9, 90), (3, 6.5, 0.5), (2, 18, 80)],
               D1[1]: [(1.5, 8, 0.5), (1, 9, 90), (2, 7.5, 0.5), (2, 18, 80)],
               D1[2]: [(2, 6, 2), (1, 9, 90), (3, 7, 1), (2, 18, 80)]},
    "large": {d: [(5, 4.9, 0.1), (1, 9, 90), (5.5, 4.4, 0.1), (2, 18, 80)] for d in D1},
}
rc_d2 = {d: {a: {s: {} for s in S} for a in A} for d in D1}
for a in A:
    for d in D1:
        for ci, (s, e) in enumerate(cols):
            rc_d2[d][a][s][e] = Dir(*d2_tab[a][d][ci])

Be = lambda x, y: {"beta": {"a": x, "b": y}}
e_tab = {"small": {D1[0]: [(6, 4), (7, 3)], D1[1]: [(3, 7), (4, 6)], D1[2]: [(1, 9), (1, 9)]},
         "medium": {D1[0]: [(7, 3), (8, 2)], D1[1]: [(4, 6), (5, 5)], D1[2]: [(1, 9), (1, 9)]},
         "large": {D1[0]: [(8, 2), (9, 1)], D1[1]: [(5, 5), (6, 4)], D1[2]: [(1, 9), (1, 9)]}}
rc_e = {d: {a: {s: Be(*e_tab[a][d][si]) for si, s in enumerate(S)} for a in A} for d in D1}
s_tab = {D1[0]: [(4, 6), (2, 8), (0.5, 9.5)], D1[1]: [(9, 1), (8, 2), (7, 3)], D1[2]: [(7, 3), (6, 4), (3, 7)]}
rc_s = {d: {a: Be(*s_tab[d][ai]) for ai, a in enumerate(A)} for d in D1}

attacker = {
    "random_utility": {"rows": ru},
    "random_cpt_d2": {"rows": rc_d2},
    "random_cpt_e": {"rows": rc_e},
    "random_cpt_s": {"rows": rc_s},
}
mc = {"n": 10000, "seed": 7, "exp_param": "rate"}

dad = {
    "version": 1, "model": "dad",
    "spaces": {"d1": D1, "a": A, "s": S, "e": E, "d2": D2},
    "defender": {"utility": {"u_d1": u_d1, "u_se": u_se, "u_d2": u_d2},
                 "cpt_s": {"rows": cpt_s}, "cpt_e": {"rows": cpt_e},
                 "direct_attack_dist": {"rows": direct_rows}},
    "attacker": attacker, "mc": mc,
}
p_b = {D1[0]: (0.9, 0.7), D1[1]: (0.8, 0.1), D1[2]: (0.7, 0.2)}
p_c = {D1[0]: 0.5, D1[1]: 0.7, D1[2]: 0.3}
culture = {
    "version": 1, "model": "culture",
    "spaces": {"d1": D1, "a": A, "s": S, "e": E, "d2": D2, "b": B, "c": C},
    "defender": {"utility": {"u_d1": u_d1, "u_se": u_se, "u_d2": u_d2, "u_b": {"blocked": 100, "not blocked": -50}},
                 "cpt_s": {"rows": cpt_s}, "cpt_e": {"rows": cpt_e},
                 "cpt_b": {"rows": {d: {c: binary(p_b[d][ci], B) for ci, c in enumerate(C)} for d in D1}},
                 "cpt_c": {"rows": {d: binary(p_c[d], C) for d in D1}},
                 "direct_attack_dist": {"rows": direct_rows}},
    "attacker": attacker, "mc": mc,
}
out = Path(__file__).resolve().parents[1] / "src" / "ara_insider" / "data"
for name, doc in (("golden_dad", dad), ("golden_culture", culture)):
    (out / f"{name}.scenario").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
