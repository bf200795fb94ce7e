"""Model averaging of defender expected utilities over game structures."""
from __future__ import annotations

from typing import Mapping, Tuple

import numpy as np

from .solver_core import argmax_first


def model_average(reports: Mapping[str, Mapping[str, float]], prior: Mapping[str, float]) -> Tuple[dict, str]:
    """Prior-weighted psi(d1) over models, and its argmax.

    ``reports`` maps model id to a psi table over the same ordered d1 labels.
    """
    if not reports:
        raise ValueError("no models to average")
    if set(prior) != set(reports):
        raise ValueError(f"prior covers {sorted(prior)}, reports cover {sorted(reports)}")
    w = np.array([prior[m] for m in reports], dtype=float)
    if np.any(w < 0) or np.any(w > 1) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"prior is not a probability vector: {w.tolist()}")
    tables = list(reports.values())
    labels = list(tables[0])
    for m, t in reports.items():
        if list(t) != labels:
            raise ValueError(f"model {m!r} has d1 labels {list(t)}, expected {labels}")
    mixed = {d: float(sum(wi * t[d] for wi, t in zip(w, tables))) for d in labels}
    return mixed, labels[argmax_first([mixed[d] for d in labels])]
