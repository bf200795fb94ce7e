"""Distribution specs for the attacker's random utilities and probabilities,
plus seeded substreams.

Every draw for Monte Carlo sample ``k`` comes from ``substream(seed, k)``, so
results do not depend on how samples are split across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np


class DistError(ValueError):
    """Invalid distribution parameters. ``field`` names the offending one."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def __post_init__(self):
        _finite("mean", self.mean)
        _positive("sd", self.sd)


@dataclass(frozen=True)
class ShiftedNegExp:
    """``shift - Exponential(k)``.

    ``reading`` says whether ``k`` is the rate (mean 1/k) or the mean.
    """

    shift: float
    k: float
    reading: str = "rate"

    def __post_init__(self):
        _finite("shift", self.shift)
        _positive("rate", self.k)
        if self.reading not in ("rate", "mean"):
            raise DistError("exp_param", f"must be 'rate' or 'mean', got {self.reading!r}")

    @property
    def scale(self) -> float:
        return 1.0 / self.k if self.reading == "rate" else float(self.k)

    @property
    def mean(self) -> float:
        return self.shift - self.scale


@dataclass(frozen=True)
class Beta:
    """Probability of the first label of a binary space."""

    a: float
    b: float

    def __post_init__(self):
        _positive("a", self.a)
        _positive("b", self.b)


@dataclass(frozen=True)
class Dirichlet:
    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(x) for x in self.alphas))
        if len(self.alphas) < 2:
            raise DistError("alphas", "need at least two components")
        for i, x in enumerate(self.alphas):
            _positive(f"alphas[{i}]", x)


@dataclass(frozen=True)
class PointMass:
    """Degenerate distribution; ``value`` is a scalar or a simplex tuple."""

    value: Union[float, tuple]

    def __post_init__(self):
        if isinstance(self.value, (list, tuple, np.ndarray)):
            v = tuple(float(x) for x in self.value)
            object.__setattr__(self, "value", v)
            if any(x < 0 or x > 1 or math.isnan(x) for x in v):
                raise DistError("value", "simplex entries must lie in [0, 1]")
            if abs(sum(v) - 1.0) > 1e-9:
                raise DistError("value", f"simplex sums to {sum(v):.6g}, not 1")
        else:
            _finite("value", self.value)

    @property
    def is_simplex(self) -> bool:
        return isinstance(self.value, tuple)


DistSpec = Union[Normal, ShiftedNegExp, Beta, Dirichlet, PointMass]


def _finite(name, x):
    if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
        raise DistError(name, f"must be a finite number, got {x!r}")


def _positive(name, x):
    _finite(name, x)
    if x <= 0:
        raise DistError(name, f"must be > 0, got {x!r}")


def dimension(spec: DistSpec) -> int:
    """Length of a draw: 1 for scalars, the number of components for simplices."""
    if isinstance(spec, Dirichlet):
        return len(spec.alphas)
    if isinstance(spec, PointMass) and spec.is_simplex:
        return len(spec.value)
    return 1


class RngStream:
    """Deterministic random stream identified by ``(seed, index)``."""

    def __init__(self, seed: int, index: int = 0):
        if index < 0:
            raise ValueError(f"stream index must be >= 0, got {index}")
        self.seed = int(seed)
        self.index = int(index)
        ss = np.random.SeedSequence(self.seed % 2**64, spawn_key=(self.index,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, index={self.index})"


def substream(seed: int, index: int) -> RngStream:
    return RngStream(seed, index)


def dirichlet_draw(gen: np.random.Generator, alphas: np.ndarray, groups: np.ndarray | None = None):
    """Dirichlet draws via log-gamma variates, safe for tiny shape parameters.

    Uses Gamma(a) = Gamma(a + 1) * U**(1/a) in log space so that components
    with a << 1 never underflow to an all-zero row. ``groups`` holds the start
    offset of each simplex in the flat ``alphas`` vector.
    """
    logx = np.log(gen.gamma(alphas + 1.0)) + np.log(gen.random(alphas.shape[0])) / alphas
    if groups is None:
        groups = np.zeros(1, dtype=np.intp)
    top = np.maximum.reduceat(logx, groups)
    seg = np.repeat(top, np.diff(np.append(groups, logx.shape[0])))
    w = np.exp(logx - seg)
    tot = np.add.reduceat(w, groups)
    return w / np.repeat(tot, np.diff(np.append(groups, logx.shape[0])))


def sample(spec: DistSpec, rng: RngStream, size: int | None = None):
    """Draw from ``spec``.

    Without ``size``: a float, or a numpy simplex for Dirichlet and simplex
    point masses. With ``size``: an array with one draw per row.
    """
    gen = rng.generator
    if isinstance(spec, PointMass):
        v = np.array(spec.value) if spec.is_simplex else float(spec.value)
        if size is None:
            return v
        return np.tile(v, (size, 1)) if spec.is_simplex else np.full(size, v)
    if isinstance(spec, Normal):
        x = gen.normal(spec.mean, spec.sd, size)
    elif isinstance(spec, ShiftedNegExp):
        x = spec.shift - gen.exponential(spec.scale, size)
    elif isinstance(spec, Beta):
        x = gen.beta(spec.a, spec.b, size)
    elif isinstance(spec, Dirichlet):
        alphas = np.asarray(spec.alphas)
        if size is None:
            return dirichlet_draw(gen, alphas)
        k = alphas.shape[0]
        flat = dirichlet_draw(gen, np.tile(alphas, size), np.arange(0, k * size, k))
        return flat.reshape(size, k)
    else:
        raise TypeError(f"not a distribution spec: {spec!r}")
    return float(x) if size is None else x


class FlatSampler:
    """Draws a fixed collection of specs into one flat vector per stream.

    Each spec occupies ``dimension(spec)`` consecutive slots, except that a
    ``Beta`` (or scalar ``PointMass``) flagged as binary fills two slots with
    ``(p, 1 - p)``. Draw order inside a stream is fixed: normals, exponentials,
    betas, then Dirichlet gammas and uniforms.
    """

    def __init__(self, items: Sequence[tuple]):
        # items: (spec, binary) pairs in slot order
        self.size = 0
        const = []
        norm_i, norm_m, norm_s = [], [], []
        exp_i, exp_shift, exp_scale = [], [], []
        beta_i, beta_a, beta_b = [], [], []
        dir_i, dir_alpha, dir_groups = [], [], []
        for spec, binary in items:
            off = self.size
            if isinstance(spec, PointMass):
                if spec.is_simplex:
                    const += [(off + j, v) for j, v in enumerate(spec.value)]
                    self.size += len(spec.value)
                elif binary:
                    const += [(off, spec.value), (off + 1, 1.0 - spec.value)]
                    self.size += 2
                else:
                    const.append((off, spec.value))
                    self.size += 1
            elif isinstance(spec, Normal):
                norm_i.append(off), norm_m.append(spec.mean), norm_s.append(spec.sd)
                self.size += 1
            elif isinstance(spec, ShiftedNegExp):
                exp_i.append(off), exp_shift.append(spec.shift), exp_scale.append(spec.scale)
                self.size += 1
            elif isinstance(spec, Beta):
                beta_i.append(off), beta_a.append(spec.a), beta_b.append(spec.b)
                self.size += 2 if binary else 1
            elif isinstance(spec, Dirichlet):
                dir_groups.append(len(dir_alpha))
                dir_i.extend(range(off, off + len(spec.alphas)))
                dir_alpha.extend(spec.alphas)
                self.size += len(spec.alphas)
            else:
                raise TypeError(f"not a distribution spec: {spec!r}")
        self._binary_beta = [b for (s, b) in items if isinstance(s, Beta)]
        self.template = np.zeros(self.size)
        for i, v in const:
            self.template[i] = v
        ia = lambda x: np.asarray(x, dtype=np.intp)
        fa = lambda x: np.asarray(x, dtype=float)
        self._norm = (ia(norm_i), fa(norm_m), fa(norm_s))
        self._exp = (ia(exp_i), fa(exp_shift), fa(exp_scale))
        self._beta = (ia(beta_i), fa(beta_a), fa(beta_b))
        self._beta_pair = ia([i + 1 for i, b in zip(beta_i, self._binary_beta) if b])
        self._beta_pair_src = np.asarray(self._binary_beta, dtype=bool)
        self._dir = (ia(dir_i), fa(dir_alpha), ia(dir_groups))

    def draw(self, gen: np.random.Generator, out: np.ndarray) -> None:
        out[:] = self.template
        idx, m, s = self._norm
        if idx.size:
            out[idx] = gen.normal(m, s)
        idx, shift, scale = self._exp
        if idx.size:
            out[idx] = shift - gen.exponential(scale)
        idx, a, b = self._beta
        if idx.size:
            p = gen.beta(a, b)
            out[idx] = p
            out[self._beta_pair] = 1.0 - p[self._beta_pair_src]
        idx, alpha, groups = self._dir
        if idx.size:
            out[idx] = dirichlet_draw(gen, alpha, groups)
