"""Polynomial bias and Gowers uniformity norms via the additive character.

All exact averages run over the full domain in lexicographic point order,
so repeated runs are bit-for-bit identical.  Sampled estimators use the
seeded pcg64 generator and are deterministic given (seed, sample count).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceeded, InputError
from .ffpoly import MultiPoly, points_lex

RNG_ALGORITHM = "pcg64"

EXACT_TOL = 1e-9


def unit_phases(p: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * v / p) for v in range(p))


@dataclass(frozen=True)
class CharacterSum:
    """An averaged character value; sample_count 0 marks an exact average."""

    re: float
    im: float
    sample_count: int = 0

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    def as_complex(self) -> complex:
        return complex(self.re, self.im)


def exact_bias(f: MultiPoly, caps: Caps = DEFAULT_CAPS, workers: int = 1) -> CharacterSum:
    """E_x[e(f(x))] over the full domain, summed in lexicographic order.

    With workers > 1 the domain is split into that many contiguous chunks
    whose partial sums are merged pairwise in chunk order; the result is
    deterministic for a fixed worker count.
    """
    size = f.p ** f.n
    if size > caps.enum_cap:
        raise CapExceeded(
            f"p^n = {size} exceeds enumeration cap {caps.enum_cap}; use sampled_bias"
        )
    phases = unit_phases(f.p)
    table = f.eval_table()
    if workers <= 1:
        total = 0j
        for v in table:
            total += phases[v]
    else:
        bounds = [round(i * size / workers) for i in range(workers + 1)]
        sums = []
        for lo, hi in zip(bounds, bounds[1:]):
            chunk = 0j
            for v in table[lo:hi]:
                chunk += phases[v]
            sums.append(chunk)
        while len(sums) > 1:
            sums = [a + b for a, b in zip(sums[::2], sums[1::2])] + (
                [sums[-1]] if len(sums) % 2 else []
            )
        total = sums[0]
    mean = total / size
    return CharacterSum(mean.real, mean.imag, 0)


def sampled_bias(f: MultiPoly, samples: int, seed: int, caps: Caps = DEFAULT_CAPS) -> CharacterSum:
    """Unbiased Monte Carlo estimate of exact_bias, deterministic given seed."""
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, f.p, size=(samples, f.n))
    phases = np.array(unit_phases(f.p))
    if f.p ** f.n <= caps.enum_cap:
        table = np.array(f.eval_table())
        radix = f.p ** np.arange(f.n - 1, -1, -1, dtype=np.int64)
        idx = pts @ radix
        mean = phases[table[idx]].mean() if f.n else phases[table[0]] + 0j
    else:
        total = 0j
        for row in pts:
            total += phases[f.eval(tuple(int(v) for v in row))]
        mean = total / samples
    return CharacterSum(float(mean.real), float(mean.imag), samples)


def _shift_index_table(p: int, n: int) -> np.ndarray:
    """SHIFT[a, b] = index of point_a + point_b; used by exact Gowers sums."""
    size = p ** n
    pts = np.array(list(points_lex(p, n)), dtype=np.int64).reshape(size, n)
    radix = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        table[a] = ((pts[a] + pts) % p) @ radix
    return table


def gowers_norm(
    f: MultiPoly,
    d: int,
    mode: str = "exact",
    samples: int = 4096,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> float:
    """U^d norm of e(f), computed as the 2^d-th root of the derivative average.

    Exact mode enumerates all (x, y_1..y_d) tuples; its p^{n(d+1)} size must
    stay within the enumeration cap.
    """
    if d < 1:
        raise InputError("d must be >= 1")
    p, n = f.p, f.n
    if mode == "exact":
        if p ** (n * (d + 1)) > caps.enum_cap:
            raise CapExceeded(
                f"p^(n(d+1)) = {p ** (n * (d + 1))} exceeds cap {caps.enum_cap}"
            )
        size = p ** n
        table = np.array(f.eval_table(), dtype=np.int64)
        shift = _shift_index_table(p, n)
        phases = np.array(unit_phases(p))
        signs_and_masks = [
            ((-1) ** (d - bin(m).count("1")), m) for m in range(1 << d)
        ]
        total = 0j
        for ys in points_lex(size, d):
            # index of sum over the subset of directions, per mask
            subset_idx = []
            for _, m in signs_and_masks:
                acc = 0
                mm = m
                j = 0
                while mm:
                    if mm & 1:
                        acc = shift[acc, ys[j]]
                    mm >>= 1
                    j += 1
                subset_idx.append(acc)
            vals = np.zeros(size, dtype=np.int64)
            for (sign, _), si in zip(signs_and_masks, subset_idx):
                vals += sign * table[shift[si]]
            total += phases[vals % p].sum()
        mean = total / p ** (n * (d + 1))
    elif mode == "sampled":
        if samples < 1:
            raise InputError("samples must be >= 1")
        rng = np.random.default_rng(seed)
        phases = unit_phases(p)
        total = 0j
        for _ in range(samples):
            x = rng.integers(0, p, size=n)
            ys = rng.integers(0, p, size=(d, n))
            val = 0
            for m in range(1 << d):
                pt = x.copy()
                for j in range(d):
                    if m >> j & 1:
                        pt = pt + ys[j]
                sign = (-1) ** (d - bin(m).count("1"))
                val += sign * f.eval(tuple(int(v) % p for v in pt))
            total += phases[val % p]
        mean = total / samples
    else:
        raise InputError(f"unknown mode {mode!r}")
    base = max(mean.real, 0.0)
    return base ** (1.0 / (1 << d))
