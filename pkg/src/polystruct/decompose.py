"""From bias to explicit low-rank structure.

approx_decompose realizes the sampled-derivative approximation: draw k
auxiliary points z, emit the derivatives of f along the small-weight
combinations b.z, and fit the outer lookup table empirically (the most
consistent value per observed derivative tuple, ties to the smallest
lift).  The existential choice of z becomes a seeded retry loop with an
explicit error target of 2*p^-t.

exact_decompose chains that with factor regularization and a per-atom
value table, and certifies exactness by exhaustive check at desk scale.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import linalg
from .bias import CharacterSum, exact_bias, sampled_bias, unit_phases
from .config import Caps, DEFAULT_CAPS, DecomposeConfig, RegularizeConfig
from .errors import (
    CapExceeded,
    DecompositionFailed,
    InputError,
    PartialResultError,
    PreconditionError,
    UnsupportedError,
)
from .ffpoly import LookupTable, MultiPoly, derivative, functional_reduce

INFINITE_RANK = float("inf")

BIAS_TOL = 1e-9


@dataclass(frozen=True)
class DerivativeBasis:
    """The auxiliary points z and all small-weight coefficient vectors b."""

    k: int
    z: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]


@dataclass
class Decomposition:
    """Lower-degree polynomials plus the outer lookup table reproducing f."""

    polys: list[MultiPoly]
    gamma: LookupTable
    directions: list[tuple[int, ...]] | None
    claimed_error: float
    exact: bool
    seed: int | None = None
    k: int | None = None
    attempts: int = 1


def basis_vectors(p: int, k: int, d: int) -> list[tuple[int, ...]]:
    """All b in F_p^k with sum of canonical lifts <= d, in graded order."""
    cap = min(p - 1, d)
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], budget: int):
        if len(prefix) == k:
            out.append(prefix)
            return
        for v in range(min(cap, budget) + 1):
            rec(prefix + (v,), budget - v)

    rec((), d)
    return sorted(out, key=lambda b: (sum(b), b))


def argmin_level(avg: complex, mean_char: complex, p: int) -> int:
    """The field element l minimizing |avg - e(-l) * mean_char|.

    Ties within 1e-12 break toward the smallest canonical lift.
    """
    phases = unit_phases(p)
    best_l, best_dist = 0, abs(avg - phases[0].conjugate() * mean_char)
    for level in range(1, p):
        dist = abs(avg - phases[level].conjugate() * mean_char)
        if dist < best_dist - 1e-12:
            best_l, best_dist = level, dist
    return best_l


def _check_bias(f: MultiPoly, s: int, caps: Caps, trust_bias: bool) -> CharacterSum:
    if f.p ** f.n <= caps.enum_cap:
        mu = exact_bias(f, caps)
    elif trust_bias:
        mu = sampled_bias(f, 4096, 0, caps)
    else:
        raise CapExceeded(
            "bias precondition cannot be verified exhaustively; pass trust_bias=True"
        )
    if mu.magnitude < f.p ** (-s) - BIAS_TOL:
        raise PreconditionError(
            f"|bias| = {mu.magnitude:.6g} below threshold p^-{s} = {f.p ** (-s):.6g}"
        )
    return mu


def _fit_table(f, polys, caps, samples, rng):
    """Plurality table over observed derivative tuples, plus the miss rate."""
    p, n = f.p, f.n
    size = p ** n
    votes: dict[tuple[int, ...], Counter] = {}
    if size <= caps.enum_cap:
        cols = [g.eval_table() for g in polys]
        ftab = f.eval_table()
        for i in range(size):
            key = tuple(col[i] for col in cols)
            votes.setdefault(key, Counter())[ftab[i]] += 1
        total = size
    else:
        pts = rng.integers(0, p, size=(samples, n))
        for row in pts:
            x = tuple(int(v) for v in row)
            key = tuple(g.eval(x) for g in polys)
            votes.setdefault(key, Counter())[f.eval(x)] += 1
        total = samples
    entries = {}
    hits = 0
    for key, counter in votes.items():
        value, count = max(counter.items(), key=lambda kv: (kv[1], -kv[0]))
        entries[key] = value
        hits += count
    table = LookupTable(p, len(polys), entries, default=0)
    return table, 1.0 - hits / total


def approx_decompose(
    f: MultiPoly,
    s: int,
    t: int,
    seed: int = 0,
    retries: int = 16,
    caps: Caps = DEFAULT_CAPS,
    trust_bias: bool = False,
    k_override: int | None = None,
    error_samples: int = 4096,
) -> Decomposition:
    """Approximate f by a lookup table over derivatives of f.

    Retries with fresh auxiliary points until the measured disagreement
    probability is at most 2*p^-t; raises DecompositionFailed (carrying the
    best attempt) if no retry meets the target.
    """
    _check_bias(f, s, caps, trust_bias)
    p, n, d = f.p, f.n, f.degree()
    k = k_override if k_override is not None else t + 2 * s + 3
    nonzero = tuple(b for b in basis_vectors(p, k, d) if any(b))
    target = 2.0 * p ** (-t)

    best: Decomposition | None = None
    for attempt in range(max(1, retries)):
        rng = np.random.default_rng([seed, attempt])
        z = tuple(tuple(int(v) for v in row) for row in rng.integers(0, p, size=(k, n)))
        basis = DerivativeBasis(k=k, z=z, basis=nonzero)
        dirs = [
            tuple(sum(bj * zj[i] for bj, zj in zip(b, z)) % p for i in range(n))
            for b in basis.basis
        ]
        polys = [functional_reduce(derivative(f, [h])) for h in dirs]
        table, err = _fit_table(f, polys, caps, error_samples, rng)
        dec = Decomposition(
            polys=polys,
            gamma=table,
            directions=dirs,
            claimed_error=err,
            exact=False,
            seed=seed,
            k=k,
            attempts=attempt + 1,
        )
        if best is None or err < best.claimed_error:
            best = dec
        if err <= target + 1e-12:
            return dec
    raise DecompositionFailed(
        f"no attempt reached error target {target:.6g} in {retries} retries", best=best
    )


def decomposition_error(
    f: MultiPoly,
    dec: Decomposition,
    mode: str = "exact",
    samples: int = 4096,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> float:
    """Disagreement probability Pr_x[f(x) != gamma(g_1(x), ..., g_c(x))]."""
    if not dec.polys and not dec.gamma.is_total():
        raise PreconditionError("empty decomposition with a partial table")
    p, n = f.p, f.n
    if mode == "exact":
        size = p ** n
        if size > caps.enum_cap:
            raise CapExceeded(f"p^n = {size} exceeds enumeration cap {caps.enum_cap}")
        cols = [g.eval_table() for g in dec.polys]
        ftab = f.eval_table()
        misses = sum(
            1 for i in range(size) if dec.gamma(tuple(col[i] for col in cols)) != ftab[i]
        )
        return misses / size
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        pts = rng.integers(0, p, size=(samples, n))
        misses = 0
        for row in pts:
            x = tuple(int(v) for v in row)
            if dec.gamma(tuple(g.eval(x) for g in dec.polys)) != f.eval(x):
                misses += 1
        return misses / samples
    raise InputError(f"unknown mode {mode!r}")


def _bias_exponent(magnitude: float, p: int) -> int:
    """Smallest s >= 1 with magnitude >= p^-s (within tolerance)."""
    s = 1
    while magnitude < p ** (-s) - BIAS_TOL:
        s += 1
    return s


def exact_decompose(f: MultiPoly, s: int, config: DecomposeConfig | None = None) -> Decomposition:
    """Exact decomposition: approximate, regularize, read off per-atom values.

    Exactness means f is constant on every nonempty atom of the regularized
    factor, certified by exhaustive check; the enumeration cap is a hard
    requirement because sampled evidence never earns the exact flag.
    """
    from . import factor as factor_mod

    config = config or DecomposeConfig()
    caps = config.caps
    p, n = f.p, f.n
    if p ** n > caps.enum_cap:
        raise CapExceeded("exactness is only certified within the enumeration cap")
    mu = _check_bias(f, s, caps, trust_bias=False)
    s_eff = min(s, _bias_exponent(mu.magnitude, p))

    base_reg_s = config.regularity_s if config.regularity_s is not None else s + 1
    best_agreement = -1.0
    diagnostics: dict = {}
    for attempt in range(max(1, config.pipeline_retries)):
        approx = approx_decompose(
            f,
            s_eff,
            t=config.t,
            seed=int(np.random.default_rng([config.seed, 7, attempt]).integers(1 << 62)),
            retries=config.retries,
            caps=caps,
            error_samples=config.error_samples,
        )
        reg_s = base_reg_s + attempt
        reg_config = RegularizeConfig(decompose=config, caps=caps)
        regular = factor_mod.regularize(
            factor_mod.PolynomialFactor(approx.polys), reg_s, reg_config
        )
        table, exact, agreement = factor_mod.measurable_table(f, regular, caps)
        if exact:
            return Decomposition(
                polys=list(regular.polys),
                gamma=table,
                directions=None,
                claimed_error=0.0,
                exact=True,
                seed=config.seed,
                k=approx.k,
                attempts=attempt + 1,
            )
        if agreement > best_agreement:
            best_agreement = agreement
            diagnostics = {"agreement": agreement, "factor_size": regular.c, "reg_s": reg_s}
    raise PartialResultError(
        f"f is not measurable after {config.pipeline_retries} pipeline attempts "
        f"(best agreement {best_agreement:.6g})",
        diagnostics=diagnostics,
    )


def quadratic_rank(f: MultiPoly) -> int | float:
    """Rank of a degree <= 2 polynomial from its symmetric matrix (p odd).

    Returns ceil(m/2) for matrix rank m of the quadratic part; degree <= 1
    polynomials follow the order-1 convention: 0 when constant, infinity
    otherwise.
    """
    if f.p == 2:
        raise UnsupportedError("quadratic rank needs an odd prime (1/2 must exist)")
    if f.degree() > 2:
        raise PreconditionError(f"degree {f.degree()} > 2")
    p, n = f.p, f.n
    quad = {e: c for e, c in f.terms.items() if sum(e) == 2}
    if not quad:
        return 0 if f.is_constant() else INFINITE_RANK
    inv2 = pow(2, p - 2, p)
    mat = [[0] * n for _ in range(n)]
    for e, c in quad.items():
        support = [i for i, v in enumerate(e) if v]
        if len(support) == 1:
            i = support[0]
            mat[i][i] = (mat[i][i] + c) % p
        else:
            i, j = support
            mat[i][j] = (mat[i][j] + c * inv2) % p
            mat[j][i] = (mat[j][i] + c * inv2) % p
    m = linalg.rank(mat, p)
    return (m + 1) // 2
