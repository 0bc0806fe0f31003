"""Polynomial factors: atoms, equidistribution, bias-threshold regularization.

Regularity is certified by a bias threshold: a factor is regular at level s
when every nonzero linear combination of its polynomials has |bias| below
p^-s.  The regularization loop repeatedly finds a combination at or above
the threshold, decomposes it into lower-degree polynomials, and replaces
the highest-degree participant, so the degree multiset strictly decreases.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .bias import CharacterSum, exact_bias
from .config import Caps, DEFAULT_CAPS, RegularizeConfig
from .errors import (
    CapExceeded,
    InputError,
    PartialResultError,
    PreconditionError,
)
from .ffpoly import LookupTable, MultiPoly, grlex_key, points_graded

BIAS_TOL = 1e-9


@dataclass(frozen=True)
class PolynomialFactor:
    """An ordered tuple of polynomials partitioning F_p^n into atoms."""

    polys: tuple[MultiPoly, ...]
    regularity_s: int = 0
    pinned_prefix: int = 0

    def __init__(self, polys, regularity_s: int = 0, pinned_prefix: int = 0):
        polys = tuple(polys)
        if polys:
            p, n = polys[0].p, polys[0].n
            if any(g.p != p or g.n != n for g in polys):
                raise InputError("factor polynomials must share field and variable count")
        if not 0 <= pinned_prefix <= len(polys):
            raise InputError("pinned prefix out of range")
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "regularity_s", regularity_s)
        object.__setattr__(self, "pinned_prefix", pinned_prefix)

    @property
    def c(self) -> int:
        return len(self.polys)

    @property
    def p(self) -> int:
        if not self.polys:
            raise InputError("empty factor has no field")
        return self.polys[0].p

    @property
    def n(self) -> int:
        if not self.polys:
            raise InputError("empty factor has no ambient dimension")
        return self.polys[0].n

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(g.degree() for g in self.polys))

    def degree(self) -> int:
        return max((g.degree() for g in self.polys), default=0)

    def atom_count(self) -> int:
        """||B||: the number of atoms including empty ones."""
        return self.p ** self.c if self.polys else 1

    def atom_of(self, x) -> tuple[int, ...]:
        return tuple(g.eval(x) for g in self.polys)

    def atom_table(self) -> list[tuple[int, ...]]:
        """Atom of every point in lexicographic order."""
        cols = [g.eval_table() for g in self.polys]
        size = self.p ** self.n
        return [tuple(col[i] for col in cols) for i in range(size)]


def combine(factor: PolynomialFactor, coeffs) -> MultiPoly:
    """The linear combination sum_i coeffs_i * h_i."""
    if len(coeffs) != factor.c:
        raise InputError("coefficient vector length mismatch")
    result = MultiPoly.zero(factor.polys[0].ctx, factor.n)
    for a, g in zip(coeffs, factor.polys):
        if a % factor.p:
            result = result + g * int(a)
    return result


def atom_histogram(
    factor: PolynomialFactor,
    caps: Caps = DEFAULT_CAPS,
    samples: int | None = None,
    seed: int = 0,
) -> dict[tuple[int, ...], int]:
    """Counts per nonempty atom; exhaustive unless a sample budget is given."""
    if not factor.polys:
        raise InputError("empty factor has no ambient dimension to enumerate")
    p, n = factor.p, factor.n
    counts: Counter = Counter()
    if samples is None:
        if p ** n > caps.enum_cap:
            raise CapExceeded(
                f"p^n = {p ** n} exceeds enumeration cap; pass a sample budget"
            )
        for atom in factor.atom_table():
            counts[atom] += 1
    else:
        if samples < 1:
            raise InputError("samples must be >= 1")
        rng = np.random.default_rng(seed)
        for row in rng.integers(0, p, size=(samples, n)):
            counts[factor.atom_of(tuple(int(v) for v in row))] += 1
    return dict(counts)


def find_biased_combination(
    factor: PolynomialFactor, s: int, caps: Caps = DEFAULT_CAPS
) -> tuple[tuple[int, ...], CharacterSum] | None:
    """First coefficient vector (graded order) whose combination reaches p^-s.

    Returns None when every nonzero combination stays below the threshold,
    in which case the factor may be stamped regular at level s.
    """
    if not factor.polys:
        return None
    p = factor.p
    if p ** factor.c > caps.search_cap:
        raise CapExceeded(
            f"p^c = {p ** factor.c} exceeds search cap {caps.search_cap}"
        )
    threshold = p ** (-s) - BIAS_TOL
    for a in points_graded(p, factor.c):
        if not any(a):
            continue
        cs = exact_bias(combine(factor, a), caps)
        if cs.magnitude >= threshold:
            return a, cs
    return None


def _nonconstant_vector(g: MultiPoly, monomials: list) -> list[int]:
    return [g.terms.get(e, 0) for e in monomials]


def _dependency_reduce(
    polys: list[MultiPoly], pinned: int
) -> tuple[list[MultiPoly], bool]:
    """Drop constants and polynomials affinely dependent on earlier kept ones.

    Fast path for factors too large to scan: an affine dependency is exactly
    a bias-1 combination, and the dropped polynomial stays determined by the
    survivors, so semantic refinement is preserved.
    """
    if not polys:
        return polys, False
    p = polys[0].p
    zero_mon = (0,) * polys[0].n
    monomials = sorted(
        {e for g in polys for e in g.terms if e != zero_mon}, key=grlex_key
    )
    tracker = linalg.SpanTracker(p)
    kept: list[MultiPoly] = []
    changed = False
    for i, g in enumerate(polys):
        vec = _nonconstant_vector(g, monomials)
        if not any(vec):
            if i < pinned:
                raise PartialResultError(
                    "pinned polynomial is constant; cannot regularize without replacing it",
                    partial=PolynomialFactor(polys, 0, pinned),
                )
            changed = True
            continue
        if tracker.add(vec):
            kept.append(g)
        else:
            if i < pinned:
                raise PartialResultError(
                    "pinned polynomial depends on earlier pinned ones",
                    partial=PolynomialFactor(polys, 0, pinned),
                )
            changed = True
    return kept, changed


def _replacement_index(coeffs, polys, pinned: int) -> int:
    """Highest-degree index with a nonzero coefficient, ties to lowest index."""
    candidates = [i for i, a in enumerate(coeffs) if a and i >= pinned]
    if not candidates:
        raise PartialResultError(
            "biased combination is supported on pinned polynomials only",
            partial=PolynomialFactor(polys, 0, pinned),
        )
    best_degree = max(polys[i].degree() for i in candidates)
    return min(i for i in candidates if polys[i].degree() == best_degree)


def regularize(
    factor: PolynomialFactor, s: int, config: RegularizeConfig | None = None
) -> PolynomialFactor:
    """Refine the factor until no combination reaches bias p^-s.

    Each found combination is decomposed exactly into lower-degree
    polynomials which replace the chosen participant; pinned-prefix
    polynomials are never replaced.
    """
    from . import decompose as decompose_mod

    config = config or RegularizeConfig()
    caps = config.caps
    work = list(factor.polys)
    pinned = factor.pinned_prefix
    for iteration in range(config.max_iterations):
        if not work:
            return PolynomialFactor(work, regularity_s=s, pinned_prefix=pinned)
        p = work[0].p
        if p ** len(work) > caps.search_cap:
            work, changed = _dependency_reduce(work, pinned)
            if not changed:
                raise CapExceeded(
                    f"p^c = {p ** len(work)} exceeds search cap and the factor "
                    "has no affine dependencies left to eliminate"
                )
            continue
        found = find_biased_combination(PolynomialFactor(work, 0, pinned), s, caps)
        if found is None:
            return PolynomialFactor(work, regularity_s=s, pinned_prefix=pinned)
        coeffs, cs = found
        target = _replacement_index(coeffs, work, pinned)
        h = combine(PolynomialFactor(work, 0, pinned), coeffs)
        if h.is_constant():
            replacement: list[MultiPoly] = []
        else:
            s_h = decompose_mod._bias_exponent(cs.magnitude, p)
            sub_config = replace(
                config.decompose,
                seed=int(np.random.default_rng(
                    [config.decompose.seed, 11, iteration]
                ).integers(1 << 62)),
            )
            sub = decompose_mod.exact_decompose(h, s_h, sub_config)
            replacement = list(sub.polys)
        work = work[:target] + replacement + work[target + 1:]
    raise PartialResultError(
        f"regularization budget of {config.max_iterations} iterations exceeded",
        partial=PolynomialFactor(work, regularity_s=0, pinned_prefix=pinned),
        diagnostics={"iterations": config.max_iterations, "size": len(work)},
    )


def measurable_table(
    f: MultiPoly, factor: PolynomialFactor, caps: Caps = DEFAULT_CAPS
) -> tuple[LookupTable, bool, float]:
    """Per-atom plurality value of f (ties to the smallest lift).

    exact is True iff f is constant on every nonempty atom; agreement is
    Pr_x[f(x) = table(atoms(x))].
    """
    p, n = f.p, f.n
    size = p ** n
    if size > caps.enum_cap:
        raise CapExceeded(f"p^n = {size} exceeds enumeration cap {caps.enum_cap}")
    atoms = factor.atom_table() if factor.polys else [()] * size
    ftab = f.eval_table()
    votes: dict[tuple[int, ...], Counter] = {}
    for atom, value in zip(atoms, ftab):
        votes.setdefault(atom, Counter())[value] += 1
    entries = {}
    hits = 0
    exact = True
    for atom, counter in votes.items():
        value, count = max(counter.items(), key=lambda kv: (kv[1], -kv[0]))
        entries[atom] = value
        hits += count
        if len(counter) > 1:
            exact = False
    table = LookupTable(p, factor.c, entries, default=0)
    return table, exact, hits / size


def semantic_refines(
    fine: PolynomialFactor, coarse: PolynomialFactor, caps: Caps = DEFAULT_CAPS
) -> bool:
    """Whether the fine factor's atom map determines the coarse factor's."""
    if fine.polys:
        p, n = fine.p, fine.n
    elif coarse.polys:
        p, n = coarse.p, coarse.n
    else:
        return True
    if p ** n > caps.enum_cap:
        raise CapExceeded("refinement check exceeds enumeration cap")
    fine_atoms = fine.atom_table() if fine.polys else [()] * (p ** n)
    coarse_atoms = coarse.atom_table() if coarse.polys else [()] * (p ** n)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for fa, ca in zip(fine_atoms, coarse_atoms):
        if seen.setdefault(fa, ca) != ca:
            return False
    return True


@dataclass(frozen=True)
class ParallelepipedReport:
    """Sampled distribution of atom tuples over combinatorial cubes."""

    k: int
    samples: int
    seed: int
    counts: dict
    support_size: int
    predicted_exponent: int
    predicted_frequency: float
    max_deviation: float


def parallelepiped_check(
    factor: PolynomialFactor,
    k: int,
    samples: int,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> ParallelepipedReport:
    """Sample x, y_1..y_k and record the atom tuple over all 2^k cube corners.

    Purely diagnostic: reports the empirical tuple distribution, the
    predicted support exponent sum_i M_i * sum_{1<=j<=i} C(k, j), and the
    maximal deviation of observed frequencies from the predicted one.
    """
    if samples < 1:
        raise InputError("samples must be >= 1")
    if factor.polys and k <= factor.degree():
        raise PreconditionError(f"k = {k} must exceed the factor degree {factor.degree()}")
    if not factor.polys:
        counts = {((),) * (1 << k): samples}
        return ParallelepipedReport(k, samples, seed, counts, 1, 0, 1.0, 0.0)
    p, n = factor.p, factor.n
    degree_multiplicity = Counter(g.degree() for g in factor.polys)
    exponent = sum(
        mult * sum(math.comb(k, j) for j in range(1, deg + 1))
        for deg, mult in degree_multiplicity.items()
        if deg >= 1
    )
    predicted = p ** (-(factor.c + exponent))
    rng = np.random.default_rng(seed)
    counts: Counter = Counter()
    for _ in range(samples):
        x = rng.integers(0, p, size=n)
        ys = rng.integers(0, p, size=(k, n))
        corners = []
        for mask in range(1 << k):
            pt = x.copy()
            for j in range(k):
                if mask >> j & 1:
                    pt = pt + ys[j]
            corners.append(factor.atom_of(tuple(int(v) % p for v in pt)))
        counts[tuple(corners)] += 1
    max_dev = max(abs(cnt / samples - predicted) for cnt in counts.values())
    return ParallelepipedReport(
        k=k,
        samples=samples,
        seed=seed,
        counts=dict(counts),
        support_size=len(counts),
        predicted_exponent=exponent,
        predicted_frequency=predicted,
        max_deviation=max_dev,
    )
