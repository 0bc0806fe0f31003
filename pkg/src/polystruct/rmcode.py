"""Reed-Muller codes at desk scale: enumeration, list decoding, and the
simplex-embedding toolkit (Fourier decomposition over centered line
embeddings, greedy weak regularity, conditional expectations).

Functions F_p^n -> F_p are embedded into the probability simplex row by
row: p(g) places a single 1 per row, q(g) = p(g) - 1/p centers it.  Inner
products average over rows, so ||q(g)||^2 = 1 - 1/p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .config import Caps, DEFAULT_CAPS
from .errors import CapExceeded, InputError, PreconditionError, UnsupportedError
from .factor import PolynomialFactor
from .ffpoly import FieldCtx, MultiPoly, points_lex

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class RMParams:
    """RM_F(n, d): evaluations of all degree <= d polynomials; needs d < p."""

    p: int
    n: int
    d: int

    def __post_init__(self):
        FieldCtx(self.p)
        if self.n < 1 or self.d < 0:
            raise InputError("need n >= 1 and d >= 0")
        if self.d >= self.p:
            raise UnsupportedError(f"degree {self.d} >= field size {self.p}")

    @property
    def ctx(self) -> FieldCtx:
        return FieldCtx(self.p)

    def monomials(self) -> list[tuple[int, ...]]:
        out = [
            e
            for e in itertools.product(range(self.d + 1), repeat=self.n)
            if sum(e) <= self.d
        ]
        return sorted(out, key=lambda e: (sum(e), e))

    def codeword_count(self) -> int:
        return self.p ** len(self.monomials())

    def min_distance_formula(self) -> Fraction:
        return Fraction(self.p - self.d, self.p)


@lru_cache(maxsize=8)
def _codewords(params: RMParams) -> tuple[tuple[MultiPoly, ...], tuple[tuple[int, ...], ...]]:
    ctx = params.ctx
    mons = params.monomials()
    polys = []
    tables = []
    for coeffs in itertools.product(range(params.p), repeat=len(mons)):
        f = MultiPoly(ctx, params.n, dict(zip(mons, coeffs)))
        polys.append(f)
        tables.append(f.eval_table())
    return tuple(polys), tuple(tables)


def enumerate_codewords(params: RMParams, caps: Caps = DEFAULT_CAPS):
    if params.codeword_count() > caps.codeword_cap:
        raise CapExceeded(
            f"{params.codeword_count()} codewords exceed cap {caps.codeword_cap}"
        )
    return _codewords(params)


def _as_table(params: RMParams, center) -> tuple[int, ...]:
    size = params.p ** params.n
    if isinstance(center, MultiPoly):
        return center.eval_table()
    if callable(center):
        return tuple(center(x) % params.p for x in points_lex(params.p, params.n))
    table = tuple(int(v) % params.p for v in center)
    if len(table) != size:
        raise InputError(f"center table has {len(table)} entries, expected {size}")
    return table


def min_distance_empirical(params: RMParams, caps: Caps = DEFAULT_CAPS) -> Fraction:
    """min over nonzero codewords of Pr[f != 0]; equals 1 - d/p for d < p."""
    _, tables = enumerate_codewords(params, caps)
    size = params.p ** params.n
    best = None
    for table in tables:
        weight = sum(1 for v in table if v)
        if weight == 0:
            continue
        frac = Fraction(weight, size)
        if best is None or frac < best:
            best = frac
    if best is None:
        raise InputError("code has a single codeword")
    return best


@dataclass(frozen=True)
class ListResult:
    """Codewords within the radius, sorted by distance then canonical order."""

    center_label: str
    radius: float
    entries: tuple[tuple[MultiPoly, Fraction], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def polys(self) -> list[MultiPoly]:
        return [f for f, _ in self.entries]


def list_decode_brute(
    params: RMParams, center, radius, caps: Caps = DEFAULT_CAPS, label: str = "center"
) -> ListResult:
    """Exhaustive scan of every codeword against the center."""
    target = _as_table(params, center)
    polys, tables = enumerate_codewords(params, caps)
    size = params.p ** params.n
    hits = []
    for idx, (f, table) in enumerate(zip(polys, tables)):
        dist = Fraction(sum(1 for a, b in zip(table, target) if a != b), size)
        if float(dist) <= float(radius) + 1e-12:
            hits.append((dist, idx, f))
    hits.sort(key=lambda t: (t[0], t[1]))
    return ListResult(
        center_label=label,
        radius=float(radius),
        entries=tuple((f, dist) for dist, _, f in hits),
    )


def johnson_bound(p: int, eps: float) -> tuple[float, float]:
    """(radius, list cap) = (1 - 1/p - sqrt(eps), 1/eps^2) for 0 < eps < 1."""
    FieldCtx(p)
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    return 1.0 - 1.0 / p - math.sqrt(eps), 1.0 / eps**2


# -- simplex embeddings -------------------------------------------------------


@dataclass(frozen=True)
class SimplexFunction:
    """A map F_p^n -> R^p stored as a (p^n, p) array with a space tag.

    delta rows are nonnegative and sum to 1; centered rows sum to 0.
    """

    p: int
    n: int
    values: np.ndarray
    space: str

    def __post_init__(self):
        size = self.p ** self.n
        if self.values.shape != (size, self.p):
            raise InputError(f"expected shape {(size, self.p)}, got {self.values.shape}")
        sums = self.values.sum(axis=1)
        if self.space == "delta":
            if np.any(np.abs(sums - 1.0) > FLOAT_TOL) or np.any(self.values < -FLOAT_TOL):
                raise InputError("delta rows must be nonnegative and sum to 1")
        elif self.space == "centered":
            if np.any(np.abs(sums) > FLOAT_TOL):
                raise InputError("centered rows must sum to 0")
        else:
            raise InputError(f"unknown space tag {self.space!r}")

    @classmethod
    def embed(cls, params_or_p, n: int | None = None, table=None) -> "SimplexFunction":
        """p(g): one-hot rows for a field-valued function."""
        p = params_or_p.p if isinstance(params_or_p, RMParams) else params_or_p
        if isinstance(params_or_p, RMParams) and n is None:
            n = params_or_p.n
        size = p ** n
        table = tuple(int(v) % p for v in table)
        if len(table) != size:
            raise InputError(f"table has {len(table)} entries, expected {size}")
        values = np.zeros((size, p))
        values[np.arange(size), table] = 1.0
        return cls(p, n, values, "delta")

    @classmethod
    def uniform(cls, p: int, n: int) -> "SimplexFunction":
        return cls(p, n, np.full((p ** n, p), 1.0 / p), "delta")

    def centered(self) -> "SimplexFunction":
        if self.space == "centered":
            return self
        return SimplexFunction(self.p, self.n, self.values - 1.0 / self.p, "centered")

    def inner(self, other: "SimplexFunction") -> float:
        if (self.p, self.n) != (other.p, other.n):
            raise InputError("mismatched domains")
        return float((self.values * other.values).sum() / self.p**self.n)


def _line_table(p: int, n: int, a: tuple[int, ...], b: int) -> tuple[int, ...]:
    return tuple((sum(ai * xi for ai, xi in zip(a, x)) + b) % p for x in points_lex(p, n))


def _centered_line(p: int, n: int, a: tuple[int, ...], b: int) -> np.ndarray:
    size = p ** n
    values = np.full((size, p), -1.0 / p)
    table = _line_table(p, n, a, b)
    values[np.arange(size), table] += 1.0
    return values


def simplex_fourier(
    g, p: int | None = None, n: int | None = None, caps: Caps = DEFAULT_CAPS
) -> dict[tuple[tuple[int, ...], int], float]:
    """Coefficients of q(g) over the centered affine-line basis.

    alpha[a, b] = <q(g), q(l_{a,b})> - <q(g), q(l_{a,0})> for b != 0; the
    reconstruction sum over the basis reproduces q(g) entrywise.
    """
    if isinstance(g, MultiPoly):
        p, n = g.p, g.n
        table = g.eval_table()
    else:
        if p is None or n is None:
            raise InputError("raw tables need explicit p and n")
        table = tuple(int(v) % p for v in g)
    size = p ** n
    if size * (p - 1) > caps.enum_cap:
        raise CapExceeded(f"basis size {size * (p - 1)} exceeds cap {caps.enum_cap}")
    qg = SimplexFunction.embed(p, n, table=table).centered().values
    alphas: dict[tuple[tuple[int, ...], int], float] = {}
    for a in points_lex(p, n):
        base = float((qg * _centered_line(p, n, a, 0)).sum() / size)
        for b in range(1, p):
            val = float((qg * _centered_line(p, n, a, b)).sum() / size)
            alphas[(a, b)] = val - base
    return alphas


def fourier_reconstruct(
    alphas: dict, p: int, n: int
) -> SimplexFunction:
    size = p ** n
    acc = np.zeros((size, p))
    for (a, b), coeff in alphas.items():
        acc += coeff * _centered_line(p, n, tuple(a), b)
    return SimplexFunction(p, n, acc, "centered")


def weak_regularity(
    phi: SimplexFunction, family, eps: float
) -> tuple[list[tuple[int, float]], SimplexFunction]:
    """Greedy decomposition phi = 1/p + sum alpha_i q(f_i) + residual.

    While some family member correlates with the running residual above
    eps, absorb it; the energy decrement bounds the number of terms by
    ceil(1/eps^2), and on exit every family correlation is at most eps.
    """
    if not 0 < eps <= 1:
        raise InputError(f"eps must lie in (0, 1], got {eps}")
    if phi.space != "delta":
        raise PreconditionError("phi must live in the delta space")
    p, n = phi.p, phi.n
    size = p ** n
    q_family = []
    for member in family:
        table = member.eval_table() if isinstance(member, MultiPoly) else member
        q_family.append(SimplexFunction.embed(p, n, table=table).centered().values)
    centered = phi.values - 1.0 / p
    approx = np.zeros_like(centered)
    terms: list[tuple[int, float]] = []
    max_steps = math.ceil(1.0 / eps**2) + 8  # slack for float rounding only
    for _ in range(max_steps):
        found = False
        for idx, qf in enumerate(q_family):
            corr = float(((centered - approx) * qf).sum() / size)
            if abs(corr) > eps:
                approx += corr * qf
                terms.append((idx, corr))
                found = True
                break
        if not found:
            break
    residual = SimplexFunction(p, n, centered - approx, "centered")
    return terms, residual


def conditional_expectation(
    phi: SimplexFunction, factor: PolynomialFactor, caps: Caps = DEFAULT_CAPS
) -> SimplexFunction:
    """Average phi over each atom of the factor; output is atom-measurable."""
    p, n = phi.p, phi.n
    size = p ** n
    if size > caps.enum_cap:
        raise CapExceeded(f"p^n = {size} exceeds enumeration cap")
    if factor.polys and (factor.p != p or factor.n != n):
        raise InputError("factor domain mismatch")
    atoms = factor.atom_table() if factor.polys else [()] * size
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, atom in enumerate(atoms):
        groups.setdefault(atom, []).append(i)
    out = np.empty_like(phi.values)
    for rows in groups.values():
        out[rows] = phi.values[rows].mean(axis=0)
    return SimplexFunction(p, n, out, phi.space)


# -- list-size experiments ----------------------------------------------------


@dataclass(frozen=True)
class CentersSpec:
    """How profile centers are drawn: uniform functions, noisy codewords,
    and optionally every codeword."""

    random_count: int = 100
    noisy_count: int = 100
    noise_rate: float = 0.3
    all_codewords: bool = False


@dataclass(frozen=True)
class ProfileRow:
    radius: float
    center_kind: str
    center_index: int
    list_size: int


@dataclass(frozen=True)
class ListSizeProfile:
    params: RMParams
    s: int
    seed: int
    rows: tuple[ProfileRow, ...]
    max_by_radius: dict
    bound_constant: float | None
    consistent_with_bound: bool | None


def list_size_profile(
    params: RMParams,
    s: int,
    centers: CentersSpec,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
    bound_constant: float | None = None,
) -> ListSizeProfile:
    """Tabulate |B(g, rho_e)| at rho_e = 1 - e/p - p^-s for 1 <= e <= d.

    Sampled centers give a lower bound on the worst case; the optional
    constant C reports whether max sizes stay within p^(C * n^(d-e)).
    """
    p, n, d = params.p, params.n, params.d
    if d < 1:
        raise InputError("profiles need d >= 1")
    polys, tables = enumerate_codewords(params, caps)
    size = p ** n
    rng = np.random.default_rng(seed)
    center_list: list[tuple[str, int, tuple[int, ...]]] = []
    for i in range(centers.random_count):
        center_list.append(
            ("random", i, tuple(int(v) for v in rng.integers(0, p, size=size)))
        )
    for i in range(centers.noisy_count):
        base = tables[int(rng.integers(0, len(tables)))]
        noisy = [
            int(rng.integers(0, p)) if rng.random() < centers.noise_rate else v
            for v in base
        ]
        center_list.append(("noisy", i, tuple(noisy)))
    if centers.all_codewords:
        for i, table in enumerate(tables):
            center_list.append(("codeword", i, table))

    radii = [(e, 1.0 - e / p - p ** float(-s)) for e in range(1, d + 1)]
    rows = []
    max_by_radius: dict[float, int] = {}
    for e, rho in radii:
        threshold = rho + 1e-12
        for kind, idx, target in center_list:
            count = 0
            for table in tables:
                if sum(1 for a, b in zip(table, target) if a != b) <= threshold * size:
                    count += 1
            rows.append(ProfileRow(rho, kind, idx, count))
            max_by_radius[rho] = max(max_by_radius.get(rho, 0), count)
    consistent = None
    if bound_constant is not None:
        consistent = all(
            max_by_radius[rho] <= p ** (bound_constant * n ** (d - e))
            for e, rho in radii
        )
    return ListSizeProfile(
        params=params,
        s=s,
        seed=seed,
        rows=tuple(rows),
        max_by_radius=max_by_radius,
        bound_constant=bound_constant,
        consistent_with_bound=consistent,
    )


@dataclass(frozen=True)
class RankGraphReport:
    list_size: int
    independent_set_size: int
    max_close_count: int
    independent_indices: tuple[int, ...]
    cover_bound_holds: bool


def rank_graph_reduction(
    params: RMParams, center, radius, k: int, caps: Caps = DEFAULT_CAPS
) -> RankGraphReport:
    """Greedy low-rank-difference independent set inside a decoding list.

    Edges join list members whose difference has quadratic rank <= k; the
    list size is covered by |independent set| times the maximal number of
    rank-close neighbours, the two factors of the subcode reduction.
    """
    from .decompose import quadratic_rank

    if params.d != 2:
        raise UnsupportedError("rank-threshold graphs need d = 2")
    result = list_decode_brute(params, center, radius, caps)
    members = result.polys()
    m = len(members)

    def close(i: int, j: int) -> bool:
        return quadratic_rank(members[i] - members[j]) <= k

    independent: list[int] = []
    for i in range(m):
        if all(not close(i, j) for j in independent):
            independent.append(i)
    max_close = 0
    for i in independent:
        max_close = max(max_close, sum(1 for j in range(m) if close(i, j)))
    holds = m <= len(independent) * max_close if m else True
    return RankGraphReport(
        list_size=m,
        independent_set_size=len(independent),
        max_close_count=max_close,
        independent_indices=tuple(independent),
        cover_bound_holds=holds,
    )
