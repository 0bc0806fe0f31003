"""Nullstellensatz certificate search and radical membership over F_p.

Identity of polynomials means functional identity: both sides are reduced
mod x_i^p - x_i and compared coefficientwise, matching quantification over
the rational points of F_p^n.  The certificate search solves a coefficient
matching linear system for each (r, D) cell, r ascending then D ascending,
so returned certificates have minimal exponent first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .config import Caps, DEFAULT_CAPS
from .errors import CapExceeded, InputError, InternalConsistencyError
from .ffpoly import MultiPoly, extend_variables, functional_reduce, points_lex


@dataclass(frozen=True)
class IdealSpec:
    """Generators P_1..P_c and the query polynomial Q, in shared variables."""

    generators: tuple[MultiPoly, ...]
    query: MultiPoly

    def __init__(self, generators, query: MultiPoly):
        generators = tuple(generators)
        if not generators:
            raise InputError("need at least one generator")
        p, n = query.p, query.n
        if any(g.p != p or g.n != n for g in generators):
            raise InputError("generators and query must share field and variable count")
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "query", query)


@dataclass(frozen=True)
class Certificate:
    """Witness of Q^r = sum R_i P_i as functions on F_p^n."""

    r: int
    cofactors: tuple[MultiPoly, ...]
    degree_cap: int

    def verify(self, spec: IdealSpec) -> bool:
        lhs = functional_reduce(spec.query ** self.r)
        rhs = MultiPoly.zero(spec.query.ctx, spec.query.n)
        for cof, gen in zip(self.cofactors, spec.generators):
            rhs = rhs + cof * gen
        return functional_reduce(lhs - functional_reduce(rhs)).is_zero()


def monomials_upto(n: int, degree: int, p: int) -> list[tuple[int, ...]]:
    """Exponent vectors with total degree <= degree and each entry < p, graded."""
    cap = min(degree, p - 1)
    out = [
        e
        for e in itertools.product(range(cap + 1), repeat=n)
        if sum(e) <= degree
    ]
    return sorted(out, key=lambda e: (sum(e), e))


def find_certificate(
    spec: IdealSpec, d_max: int, r_max: int, caps: Caps = DEFAULT_CAPS
) -> Certificate | None:
    """Smallest (r, then D) certificate within the caps, or None.

    None is not an error: within small caps it cannot distinguish "no
    certificate exists" from "the degree caps are too small".
    """
    if d_max < 0 or r_max < 1:
        raise InputError("need d_max >= 0 and r_max >= 1")
    ctx, n, p = spec.query.ctx, spec.query.n, spec.query.p
    mons = monomials_upto(n, d_max, p)
    if len(mons) > caps.unknowns_cap:
        raise CapExceeded(
            f"{len(mons)} unknowns per cofactor exceeds cap {caps.unknowns_cap}"
        )
    c = len(spec.generators)

    # column polynomials reduce(x^m * P_i), shared across all (r, D) cells
    columns: list[list[MultiPoly]] = []
    for gen in spec.generators:
        columns.append(
            [functional_reduce(MultiPoly(ctx, n, {m: 1}) * gen) for m in mons]
        )
    degree_prefix = [0] * (d_max + 1)
    for deg in range(d_max + 1):
        degree_prefix[deg] = sum(1 for m in mons if sum(m) <= deg)

    target = functional_reduce(spec.query)
    power = target
    for r in range(1, r_max + 1):
        if r > 1:
            power = functional_reduce(power * target)
        for degree in range(d_max + 1):
            m_count = degree_prefix[degree]
            active = [columns[i][j] for i in range(c) for j in range(m_count)]
            support = sorted(
                {e for col in active for e in col.terms} | set(power.terms)
            )
            row_of = {e: i for i, e in enumerate(support)}
            matrix = [[0] * len(active) for _ in support]
            for u, col in enumerate(active):
                for e, coeff in col.terms.items():
                    matrix[row_of[e]][u] = coeff
            rhs = [power.terms.get(e, 0) for e in support]
            solution = linalg.solve(matrix, rhs, p)
            if solution is None:
                continue
            cofactors = []
            for i in range(c):
                terms = {
                    mons[j]: solution[i * m_count + j] for j in range(m_count)
                }
                cofactors.append(MultiPoly(ctx, n, terms))
            cert = Certificate(r=r, cofactors=tuple(cofactors), degree_cap=degree)
            if not cert.verify(spec):
                raise InternalConsistencyError(
                    f"certificate at (r={r}, D={degree}) failed re-verification"
                )
            return cert
    return None


def weak_certificate(
    generators, d_max: int, caps: Caps = DEFAULT_CAPS
) -> Certificate | None:
    """Certificate of sum R_i P_i = 1 (no common zero), exponent fixed to 1."""
    generators = tuple(generators)
    if not generators:
        raise InputError("need at least one generator")
    one = MultiPoly.constant(generators[0].ctx, generators[0].n, 1)
    return find_certificate(IdealSpec(generators, one), d_max, r_max=1, caps=caps)


def vanishes_on_variety(spec: IdealSpec, caps: Caps = DEFAULT_CAPS) -> bool:
    """Brute-force oracle: Q(x) = 0 at every common zero of the generators."""
    p, n = spec.query.p, spec.query.n
    if p ** n > caps.enum_cap:
        raise CapExceeded(f"p^n = {p ** n} exceeds enumeration cap")
    tables = [g.eval_table() for g in spec.generators]
    qtab = spec.query.eval_table()
    for i in range(p ** n):
        if all(t[i] == 0 for t in tables) and qtab[i] != 0:
            return False
    return True


@dataclass(frozen=True)
class RadicalReport:
    member: bool
    certificate: Certificate | None
    oracle_agrees: bool
    route: str  # "direct", "rabinowitsch", or "oracle-only"


def radical_membership(
    spec: IdealSpec,
    d_max: int,
    caps: Caps = DEFAULT_CAPS,
    direct_r_max: int = 2,
) -> RadicalReport:
    """Decide Q in the radical of <P_1..P_c>, with an exhaustive cross-check.

    Tries a direct power certificate first, then the extended system with
    the generator 1 - y*Q in one extra variable.  The membership verdict
    always comes from the exhaustive vanishing oracle; a found certificate
    that contradicted it would be reported as a disagreement.
    """
    member = vanishes_on_variety(spec, caps)
    cert = find_certificate(spec, d_max, r_max=direct_r_max, caps=caps)
    route = "direct"
    if cert is None:
        n = spec.query.n
        extended = [extend_variables(g, n + 1) for g in spec.generators]
        y = MultiPoly.variable(spec.query.ctx, n + 1, n + 1)
        extended.append(
            MultiPoly.constant(spec.query.ctx, n + 1, 1) - y * extend_variables(spec.query, n + 1)
        )
        cert = weak_certificate(extended, d_max, caps)
        route = "rabinowitsch" if cert is not None else "oracle-only"
    agrees = cert is None or member
    return RadicalReport(member=member, certificate=cert, oracle_agrees=agrees, route=route)
