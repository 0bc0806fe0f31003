"""Certificate search, weak form, and radical membership."""

import numpy as np
import pytest

from polystruct.config import Caps
from polystruct.errors import CapExceeded
from polystruct.ffpoly import FieldCtx, MultiPoly, functional_reduce, parse_poly, points_lex
from polystruct.nullstellensatz import (
    IdealSpec,
    find_certificate,
    monomials_upto,
    radical_membership,
    vanishes_on_variety,
    weak_certificate,
)
from util import random_poly


def test_monomials_upto_respects_field_and_order():
    mons = monomials_upto(2, 3, 3)
    assert all(sum(e) <= 3 and max(e) <= 2 for e in mons)
    assert mons == sorted(mons, key=lambda e: (sum(e), e))


def test_find_certificate_linear_identity():
    spec = IdealSpec(
        [parse_poly("x1", 5, n=2), parse_poly("x2", 5, n=2)], parse_poly("x1+x2", 5)
    )
    cert = find_certificate(spec, d_max=2, r_max=2)
    assert (cert.r, cert.degree_cap) == (1, 0)
    assert [str(c) for c in cert.cofactors] == ["1", "1"]
    assert cert.verify(spec)


def test_find_certificate_weak_form_difference():
    spec = IdealSpec(
        [parse_poly("x1", 3, n=1), parse_poly("x1+1", 3)], parse_poly("1", 3, n=1)
    )
    cert = find_certificate(spec, d_max=1, r_max=1)
    assert (cert.r, cert.degree_cap) == (1, 0)
    assert [str(c) for c in cert.cofactors] == ["2", "1"]


def test_find_certificate_needs_square():
    spec = IdealSpec([parse_poly("x1^2", 5, n=1)], parse_poly("x1", 5, n=1))
    cert = find_certificate(spec, d_max=2, r_max=2)
    assert (cert.r, cert.degree_cap) == (2, 0)
    assert [str(c) for c in cert.cofactors] == ["1"]
    # with a larger degree cap the functional identity x1 = x1^3 * x1^2 wins at r = 1
    cert2 = find_certificate(spec, d_max=3, r_max=2)
    assert cert2.r == 1 and cert2.verify(spec)


def test_weak_certificate_examples():
    assert weak_certificate([parse_poly("x1", 3, n=1)], d_max=3) is None

    cert = weak_certificate(
        [parse_poly("x1*x2", 3), parse_poly("x1*x2+2", 3)], d_max=1
    )
    assert cert.degree_cap == 0
    assert [str(c) for c in cert.cofactors] == ["1", "2"]


def test_certificate_search_is_deterministic_and_monotone():
    spec = IdealSpec([parse_poly("x1^2", 5, n=1)], parse_poly("x1", 5, n=1))
    first = find_certificate(spec, d_max=2, r_max=2)
    second = find_certificate(spec, d_max=2, r_max=2)
    assert first == second
    # enlarging the caps keeps the same minimal cell
    third = find_certificate(spec, d_max=2, r_max=3)
    assert (third.r, third.degree_cap) == (first.r, first.degree_cap)


def test_unknowns_cap():
    spec = IdealSpec([parse_poly("x1", 3, n=2)], parse_poly("x1", 3, n=2))
    with pytest.raises(CapExceeded):
        find_certificate(spec, d_max=2, r_max=1, caps=Caps(unknowns_cap=2))


def test_certificates_reverify_functionally_and_pointwise():
    rng = np.random.default_rng(31)
    found = 0
    for _ in range(40):
        p = int(rng.choice([3, 5]))
        ctx = FieldCtx(p)
        n = int(rng.integers(1, 3))
        gens = [random_poly(rng, ctx, n, 2) for _ in range(int(rng.integers(1, 3)))]
        if all(g.is_zero() for g in gens):
            continue
        coeffs = [int(rng.integers(0, p)) for _ in gens]
        q = MultiPoly.zero(ctx, n)
        for c, g in zip(coeffs, gens):
            q = q + g * c
        q = functional_reduce(q)
        spec = IdealSpec(gens, q)
        cert = find_certificate(spec, d_max=2, r_max=2)
        if cert is None:
            continue
        found += 1
        lhs = functional_reduce(spec.query ** cert.r)
        rhs = MultiPoly.zero(ctx, n)
        for cof, gen in zip(cert.cofactors, gens):
            rhs = rhs + cof * gen
        assert functional_reduce(lhs - rhs).is_zero()
        for x in points_lex(p, n):
            assert lhs.eval(x) == rhs.eval(x) % p
        # soundness: the oracle agrees that q vanishes on the variety
        assert vanishes_on_variety(spec)
    assert found >= 20


def test_radical_membership_examples():
    spec = IdealSpec([parse_poly("x1^2", 5, n=1)], parse_poly("x1", 5, n=1))
    report = radical_membership(spec, d_max=2)
    assert report.member and report.certificate is not None
    assert report.oracle_agrees

    spec2 = IdealSpec([parse_poly("x1", 3, n=2)], parse_poly("x2", 3, n=2))
    report2 = radical_membership(spec2, d_max=2)
    assert not report2.member and report2.oracle_agrees

    gen = parse_poly("x1^2 - x1", 5, n=1)
    report3 = radical_membership(IdealSpec([gen], gen), d_max=2)
    assert report3.member and report3.certificate.r == 1 and report3.route == "direct"


def test_radical_rabinowitsch_route():
    # x1*x2 is in sqrt(<x1>) only via the extended system when the direct
    # search is capped at degree 0
    spec = IdealSpec([parse_poly("x1^2", 3, n=1)], parse_poly("x1", 3, n=1))
    report = radical_membership(spec, d_max=2, direct_r_max=1)
    assert report.member
    assert report.route in ("direct", "rabinowitsch")
    assert report.oracle_agrees


def test_radical_agreement_on_random_instances():
    rng = np.random.default_rng(47)
    for _ in range(60):
        p = int(rng.choice([3, 5]))
        ctx = FieldCtx(p)
        n = int(rng.integers(1, 3))
        gens = [random_poly(rng, ctx, n, 2) for _ in range(int(rng.integers(1, 3)))]
        q = random_poly(rng, ctx, n, 2)
        report = radical_membership(IdealSpec(gens, q), d_max=2)
        assert report.oracle_agrees
