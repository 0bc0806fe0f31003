"""Prime-field contexts and sparse multivariate polynomials.

Polynomials map exponent vectors to nonzero coefficients in [1, p).
Variables are named x1..xn.  The canonical term order is graded-lex
(total degree descending, then exponents lexicographically descending),
which fixes serialization and all deterministic scans.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

from .errors import InputError, UnsupportedError

Monomial = tuple[int, ...]

_VAR_RE = re.compile(r"^x([1-9][0-9]*)(?:\^([0-9]+))?$")
_INT_RE = re.compile(r"^[0-9]+$")


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in range(2, int(math.isqrt(m)) + 1):
        if m % q == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_p; elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InputError(f"modulus must be prime, got {self.p}")

    def elements(self) -> range:
        return range(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise InputError("inverse of 0")
        return pow(a, self.p - 2, self.p)


def points_lex(p: int, n: int):
    """All points of F_p^n in lexicographic order (last coordinate fastest)."""
    return itertools.product(range(p), repeat=n)


def point_index(x: Monomial, p: int) -> int:
    idx = 0
    for v in x:
        idx = idx * p + v
    return idx


def points_graded(p: int, n: int) -> list[Monomial]:
    """All points of F_p^n sorted by (sum of lifts, then lex)."""
    return sorted(points_lex(p, n), key=lambda t: (sum(t), t))


def grlex_key(e: Monomial):
    return (-sum(e), tuple(-v for v in e))


class MultiPoly:
    """Sparse polynomial over F_p in n variables, immutable after construction."""

    __slots__ = ("ctx", "n", "terms", "_table")

    def __init__(self, ctx: FieldCtx, n: int, terms: dict):
        if n < 0:
            raise InputError("variable count must be >= 0")
        p = ctx.p
        clean: dict[Monomial, int] = {}
        for e, c in terms.items():
            e = tuple(int(v) for v in e)
            if len(e) != n:
                raise InputError(f"exponent vector {e} has length {len(e)}, expected {n}")
            if any(v < 0 for v in e):
                raise InputError(f"negative exponent in {e}")
            c = int(c) % p
            if c:
                clean[e] = (clean.get(e, 0) + c) % p
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_table", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "MultiPoly":
        return cls(ctx, n, {})

    @classmethod
    def constant(cls, ctx: FieldCtx, n: int, c: int) -> "MultiPoly":
        return cls(ctx, n, {(0,) * n: c})

    @classmethod
    def variable(cls, ctx: FieldCtx, n: int, index: int) -> "MultiPoly":
        """x_index with 1-based index."""
        if not 1 <= index <= n:
            raise InputError(f"variable index {index} out of range 1..{n}")
        e = [0] * n
        e[index - 1] = 1
        return cls(ctx, n, {tuple(e): 1})

    # -- basic structure ---------------------------------------------------

    @property
    def p(self) -> int:
        return self.ctx.p

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.n, 0)

    def canonical_terms(self) -> list[tuple[Monomial, int]]:
        return [(e, self.terms[e]) for e in sorted(self.terms, key=grlex_key)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.p == other.p
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, tuple(self.canonical_terms())))

    def __repr__(self) -> str:
        return f"MultiPoly(p={self.p}, n={self.n}, {poly_to_str(self)!r})"

    def __str__(self) -> str:
        return poly_to_str(self)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.p != self.p or other.n != self.n:
                raise InputError("mixed field or variable count")
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.ctx, self.n, other)
        return NotImplemented

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.ctx, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.ctx, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return MultiPoly(self.ctx, self.n, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.ctx, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise InputError("exponent must be a non-negative integer")
        result = MultiPoly.constant(self.ctx, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- evaluation --------------------------------------------------------

    def eval(self, x) -> int:
        if len(x) != self.n:
            raise InputError(f"point has length {len(x)}, expected {self.n}")
        p = self.p
        x = [int(v) % p for v in x]
        total = 0
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(x, e):
                if ei:
                    v = (v * pow(xi, ei, p)) % p
            total += v
        return total % p

    def eval_table(self) -> tuple[int, ...]:
        """Values at all p^n points in lexicographic order (cached)."""
        if self._table is None:
            table = tuple(self.eval(x) for x in points_lex(self.p, self.n))
            object.__setattr__(self, "_table", table)
        return self._table

    def shift(self, h) -> "MultiPoly":
        """The polynomial x -> f(x + h) for a constant vector h."""
        if len(h) != self.n:
            raise InputError(f"direction has length {len(h)}, expected {self.n}")
        p = self.p
        h = [int(v) % p for v in h]
        out: dict[Monomial, int] = {}
        for e, c in self.terms.items():
            # expand prod_i (x_i + h_i)^{e_i}
            partial = {(): c}
            for ei, hi in zip(e, h):
                nxt: dict[Monomial, int] = {}
                for k in range(ei + 1):
                    w = (math.comb(ei, k) * pow(hi, ei - k, p)) % p
                    if not w:
                        continue
                    for pe, pc in partial.items():
                        key = pe + (k,)
                        nxt[key] = (nxt.get(key, 0) + pc * w) % p
                partial = nxt
            for pe, pc in partial.items():
                out[pe] = out.get(pe, 0) + pc
        return MultiPoly(self.ctx, self.n, out)

    def scale_vars(self, j: int) -> "MultiPoly":
        """The polynomial x -> f(j * x)."""
        p = self.p
        return MultiPoly(
            self.ctx, self.n,
            {e: c * pow(j % p, sum(e), p) for e, c in self.terms.items()},
        )


# -- specified operations ---------------------------------------------------


def derivative(f: MultiPoly, dirs) -> MultiPoly:
    """Iterated directional derivative: successive f(x+h) - f(x)."""
    g = f
    for h in dirs:
        g = g.shift(h) - g
    return g


def homogeneous_top(f: MultiPoly) -> MultiPoly:
    """Degree-d homogeneous part of f; requires d < p."""
    d = f.degree()
    if d >= f.p:
        raise UnsupportedError(f"degree {d} >= p = {f.p}: {d}! is not invertible")
    return MultiPoly(f.ctx, f.n, {e: c for e, c in f.terms.items() if sum(e) == d})


def functional_reduce(f: MultiPoly) -> MultiPoly:
    """Canonical representative of f as a function F_p^n -> F_p.

    Exponents reduce mod x^p = x: e >= 1 maps to ((e-1) mod (p-1)) + 1.
    """
    p = f.p
    out: dict[Monomial, int] = {}
    for e, c in f.terms.items():
        red = tuple(0 if v == 0 else ((v - 1) % (p - 1)) + 1 for v in e)
        out[red] = out.get(red, 0) + c
    return MultiPoly(f.ctx, f.n, out)


def drop_variable(f: MultiPoly, var_index: int) -> MultiPoly:
    """Remove an absent variable (1-based) and renumber the rest."""
    j = var_index - 1
    if any(e[j] for e in f.terms):
        raise InputError(f"x{var_index} still occurs")
    return MultiPoly(f.ctx, f.n - 1, {e[:j] + e[j + 1:]: c for e, c in f.terms.items()})


def restrict_hyperplane(f: MultiPoly, var_index: int, value: int) -> MultiPoly:
    """Substitute x_{var_index} = value and renumber the remaining variables."""
    if not 1 <= var_index <= f.n:
        raise InputError(f"variable index {var_index} out of range 1..{f.n}")
    p = f.p
    value = int(value) % p
    j = var_index - 1
    out: dict[Monomial, int] = {}
    for e, c in f.terms.items():
        coeff = (c * pow(value, e[j], p)) % p
        key = e[:j] + (0,) + e[j + 1:]
        out[key] = out.get(key, 0) + coeff
    return drop_variable(MultiPoly(f.ctx, f.n, out), var_index)


def substitute(f: MultiPoly, var_index: int, g: MultiPoly) -> MultiPoly:
    """Replace x_{var_index} by the polynomial g (same ambient variables)."""
    if not 1 <= var_index <= f.n:
        raise InputError(f"variable index {var_index} out of range 1..{f.n}")
    if g.n != f.n or g.p != f.p:
        raise InputError("replacement must share field and variable count")
    j = var_index - 1
    result = MultiPoly.zero(f.ctx, f.n)
    for e, c in f.terms.items():
        base = MultiPoly(f.ctx, f.n, {e[:j] + (0,) + e[j + 1:]: c})
        result = result + base * (g ** e[j])
    return result


def restrict_affine(f: MultiPoly, coeffs, const: int) -> MultiPoly:
    """Restrict f to the hyperplane sum_i coeffs_i x_i = const.

    The first variable with a nonzero coefficient is solved for and
    substituted, reducing to an axis-aligned restriction.
    """
    p = f.p
    coeffs = [int(v) % p for v in coeffs]
    if len(coeffs) != f.n:
        raise InputError("coefficient vector length mismatch")
    j = next((i for i, v in enumerate(coeffs) if v), None)
    if j is None:
        raise InputError("hyperplane normal is zero")
    inv = f.ctx.inv(coeffs[j])
    repl_terms: dict[Monomial, int] = {(0,) * f.n: const * inv}
    for i, v in enumerate(coeffs):
        if i != j and v:
            e = [0] * f.n
            e[i] = 1
            repl_terms[tuple(e)] = -v * inv
    replacement = MultiPoly(f.ctx, f.n, repl_terms)
    return drop_variable(substitute(f, j + 1, replacement), j + 1)


def extend_variables(f: MultiPoly, new_n: int) -> MultiPoly:
    """Re-embed f into a larger ambient variable set (pads exponents)."""
    if new_n < f.n:
        raise InputError("cannot shrink the variable count")
    pad = (0,) * (new_n - f.n)
    return MultiPoly(f.ctx, new_n, {e + pad: c for e, c in f.terms.items()})


# -- lookup tables and composition -------------------------------------------


class LookupTable:
    """A function F_p^arity -> F_p stored as explicit entries plus a default."""

    __slots__ = ("p", "arity", "entries", "default")

    def __init__(self, p: int, arity: int, entries: dict, default: int | None = None):
        self.p = p
        self.arity = arity
        self.entries = {}
        for key, v in entries.items():
            key = tuple(int(x) % p for x in key)
            if len(key) != arity:
                raise InputError(f"key {key} has arity {len(key)}, expected {arity}")
            self.entries[key] = int(v) % p
        self.default = None if default is None else int(default) % p

    @classmethod
    def constant(cls, p: int, arity: int, value: int) -> "LookupTable":
        return cls(p, arity, {}, default=value)

    def is_total(self) -> bool:
        return self.default is not None or len(self.entries) == self.p ** self.arity

    def __call__(self, key) -> int:
        key = tuple(int(x) % self.p for x in key)
        if len(key) != self.arity:
            raise InputError(f"key arity {len(key)}, expected {self.arity}")
        if key in self.entries:
            return self.entries[key]
        if self.default is None:
            raise InputError(f"table has no entry for {key}")
        return self.default

    def __eq__(self, other) -> bool:
        if not isinstance(other, LookupTable) or (self.p, self.arity) != (other.p, other.arity):
            return False
        if self.is_total() and other.is_total() and self.p ** self.arity <= 10**6:
            return all(self(k) == other(k) for k in points_lex(self.p, self.arity))
        return (self.entries, self.default) == (other.entries, other.default)

    def to_flat(self) -> list[int]:
        """Values over all p^arity keys in graded order."""
        if not self.is_total():
            raise InputError("table does not cover all inputs")
        return [self(k) for k in points_graded(self.p, self.arity)]

    @classmethod
    def from_flat(cls, p: int, arity: int, values) -> "LookupTable":
        keys = points_graded(p, arity)
        if len(values) != len(keys):
            raise InputError(f"expected {len(keys)} values, got {len(values)}")
        return cls(p, arity, dict(zip(keys, values)))


def compose_gamma(table: LookupTable, polys: list[MultiPoly]):
    """The pointwise function x -> table(g_1(x), ..., g_c(x))."""
    if len(polys) != table.arity:
        raise InputError(f"{len(polys)} polynomials for a table of arity {table.arity}")
    if not table.is_total():
        raise InputError("table does not cover all inputs")
    for g in polys:
        if g.p != table.p:
            raise InputError("field mismatch between table and polynomials")
    if polys and any(g.n != polys[0].n for g in polys):
        raise InputError("polynomials disagree on variable count")

    def composed(x) -> int:
        return table(tuple(g.eval(x) for g in polys))

    return composed


def compose_poly(outer: MultiPoly, polys: list[MultiPoly]) -> MultiPoly:
    """Symbolic expansion of a polynomial outer function applied to polys."""
    if outer.n != len(polys):
        raise InputError(f"outer polynomial has {outer.n} variables, got {len(polys)} inputs")
    if not polys:
        raise InputError("need at least one inner polynomial")
    ctx, n = polys[0].ctx, polys[0].n
    if any(g.ctx.p != ctx.p or g.n != n for g in polys):
        raise InputError("inner polynomials must share field and variable count")
    result = MultiPoly.zero(ctx, n)
    for e, c in outer.terms.items():
        term = MultiPoly.constant(ctx, n, c)
        for g, ei in zip(polys, e):
            if ei:
                term = term * (g ** ei)
        result = result + term
    return result


# -- text grammar -------------------------------------------------------------


def parse_poly(text: str, p: int | FieldCtx, n: int | None = None) -> MultiPoly:
    """Parse `2*x1^2*x2 + 3*x3 + 1` style text into a MultiPoly.

    A leading or separating '-' is accepted and folded into coefficients.
    The variable count is inferred from the largest index unless given.
    """
    ctx = p if isinstance(p, FieldCtx) else FieldCtx(p)
    s = text.replace(" ", "")
    if not s:
        raise InputError("empty polynomial text")
    pieces: list[tuple[int, str]] = []
    sign, buf = 1, ""
    for ch in s:
        if ch in "+-" and buf:
            pieces.append((sign, buf))
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not buf and not pieces and ch == "-":
            sign = -sign
        elif ch in "+-" and not buf:
            raise InputError(f"misplaced {ch!r} in {text!r}")
        else:
            buf += ch
    if not buf:
        raise InputError(f"trailing operator in {text!r}")
    pieces.append((sign, buf))

    raw_terms: list[tuple[int, dict[int, int]]] = []
    max_index = 0
    for sign, term in pieces:
        coeff = sign
        exps: dict[int, int] = {}
        for factor in term.split("*"):
            m = _VAR_RE.match(factor)
            if m:
                idx = int(m.group(1))
                exp = int(m.group(2)) if m.group(2) else 1
                exps[idx] = exps.get(idx, 0) + exp
                max_index = max(max_index, idx)
            elif _INT_RE.match(factor):
                coeff *= int(factor)
            else:
                raise InputError(f"bad factor {factor!r} in {text!r}")
        raw_terms.append((coeff, exps))

    if n is None:
        n = max_index
    elif max_index > n:
        raise InputError(f"variable x{max_index} exceeds declared n = {n}")
    terms: dict[Monomial, int] = {}
    for coeff, exps in raw_terms:
        e = tuple(exps.get(i + 1, 0) for i in range(n))
        terms[e] = terms.get(e, 0) + coeff
    return MultiPoly(ctx, n, terms)


def poly_to_str(f: MultiPoly) -> str:
    """Canonical serialization: graded-lex terms, coefficients in [1, p)."""
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.canonical_terms():
        factors = []
        if c != 1 or sum(e) == 0:
            factors.append(str(c))
        for i, ei in enumerate(e):
            if ei == 1:
                factors.append(f"x{i + 1}")
            elif ei > 1:
                factors.append(f"x{i + 1}^{ei}")
        parts.append("*".join(factors))
    return " + ".join(parts)
