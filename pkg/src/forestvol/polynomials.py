"""Sparse multivariate polynomials over exact rationals.

Variables are integer ids: vertex variables are >= 0, and two reserved ids
denote the symbolic integration bounds (LOWER renders as "m", UPPER as "M").
Monomials are stored as sorted ((var, exp), ...) tuples mapping to Fraction
coefficients; zero coefficients are pruned eagerly, so equality of dicts is
equality of polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

LOWER = -1
UPPER = -2

_names = {LOWER: "m", UPPER: "M"}

Monomial = tuple[tuple[int, int], ...]
Scalar = Union[Fraction, int]


class MultiPoly:
    """Immutable sparse polynomial; supports +, -, *, scalar ops."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coef in terms.items():
                coef = Fraction(coef)
                if coef:
                    clean[_norm_mono(mono)] = coef
        self.terms = clean

    @staticmethod
    def constant(c: Scalar) -> "MultiPoly":
        return MultiPoly({(): Fraction(c)})

    @staticmethod
    def variable(v: int) -> "MultiPoly":
        return MultiPoly({((v, 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[int]:
        return {v for mono in self.terms for v, _ in mono}

    def total_degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self.terms), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        other = _coerce(other)
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            val = out.get(mono, 0) + coef
            if val:
                out[mono] = val
            elif mono in out:
                del out[mono]
        return _wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return _wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other: "MultiPoly | Scalar") -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                val = out.get(mono, 0) + c1 * c2
                if val:
                    out[mono] = val
                elif mono in out:
                    del out[mono]
        return _wrap(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly()
        return _wrap({m: coef * c for m, coef in self.terms.items()})

    def substitute(self, v: int, value: "MultiPoly | Scalar") -> "MultiPoly":
        """Replace variable v by a constant or polynomial."""
        value = _coerce(value)
        out = MultiPoly()
        untouched: dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            e = _exp_of(mono, v)
            if e == 0:
                val = untouched.get(mono, 0) + coef
                if val:
                    untouched[mono] = val
                continue
            rest = tuple((w, x) for w, x in mono if w != v)
            out = out + (value**e).scale(coef) * _wrap({rest: Fraction(1)})
        return out + _wrap(untouched)

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def antiderivative(self, v: int) -> "MultiPoly":
        out: dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            e = _exp_of(mono, v) + 1
            out[_mono_mul(tuple((w, x) for w, x in mono if w != v), ((v, e),))] = (
                coef / e
            )
        return _wrap(out)

    def integrate_definite(
        self,
        v: int,
        lower: "MultiPoly | Scalar",
        upper: "MultiPoly | Scalar",
    ) -> "MultiPoly":
        """Definite integral in v; bounds must not involve v."""
        lower = _coerce(lower)
        upper = _coerce(upper)
        if v in lower.variables() or v in upper.variables():
            raise ValueError("integration bound depends on the variable")
        anti = self.antiderivative(v)
        return anti.substitute(v, upper) - anti.substitute(v, lower)

    def evaluate(self, assignment: Mapping[int, Scalar]) -> Fraction:
        total = Fraction(0)
        for mono, coef in self.terms.items():
            val = coef
            for v, e in mono:
                if v not in assignment:
                    raise ValueError(f"unassigned variable {_var_name(v)}")
                val *= Fraction(assignment[v]) ** e
            total += val
        return total

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Graded order, highest total degree first; deterministic."""
        return sorted(
            self.terms.items(),
            key=lambda item: (-sum(e for _, e in item[0]), item[0]),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, coef in self.sorted_terms():
            factors = [
                _var_name(v) if e == 1 else f"{_var_name(v)}^{e}" for v, e in mono
            ]
            body = "·".join(factors)
            mag = -coef if coef < 0 else coef
            if body:
                piece = body if mag == 1 else f"{mag}·{body}"
            else:
                piece = str(mag)
            if not parts:
                parts.append(piece if coef > 0 else f"-{piece}")
            else:
                parts.append(f"{'+' if coef > 0 else '-'} {piece}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def _exp_of(mono: Monomial, v: int) -> int:
    for w, e in mono:
        if w == v:
            return e
    return 0


def _var_name(v: int) -> str:
    return _names.get(v, f"x_{v}")


def _norm_mono(mono: Iterable[tuple[int, int]]) -> Monomial:
    merged: dict[int, int] = {}
    for v, e in mono:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged = dict(m1)
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def _coerce(x: "MultiPoly | Scalar") -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    return MultiPoly.constant(x)


def _wrap(terms: dict[Monomial, Fraction]) -> MultiPoly:
    p = MultiPoly.__new__(MultiPoly)
    p.terms = terms
    return p
