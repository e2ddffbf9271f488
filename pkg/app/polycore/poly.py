"""
Exact multivariate polynomials over the rationals.

`MultiPoly` is the universal carrier of the toolkit: form coefficients, vector
field components, Jacobian entries, parametrizations and symmetric-function
expressions are all `MultiPoly` values. A polynomial is a sparse map from
exponent vectors to nonzero `Fraction` coefficients over an ordered tuple of
variable names. Values are immutable after construction, so they can be
shared freely between threads.

Coefficients are `fractions.Fraction` throughout: always reduced, positive
denominator, canonical zero 0/1. No modular shortcuts anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Iterable, Literal, Mapping, Sequence, Union

from app.core.errors import UnknownVariableError, VariableMismatchError

Rational = Fraction
Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


def as_rational(value: Any) -> Fraction:
    """Coerce int / Fraction / "p/q" string to a Fraction. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Wire form: "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ----- monomial helpers -------------------------------------------------

def monomial_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Exponent, b: Exponent) -> Exponent | None:
    """a / b when b divides a, else None."""
    out = tuple(x - y for x, y in zip(a, b))
    return out if all(e >= 0 for e in out) else None


def monomial_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


# ----- term orders --------------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    """A monomial order. `priority` lists variable names from most to least
    significant; by default the polynomial's own variable order is used."""

    kind: Literal["grevlex", "lex"] = "grevlex"
    priority: tuple[str, ...] | None = None

    @classmethod
    def grevlex(cls) -> "TermOrder":
        return cls("grevlex")

    @classmethod
    def lex(cls, priority: Sequence[str] | None = None) -> "TermOrder":
        return cls("lex", tuple(priority) if priority is not None else None)

    def key(self, variables: Sequence[str]) -> Callable[[Exponent], tuple]:
        """Sort key: larger key means larger monomial."""
        if self.priority is None:
            perm = list(range(len(variables)))
        else:
            missing = [v for v in self.priority if v not in variables]
            if missing:
                raise UnknownVariableError(missing[0], tuple(variables))
            perm = [variables.index(v) for v in self.priority]
            perm += [i for i in range(len(variables)) if i not in perm]
        if self.kind == "lex":
            return lambda e: tuple(e[i] for i in perm)
        return lambda e: (sum(e), tuple(-e[i] for i in reversed(perm)))

    def __str__(self) -> str:
        if self.kind == "lex" and self.priority:
            return f"lex({'>'.join(self.priority)})"
        return self.kind


GREVLEX = TermOrder.grevlex()


# ----- the polynomial -----------------------------------------------------

class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Any] | None = None) -> None:
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise VariableMismatchError(f"duplicate variable names in {self.variables}")
        n = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"exponent {exp} does not fit variables {self.variables}")
            c = as_rational(coeff)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash: int | None = None

    # -- constructors --

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls(variables)

    @classmethod
    def constant(cls, value: Scalar, variables: Sequence[str]) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def one(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls.constant(1, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariableError(name, variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def monomial(cls, exp: Exponent, coeff: Scalar, variables: Sequence[str]) -> "MultiPoly":
        return cls(variables, {tuple(exp): coeff})

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Fraction]) -> "MultiPoly":
        # Trusted fast path: terms already clean.
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._hash = None
        return p

    # -- inspection --

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self._terms), default=-1)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self._terms))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(name, self.variables) from None

    # -- ordering --

    def sorted_terms(self, order: TermOrder = GREVLEX) -> list[tuple[Exponent, Fraction]]:
        key = order.key(self.variables)
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def leading_term(self, order: TermOrder = GREVLEX) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key(self.variables)
        exp = max(self._terms, key=key)
        return exp, self._terms[exp]

    def leading_monomial(self, order: TermOrder = GREVLEX) -> Exponent:
        return self.leading_term(order)[0]

    # -- arithmetic --

    def _coerce(self, other: Any) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatchError(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other
        return MultiPoly.constant(as_rational(other), self.variables)

    def __add__(self, other: Any) -> "MultiPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "MultiPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "MultiPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        c = as_rational(c)
        if not c:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def mul_term(self, exp: Exponent, coeff: Scalar) -> "MultiPoly":
        coeff = as_rational(coeff)
        if not coeff:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(
            self.variables, {monomial_mul(e, exp): c * coeff for e, c in self._terms.items()}
        )

    def __mul__(self, other: Any) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = monomial_mul(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.variables, out)

    def __rmul__(self, other: Any) -> "MultiPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.one(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    # -- calculus --

    def diff(self, name: str) -> "MultiPoly":
        i = self._index(name)
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return MultiPoly._raw(self.variables, out)

    # -- evaluation and substitution --

    def evaluate(self, values: Mapping[str, Any] | Sequence[Any]) -> Any:
        """Evaluate at a point. Exact for Fraction inputs; complex inputs give complex."""
        if isinstance(values, Mapping):
            missing = [v for v in self.used_variables() if v not in values]
            if missing:
                raise UnknownVariableError(missing[0], tuple(values))
            point = [values.get(v, 0) for v in self.variables]
        else:
            point = list(values)
            if len(point) != self.nvars:
                raise VariableMismatchError(f"expected {self.nvars} coordinates, got {len(point)}")
        total: Any = Fraction(0)
        for e, c in self._terms.items():
            term: Any = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def evaluate_array(self, arrays: Sequence[Any]) -> Any:
        """Vectorised evaluation; `arrays` are numpy arrays (one per variable)."""
        import numpy as np

        shape = np.broadcast(*arrays).shape if arrays else ()
        total = np.zeros(shape, dtype=complex)
        for e, c in self._terms.items():
            term = np.full(shape, complex(float(c)))
            for x, k in zip(arrays, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, Any], target: Sequence[str]) -> "MultiPoly":
        """Compose: replace each variable by a MultiPoly over `target` (or a scalar).

        Variables absent from `mapping` must also appear in `target` and are
        carried over unchanged.
        """
        target = tuple(target)
        images: list[MultiPoly] = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                if isinstance(img, MultiPoly):
                    if img.variables != target:
                        img = img.reorder(target)
                else:
                    img = MultiPoly.constant(as_rational(img), target)
            elif v in target:
                img = MultiPoly.var(v, target)
            else:
                if self.degree_in(v) <= 0:
                    img = MultiPoly.zero(target)
                else:
                    raise UnknownVariableError(v, target)
            images.append(img)
        result = MultiPoly.zero(target)
        powers: dict[tuple[int, int], MultiPoly] = {}
        for e, c in self._terms.items():
            term = MultiPoly.constant(c, target)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in powers:
                        powers[(i, k)] = images[i] ** k
                    term = term * powers[(i, k)]
            result = result + term
        return result

    def reorder(self, variables: Sequence[str]) -> "MultiPoly":
        """Same polynomial over another variable list (must cover used variables)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        used = self.used_variables()
        for v in used:
            if v not in variables:
                raise UnknownVariableError(v, variables)
        index = [self.variables.index(v) if v in self.variables else None for v in variables]
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            out[tuple(e[i] if i is not None else 0 for i in index)] = c
        return MultiPoly._raw(variables, out)

    def translate(self, shift: Mapping[str, Any]) -> "MultiPoly":
        """p(z + shift) over the same variables."""
        mapping = {
            v: MultiPoly.var(v, self.variables) + as_rational(shift[v])
            for v in self.variables
            if v in shift and shift[v]
        }
        return self.substitute(mapping, self.variables) if mapping else self

    def coefficients_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Split p = sum_k c_k * name^k; each c_k keeps the full variable list."""
        i = self._index(name)
        parts: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            parts.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly._raw(self.variables, t) for k, t in parts.items()}

    def truncate(self, bounds: Sequence[int]) -> "MultiPoly":
        """Drop every term with some exponent e_i >= bounds[i] (reduction mod z^bounds)."""
        return MultiPoly._raw(
            self.variables,
            {e: c for e, c in self._terms.items() if all(k < b for k, b in zip(e, bounds))},
        )

    def univariate_coefficients(self) -> tuple[str | None, list[Fraction]]:
        """For a polynomial in (at most) one used variable: (name, [c0, c1, ...])."""
        used = self.used_variables()
        if len(used) > 1:
            raise ValueError(f"{self} is not univariate")
        if not used:
            return None, [self.constant_value()] if self._terms else []
        i = self.variables.index(used[0])
        coeffs = [Fraction(0)] * (self.degree_in(used[0]) + 1)
        for e, c in self._terms.items():
            coeffs[e[i]] = c
        return used[0], coeffs

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Scalar], name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name)
        terms = {}
        for k, c in enumerate(coeffs):
            exp = [0] * len(variables)
            exp[i] = k
            terms[tuple(exp)] = c
        return cls(variables, terms)

    # -- rendering --

    def to_string(self, order: TermOrder = GREVLEX) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for exp, c in self.sorted_terms(order):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, exp) if k
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_string()!r}, vars={list(self.variables)})"
