"""
Symmetric-function bookkeeping for residues on the projectivized bundle.

sigma_1, ..., sigma_l are the elementary symmetric functions in n variables
and rho_1, ..., rho_l those in the n variables together with one more, y:

    rho_j = sigma_j + y sigma_{j-1},      sigma_0 = 1.

A weight l+1 polynomial psi(rho) splits as

    psi = phi(sigma) y + phi0(sigma) + sum_{j>=2} phi_j(sigma) y^j

and conversely every phi of weight l has such a psi (not unique). Classes
upstairs live in Q[h, xi]/(h^{n+1}, xi^2 - 2 m h xi + m^2 h^2), the
cohomology of P(L + L) over P^n with L = det(N_F)^dual of degree -m.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Literal, Mapping

import sympy

from app.core.errors import DecompositionError
from app.polycore import MultiPoly, as_rational, format_rational, parse_poly
from app.residues.chern import CohomologyClass
from app.residues.foliation import FoliationSpec

logger = logging.getLogger(__name__)

Alphabet = Literal["sigma", "rho"]
_PREFIX: dict[str, str] = {"sigma": "s", "rho": "r"}


# ----- symmetric polynomials ----------------------------------------------

@dataclass(frozen=True)
class SymPoly:
    """A polynomial in sigma_1..sigma_l (names s1..sl) or rho_1..rho_l (r1..rl).

    Generator i has weight i.
    """

    alphabet: Alphabet
    poly: MultiPoly

    def __post_init__(self) -> None:
        prefix = _PREFIX[self.alphabet]
        for i, v in enumerate(self.poly.variables, start=1):
            if v != f"{prefix}{i}":
                raise ValueError(f"generator {v!r} does not belong to the {self.alphabet} alphabet")

    @staticmethod
    def generators(alphabet: Alphabet, size: int) -> tuple[str, ...]:
        return tuple(f"{_PREFIX[alphabet]}{i}" for i in range(1, size + 1))

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet, size: int | None = None) -> "SymPoly":
        prefix = _PREFIX[alphabet]
        indices = [int(i) for i in re.findall(rf"\b{prefix}(\d+)\b", text)]
        if any(i < 1 for i in indices):
            raise ValueError(f"generator indices start at 1 in {text!r}")
        top = max(indices + [size or 1])
        return cls(alphabet, parse_poly(text, cls.generators(alphabet, top)))

    @classmethod
    def from_terms(cls, alphabet: Alphabet, size: int, terms: Mapping[tuple[int, ...], Any]) -> "SymPoly":
        names = cls.generators(alphabet, max(size, 1))
        padded = {tuple(e) + (0,) * (len(names) - len(e)): as_rational(c) for e, c in terms.items()}
        return cls(alphabet, MultiPoly(names, padded))

    @property
    def size(self) -> int:
        return self.poly.nvars

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.poly.terms)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def weights(self) -> set[int]:
        return {sum(i * k for i, k in enumerate(e, start=1)) for e in self.poly.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> int:
        """Weighted degree; zero polynomials report 0."""
        ws = self.weights()
        if len(ws) > 1:
            raise DecompositionError(f"{self} is not weighted-homogeneous (weights {sorted(ws)})")
        return ws.pop() if ws else 0

    def widen(self, size: int) -> "SymPoly":
        if size < self.size and any(self.poly.degree_in(v) for v in self.poly.variables[size:]):
            raise ValueError(f"{self} uses generators beyond index {size}")
        return SymPoly(self.alphabet, self.poly.reorder(self.generators(self.alphabet, size)))

    def __add__(self, other: "SymPoly") -> "SymPoly":
        size = max(self.size, other.size)
        return SymPoly(self.alphabet, self.widen(size).poly + other.widen(size).poly)

    def scale(self, c: Any) -> "SymPoly":
        return SymPoly(self.alphabet, self.poly.scale(c))

    @classmethod
    def basis(cls, alphabet: Alphabet, weight: int) -> list["SymPoly"]:
        """All monomials of the given weight over generators 1..weight."""
        return [cls.from_terms(alphabet, weight, {e: 1}) for e in weight_basis(weight)]

    def evaluate(self, values: Any) -> Any:
        """Substitute generator i -> values[i-1]; values may be numbers or ring classes."""
        if len(values) < self.size:
            raise ValueError(f"{self} needs {self.size} generator values, got {len(values)}")
        total: Any = None
        for e, c in self.poly.terms.items():
            term: Any = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def evaluate_roots(self, roots: Any) -> Fraction:
        """Value on the elementary symmetric functions of `roots` (Chern roots)."""
        return self.evaluate(elementary_symmetric(roots, self.size))

    def evaluate_c1(self, m: int, ambient_dim: int) -> CohomologyClass:
        """Value on a bundle whose only nonzero class is c_1 = m h (so sigma_j = 0 for j >= 2)."""
        out = CohomologyClass.zero(ambient_dim)
        for e, c in self.poly.terms.items():
            if any(e[1:]):
                continue
            out = out + CohomologyClass.monomial(ambient_dim, e[0], c * Fraction(m) ** e[0])
        return out

    def to_string(self) -> str:
        return self.poly.to_string()

    def __str__(self) -> str:
        return self.to_string()


def elementary_symmetric(roots: Any, count: int | None = None) -> list[Fraction]:
    """[e_1, ..., e_count] of the given roots (missing ones are 0)."""
    roots = [as_rational(r) for r in roots]
    count = len(roots) if count is None else count
    e = [Fraction(1)] + [Fraction(0)] * max(count, len(roots))
    for r in roots:
        for j in range(len(e) - 1, 0, -1):
            e[j] += r * e[j - 1]
    return e[1 : count + 1]


def _rho_images(size: int) -> tuple[tuple[str, ...], dict[str, MultiPoly]]:
    """rho_j -> sigma_j + y sigma_{j-1} over variables (s1..s_size, y)."""
    sigmas = SymPoly.generators("sigma", size)
    y = "y"
    variables = sigmas + (y,)
    yv = MultiPoly.var(y, variables)
    images: dict[str, MultiPoly] = {}
    for j in range(1, size + 1):
        lower = MultiPoly.one(variables) if j == 1 else MultiPoly.var(sigmas[j - 2], variables)
        images[f"r{j}"] = MultiPoly.var(sigmas[j - 1], variables) + yv * lower
    return variables, images


def rho_to_sigma(psi: SymPoly) -> dict[int, SymPoly]:
    """Substitute rho_j = sigma_j + y sigma_{j-1} and collect by powers of y."""
    if psi.alphabet != "rho":
        raise ValueError("rho_to_sigma expects a polynomial in the rho generators")
    size = psi.size
    variables, images = _rho_images(size)
    expanded = psi.poly.substitute(images, variables)
    sigmas = variables[:-1]
    return {
        j: SymPoly("sigma", part.reorder(sigmas))
        for j, part in sorted(expanded.coefficients_in("y").items())
    }


# ----- decomposition and lift ---------------------------------------------

@dataclass(frozen=True)
class CenklDecomposition:
    """psi = phi y + phi0 + sum_{j>=2} higher[j] y^j."""

    psi: SymPoly
    phi: SymPoly
    phi0: SymPoly
    higher: dict[int, SymPoly] = field(default_factory=dict)

    @property
    def weight(self) -> int:
        """Weight l of phi; psi has weight l+1."""
        return self.psi.weight - 1

    def reassemble(self) -> MultiPoly:
        """phi y + phi0 + sum phi_j y^j over (s1..sl, y)."""
        size = self.psi.size
        variables = SymPoly.generators("sigma", size) + ("y",)
        y = MultiPoly.var("y", variables)
        total = self.phi0.widen(size).poly.reorder(variables) + self.phi.widen(size).poly.reorder(variables) * y
        for j, part in self.higher.items():
            total = total + part.widen(size).poly.reorder(variables) * y**j
        return total

    def as_strings(self) -> dict[str, str]:
        out = {"phi": str(self.phi), "phi0": str(self.phi0)}
        out.update({f"phi{j}": str(p) for j, p in sorted(self.higher.items())})
        return out


def decompose(psi: SymPoly, weight: int | None = None) -> CenklDecomposition:
    """Split psi(rho) of weight l+1 into the y-coefficients of its sigma expansion."""
    w = psi.weight
    if weight is not None and not psi.is_zero() and w != weight:
        raise DecompositionError(f"{psi} has weight {w}, expected {weight}")
    parts = rho_to_sigma(psi)
    zero = SymPoly("sigma", MultiPoly.zero(SymPoly.generators("sigma", psi.size)))
    higher = {j: p for j, p in parts.items() if j >= 2 and not p.is_zero()}
    result = CenklDecomposition(psi, parts.get(1, zero), parts.get(0, zero), higher)
    logger.debug("decomposed %s: %s", psi, result.as_strings())
    return result


def _partitions(total: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def weight_basis(weight: int) -> list[tuple[int, ...]]:
    """Exponent vectors over r1..r_weight of all rho-monomials of the given weight, graded-lex."""
    basis = []
    for parts in _partitions(weight):
        e = [0] * weight
        for p in parts:
            e[p - 1] += 1
        basis.append(tuple(e))
    return sorted(basis, key=lambda e: (sum(e), tuple(-k for k in e)))


def _solve(columns: list[dict[tuple[int, ...], Fraction]], target: dict[tuple[int, ...], Fraction]) -> list[Fraction] | None:
    rows = sorted(set(target).union(*columns))
    A = sympy.Matrix([[sympy.Rational(str(col.get(r, 0))) for col in columns] for r in rows])
    b = sympy.Matrix([sympy.Rational(str(target.get(r, 0))) for r in rows])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({t: 0 for t in params})
    values = [Fraction(int(v.p), int(v.q)) for v in sol]
    return None if any(v == 0 for v in values) else values


def lift(phi: SymPoly, weight: int | None = None) -> SymPoly:
    """A psi of weight l+1 whose y-coefficient is phi.

    Candidates are rho-monomials of weight l+1. The search prefers the
    smallest maximal rho-degree, then the fewest monomials, then the first
    support in graded-lex order.
    """
    if phi.alphabet != "sigma":
        raise ValueError("lift expects a polynomial in the sigma generators")
    ell = phi.weight if weight is None else weight
    if not phi.is_zero() and phi.weight != ell:
        raise DecompositionError(f"{phi} has weight {phi.weight}, expected {ell}")
    size = ell + 1
    names = SymPoly.generators("rho", size)
    if phi.is_zero():
        return SymPoly("rho", MultiPoly.zero(names))
    target = phi.widen(size).terms
    basis = weight_basis(size)
    images = {
        e: decompose(SymPoly.from_terms("rho", size, {e: 1})).phi.widen(size).terms for e in basis
    }
    for degree in range(1, size + 1):
        pool = [e for e in basis if sum(e) <= degree]
        for support_size in range(1, len(pool) + 1):
            for support in itertools.combinations(pool, support_size):
                if max(sum(e) for e in support) != degree:
                    continue
                coeffs = _solve([images[e] for e in support], target)
                if coeffs is not None:
                    psi = SymPoly.from_terms("rho", size, dict(zip(support, coeffs)))
                    logger.debug("lifted %s to %s", phi, psi)
                    return psi
    raise DecompositionError(f"no weight-{size} rho polynomial has y-coefficient {phi}")


# ----- dimension bookkeeping ----------------------------------------------

def bundle_dimension_shift(dim_sing: int, dim_leaf: int) -> tuple[int, int]:
    """(dim Sing F, dim F) -> (dim Sing F_pi, dim F_pi) on P(E_F)."""
    if dim_sing < 0 or dim_leaf < 1:
        raise ValueError("dimensions must be non-negative, leaves at least one-dimensional")
    if dim_sing >= dim_leaf:
        raise ValueError(f"singular set of dimension {dim_sing} is not below the leaf dimension {dim_leaf}")
    return dim_sing + 1, dim_leaf


@dataclass(frozen=True)
class TowerStage:
    steps: int
    ambient_dim: int
    dim_sing: int
    dim_leaf: int

    @property
    def codim_leaf(self) -> int:
        return self.ambient_dim - self.dim_leaf

    @property
    def codim_sing(self) -> int:
        return self.ambient_dim - self.dim_sing


def tower_dimensions(ambient_dim: int, dim_leaf: int, dim_sing: int) -> list[TowerStage]:
    """Iterate the bundle construction until Sing has codimension one more than the leaves' codimension."""
    if dim_leaf > ambient_dim:
        raise ValueError(f"leaves of dimension {dim_leaf} do not fit in P^{ambient_dim}")
    bundle_dimension_shift(dim_sing, dim_leaf)
    stages = [TowerStage(0, ambient_dim, dim_sing, dim_leaf)]
    while stages[-1].dim_sing < dim_leaf - 1:
        last = stages[-1]
        ds, df = bundle_dimension_shift(last.dim_sing, last.dim_leaf)
        stages.append(TowerStage(last.steps + 1, last.ambient_dim + 1, ds, df))
    return stages


# ----- cohomology of P(E_F) -----------------------------------------------

@dataclass(frozen=True)
class BundleRingClass:
    """sum const[i] h^i + sum xi[i] h^i xi, reduced by xi^2 = 2 m h xi - m^2 h^2."""

    ambient_dim: int
    m: int
    const: tuple[Fraction, ...] = ()
    xi: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        n = self.ambient_dim
        for name in ("const", "xi"):
            coeffs = [as_rational(c) for c in getattr(self, name)]
            object.__setattr__(self, name, tuple((coeffs + [Fraction(0)] * (n + 1))[: n + 1]))

    @classmethod
    def from_base(cls, c: CohomologyClass, m: int) -> "BundleRingClass":
        """pi^* of a class on P^n."""
        return cls(c.ambient_dim, m, c.coefficients)

    @classmethod
    def xi_class(cls, n: int, m: int) -> "BundleRingClass":
        return cls(n, m, (), (1,))

    @classmethod
    def relative_tangent_c1(cls, n: int, m: int) -> "BundleRingClass":
        """c_1(T_{P/M}) = 2 xi - 2 m h."""
        return cls(n, m, (0, -2 * m), (2,))

    def _check(self, other: "BundleRingClass") -> None:
        if (other.ambient_dim, other.m) != (self.ambient_dim, self.m):
            raise ValueError("classes on different bundles")

    def __add__(self, other: "BundleRingClass") -> "BundleRingClass":
        self._check(other)
        return BundleRingClass(
            self.ambient_dim, self.m,
            tuple(a + b for a, b in zip(self.const, other.const)),
            tuple(a + b for a, b in zip(self.xi, other.xi)),
        )

    def scale(self, c: Any) -> "BundleRingClass":
        c = as_rational(c)
        return BundleRingClass(self.ambient_dim, self.m, tuple(a * c for a in self.const), tuple(a * c for a in self.xi))

    def _convolve(self, a: tuple[Fraction, ...], b: tuple[Fraction, ...], shift: int = 0) -> list[Fraction]:
        n = self.ambient_dim
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y and i + j + shift <= n:
                    out[i + j + shift] += x * y
        return out

    def __mul__(self, other: Any) -> "BundleRingClass":
        if not isinstance(other, BundleRingClass):
            return self.scale(other)
        self._check(other)
        m = self.m
        ac = self._convolve(self.const, other.const)
        cross = [x + y for x, y in zip(self._convolve(self.const, other.xi), self._convolve(self.xi, other.const))]
        bd_h2 = self._convolve(self.xi, other.xi, shift=2)
        bd_h1 = self._convolve(self.xi, other.xi, shift=1)
        const = [x - m * m * y for x, y in zip(ac, bd_h2)]
        xi = [x + 2 * m * y for x, y in zip(cross, bd_h1)]
        return BundleRingClass(self.ambient_dim, m, tuple(const), tuple(xi))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BundleRingClass":
        result = BundleRingClass(self.ambient_dim, self.m, (1,))
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not any(self.const) and not any(self.xi)

    def degrees(self) -> set[int]:
        """Complex degrees present: h^i has degree i, h^i xi has degree i+1."""
        return {i for i, a in enumerate(self.const) if a} | {i + 1 for i, a in enumerate(self.xi) if a}

    def to_string(self) -> str:
        pieces: list[tuple[Fraction, str]] = []
        for i, a in enumerate(self.xi):
            if a:
                h = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
                pieces.append((a, f"{h}*xi" if h else "xi"))
        for i, a in enumerate(self.const):
            if a:
                pieces.append((a, "" if i == 0 else ("h" if i == 1 else f"h^{i}")))
        if not pieces:
            return "0"
        out = []
        for a, mono in pieces:
            mag = abs(a)
            body = format_rational(mag) if not mono else (mono if mag == 1 else f"{format_rational(mag)}*{mono}")
            if not out:
                out.append(body if a > 0 else f"-{body}")
            else:
                out.append(f"{'+' if a > 0 else '-'} {body}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BundleBase:
    """The numbers the bundle-side classes depend on: P^n, m = deg det(N_F), k."""

    ambient_dim: int
    twist_degree: int
    codim: int = 1

    def __post_init__(self) -> None:
        if self.ambient_dim < 2 or self.codim < 1 or self.codim >= self.ambient_dim:
            raise ValueError(f"no codimension-{self.codim} foliation on P^{self.ambient_dim}")


def bundle_rhs(
    residue: Any,
    F: FoliationSpec | BundleBase,
    decomposition: CenklDecomposition,
    component: CohomologyClass | None = None,
) -> BundleRingClass:
    """lambda [Z] c1(T) + phi0(N_F) + sum_j phi_j(N_F) c1(T)^j on P(E_F).

    Classes of N_F are evaluated through c_1(N_F) = m h alone; [Z] defaults
    to h^{k+1}.
    """
    n, m, k = F.ambient_dim, F.twist_degree, F.codim
    if decomposition.weight != k + 1:
        raise DecompositionError(
            f"decomposition of {decomposition.psi} has phi of weight {decomposition.weight}, expected {k + 1}"
        )
    lam = as_rational(residue)
    Z = component if component is not None else CohomologyClass.monomial(n, k + 1)
    c1t = BundleRingClass.relative_tangent_c1(n, m)
    total = BundleRingClass.from_base(Z, m) * c1t * lam
    total = total + BundleRingClass.from_base(decomposition.phi0.evaluate_c1(m, n), m)
    for j, part in sorted(decomposition.higher.items()):
        total = total + BundleRingClass.from_base(part.evaluate_c1(m, n), m) * c1t**j
    logger.info("bundle right-hand side: %s", total)
    return total
