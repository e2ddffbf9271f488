"""
Ideals, Buchberger's algorithm, normal forms and quotient dimensions.

Buchberger's algorithm with the two classical criteria (coprime leading
monomials; the chain criterion) and the "normal" pair selection strategy
(smallest lcm first). Every basis element optionally carries its cofactor
representation in terms of the input generators, which is what the residue
transformation law needs to write z_i^{m_i} = sum_j a_ij X_j.

Work is bounded: `step_budget` caps S-pair reductions and `term_budget` caps
the size of any intermediate polynomial. Running out raises
`BudgetExceededError`, which the CLI reports as a resource error.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from app.core.config import settings
from app.core.errors import BudgetExceededError, NonIsolatedError, VariableMismatchError
from app.polycore.poly import (
    GREVLEX,
    Exponent,
    MultiPoly,
    TermOrder,
    divides,
    monomial_div,
    monomial_lcm,
    monomial_mul,
)

logger = logging.getLogger(__name__)

INFINITE = math.inf


@dataclass(frozen=True)
class Ideal:
    """Polynomial ideal given by generators and a fixed term order."""

    generators: tuple[MultiPoly, ...]
    order: TermOrder = GREVLEX
    is_groebner: bool = False

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if any(g.is_zero() for g in gens):
            raise ValueError("ideal generators must be nonzero")
        if gens and len({g.variables for g in gens}) > 1:
            raise VariableMismatchError("ideal generators over different variable lists")

    @classmethod
    def of(cls, generators: Sequence[MultiPoly], order: TermOrder = GREVLEX) -> "Ideal":
        """Build from a list that may contain zeros (they generate nothing)."""
        return cls(tuple(g for g in generators if not g.is_zero()), order)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.generators[0].variables if self.generators else ()

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)

    def leading_monomials(self) -> list[Exponent]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass(frozen=True)
class GroebnerResult:
    """Reduced basis plus cofactors: basis[i] = sum_j cofactors[i][j] * input[j]."""

    basis: Ideal
    inputs: tuple[MultiPoly, ...]
    cofactors: tuple[tuple[MultiPoly, ...], ...]
    steps: int = 0


@dataclass(frozen=True)
class NormalForm:
    """f = sum_i cofactors[i] * basis[i] + remainder."""

    remainder: MultiPoly
    cofactors: tuple[MultiPoly, ...]
    basis: Ideal = field(repr=False)

    @property
    def is_member(self) -> bool:
        return self.remainder.is_zero()

    def reconstruct(self) -> MultiPoly:
        total = self.remainder
        for q, g in zip(self.cofactors, self.basis.generators):
            total = total + q * g
        return total


# ----- division -----------------------------------------------------------

def divide(
    f: MultiPoly,
    divisors: Sequence[MultiPoly],
    order: TermOrder = GREVLEX,
    term_budget: int | None = None,
) -> tuple[list[MultiPoly], MultiPoly]:
    """Multivariate division with remainder; remainder is fully reduced."""
    term_budget = term_budget or settings.GROEBNER_TERM_BUDGET
    variables = f.variables
    lts = [d.leading_term(order) for d in divisors]
    quotients: list[dict[Exponent, Fraction]] = [{} for _ in divisors]
    remainder: dict[Exponent, Fraction] = {}
    p = f
    while not p.is_zero():
        if len(p) > term_budget:
            raise BudgetExceededError("division", term_budget, f"{len(p)} terms")
        lm, lc = p.leading_term(order)
        for i, (lm_d, lc_d) in enumerate(lts):
            shift = monomial_div(lm, lm_d)
            if shift is not None:
                c = lc / lc_d
                quotients[i][shift] = quotients[i].get(shift, Fraction(0)) + c
                p = p - divisors[i].mul_term(shift, c)
                break
        else:
            remainder[lm] = lc
            p = p - MultiPoly.monomial(lm, lc, variables)
    return (
        [MultiPoly(variables, q) for q in quotients],
        MultiPoly(variables, remainder),
    )


# ----- Buchberger ---------------------------------------------------------

def _spoly(
    f: MultiPoly, g: MultiPoly, order: TermOrder
) -> tuple[MultiPoly, Exponent, Fraction, Exponent, Fraction]:
    lm_f, lc_f = f.leading_term(order)
    lm_g, lc_g = g.leading_term(order)
    lcm = monomial_lcm(lm_f, lm_g)
    sf, sg = monomial_div(lcm, lm_f), monomial_div(lcm, lm_g)
    cf, cg = 1 / lc_f, 1 / lc_g
    return f.mul_term(sf, cf) - g.mul_term(sg, cg), sf, cf, sg, cg


def groebner_with_cofactors(
    ideal: Ideal,
    *,
    step_budget: int | None = None,
    term_budget: int | None = None,
) -> GroebnerResult:
    """Reduced Groebner basis of `ideal`, tracking cofactors of every element."""
    step_budget = step_budget or settings.GROEBNER_STEP_BUDGET
    term_budget = term_budget or settings.GROEBNER_TERM_BUDGET
    order = ideal.order
    inputs = ideal.generators
    if not inputs:
        return GroebnerResult(Ideal((), order, True), (), (), 0)
    variables = ideal.variables
    m = len(inputs)
    zero = MultiPoly.zero(variables)

    def unit_vector(j: int, c: Fraction) -> list[MultiPoly]:
        return [MultiPoly.constant(c, variables) if k == j else zero for k in range(m)]

    basis: list[MultiPoly] = []
    reps: list[list[MultiPoly]] = []
    for j, f in enumerate(inputs):
        _, lc = f.leading_term(order)
        basis.append(f.scale(1 / lc))
        reps.append(unit_vector(j, 1 / lc))

    lms = [g.leading_monomial(order) for g in basis]
    key = order.key(variables)
    pairs = set(itertools.combinations(range(len(basis)), 2))
    steps = 0

    def chain_skip(i: int, j: int, lcm: Exponent) -> bool:
        for k in range(len(basis)):
            if k in (i, j) or not divides(lms[k], lcm):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                return True
        return False

    while pairs:
        i, j = min(pairs, key=lambda p: (key(monomial_lcm(lms[p[0]], lms[p[1]])), p))
        pairs.discard((i, j))
        lcm = monomial_lcm(lms[i], lms[j])
        if lcm == monomial_mul(lms[i], lms[j]):
            continue  # coprime leading monomials
        if chain_skip(i, j, lcm):
            continue
        steps += 1
        if steps > step_budget:
            raise BudgetExceededError("groebner", step_budget, f"{len(basis)} basis elements")
        s, sf, cf, sg, cg = _spoly(basis[i], basis[j], order)
        s_rep = [
            a.mul_term(sf, cf) - b.mul_term(sg, cg) for a, b in zip(reps[i], reps[j])
        ]
        quotients, r = divide(s, basis, order, term_budget)
        if r.is_zero():
            continue
        r_rep = list(s_rep)
        for q, rep in zip(quotients, reps):
            if not q.is_zero():
                r_rep = [x - q * y for x, y in zip(r_rep, rep)]
        _, lc = r.leading_term(order)
        r, r_rep = r.scale(1 / lc), [x.scale(1 / lc) for x in r_rep]
        logger.debug("groebner step %d: new element with %d terms", steps, len(r))
        basis.append(r)
        reps.append(r_rep)
        lms.append(r.leading_monomial(order))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
        if r.is_constant():
            # Unit ideal: {1} is the reduced basis.
            return GroebnerResult(Ideal((r,), order, True), inputs, (tuple(r_rep),), steps)

    # Minimalize: drop elements whose leading monomial is divisible by another's.
    keep: list[int] = []
    for idx in sorted(range(len(basis)), key=lambda t: (key(lms[t]), t)):
        if not any(divides(lms[k], lms[idx]) for k in keep):
            keep.append(idx)
    minimal = [basis[k] for k in keep]
    minimal_reps = [reps[k] for k in keep]

    # Interreduce; leading terms are untouched, so the set stays minimal.
    reduced: list[MultiPoly] = []
    reduced_reps: list[list[MultiPoly]] = []
    for t, g in enumerate(minimal):
        others = minimal[:t] + minimal[t + 1:]
        other_reps = minimal_reps[:t] + minimal_reps[t + 1:]
        quotients, r = divide(g, others, order, term_budget) if others else ([], g)
        rep = list(minimal_reps[t])
        for q, orep in zip(quotients, other_reps):
            if not q.is_zero():
                rep = [x - q * y for x, y in zip(rep, orep)]
        _, lc = r.leading_term(order)
        reduced.append(r.scale(1 / lc))
        reduced_reps.append([x.scale(1 / lc) for x in rep])

    ordering = sorted(range(len(reduced)), key=lambda t: key(reduced[t].leading_monomial(order)))
    logger.debug("groebner: %d S-pair reductions, basis size %d", steps, len(reduced))
    return GroebnerResult(
        Ideal(tuple(reduced[t] for t in ordering), order, True),
        inputs,
        tuple(tuple(reduced_reps[t]) for t in ordering),
        steps,
    )


def groebner(ideal: Ideal, *, step_budget: int | None = None, term_budget: int | None = None) -> Ideal:
    """Reduced Groebner basis in the ideal's own term order (idempotent)."""
    if ideal.is_groebner:
        return ideal
    return groebner_with_cofactors(ideal, step_budget=step_budget, term_budget=term_budget).basis


def normal_form(f: MultiPoly, basis: Ideal, *, step_budget: int | None = None) -> NormalForm:
    """Remainder of f modulo a Groebner basis, with cofactors.

    A basis not yet flagged as Groebner is completed first, and the cofactors
    then refer to the completed basis (`NormalForm.basis`).
    """
    G = groebner(basis, step_budget=step_budget)
    if not G.generators:
        return NormalForm(f, (), G)
    if f.variables != G.variables:
        f = f.reorder(G.variables)
    quotients, r = divide(f, G.generators, G.order)
    return NormalForm(r, tuple(quotients), G)


def express_in_generators(f: MultiPoly, result: GroebnerResult) -> list[MultiPoly] | None:
    """Cofactors c_j with f = sum_j c_j * input_j, or None when f is not in the ideal."""
    nf = normal_form(f, result.basis)
    if not nf.is_member:
        return None
    variables = result.basis.variables
    out = [MultiPoly.zero(variables) for _ in result.inputs]
    for q, rep in zip(nf.cofactors, result.cofactors):
        if q.is_zero():
            continue
        out = [o + q * r for o, r in zip(out, rep)]
    return out


def contains(ideal: Ideal, f: MultiPoly) -> bool:
    return normal_form(f, ideal).is_member


# ----- quotient algebra ---------------------------------------------------

def _staircase_bounds(G: Ideal) -> list[int] | None:
    """Per-variable exponent a_i with x_i^{a_i} a leading monomial, or None if unbounded."""
    n = len(G.variables)
    lms = G.leading_monomials()
    bounds: list[int] = []
    for i in range(n):
        pure = [e[i] for e in lms if e[i] > 0 and all(e[k] == 0 for k in range(n) if k != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    return bounds


def standard_monomials(ideal: Ideal, *, step_budget: int | None = None) -> list[Exponent] | None:
    """Monomials not in the leading-term ideal, sorted ascending; None when infinitely many."""
    G = groebner(ideal, step_budget=step_budget)
    if G.is_unit():
        return []
    if not G.generators:
        return None
    bounds = _staircase_bounds(G)
    if bounds is None:
        return None
    lms = G.leading_monomials()
    key = G.order.key(G.variables)
    found = [
        e
        for e in itertools.product(*(range(b) for b in bounds))
        if not any(divides(lm, e) for lm in lms)
    ]
    return sorted(found, key=key)


def quotient_dimension(ideal: Ideal, *, step_budget: int | None = None) -> int | float:
    """dim_Q Q[x]/I, or INFINITE (math.inf) when the staircase is unbounded."""
    if not ideal.generators:
        return INFINITE
    std = standard_monomials(ideal, step_budget=step_budget)
    return INFINITE if std is None else len(std)


def minimal_polynomial(name: str, ideal: Ideal, *, step_budget: int | None = None) -> MultiPoly:
    """Monic generator of I ∩ Q[name] for a zero-dimensional ideal I.

    Found as the first linear dependency among the normal forms of
    1, name, name^2, ... in the standard-monomial basis.
    """
    G = groebner(ideal, step_budget=step_budget)
    std = standard_monomials(G)
    if std is None:
        raise NonIsolatedError(f"ideal {ideal} is not zero-dimensional")
    variables = G.variables
    index = {e: k for k, e in enumerate(std)}
    z = MultiPoly.var(name, variables)
    columns: list[list[Fraction]] = []
    power = MultiPoly.one(variables)
    for k in range(len(std) + 1):
        r = normal_form(power, G).remainder
        col = [Fraction(0)] * len(std)
        for e, c in r.terms.items():
            col[index[e]] = c
        columns.append(col)
        mat = sympy.Matrix(
            [[sympy.Rational(columns[c][row].numerator, columns[c][row].denominator)
              for c in range(len(columns))] for row in range(len(std))]
        ) if std else sympy.zeros(0, len(columns))
        null = mat.nullspace()
        if null:
            vec = null[0]
            lead = vec[k]
            coeffs = [Fraction(int((v / lead).p), int((v / lead).q)) for v in vec]
            return MultiPoly.from_univariate(coeffs, name, variables)
        power = power * z
    raise ArithmeticError("no dependency found")  # pragma: no cover
