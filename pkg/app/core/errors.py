"""
Exception hierarchy for the residue toolkit.

Exceptions signal violated preconditions and exhausted budgets. Mathematical
outcomes (a component that fails verification, a global check that does not
balance) are reports, not exceptions; see the `*Report` dataclasses in the
residue modules.
"""

from __future__ import annotations


class ResidueToolError(Exception):
    """Root of every error the toolkit raises on purpose."""

    stage: str = "compute"


class PolySyntaxError(ResidueToolError, ValueError):
    """Malformed polynomial expression. `offset` is the byte offset of the fault."""

    stage = "parse"

    def __init__(self, message: str, text: str, offset: int) -> None:
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at offset {offset}: {text!r}")


class UnknownVariableError(ResidueToolError, ValueError):
    stage = "parse"

    def __init__(self, name: str, variables: tuple[str, ...], offset: int | None = None) -> None:
        self.name = name
        self.variables = variables
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown variable {name!r}{where}; declared: {', '.join(variables)}")


class VariableMismatchError(ResidueToolError, ValueError):
    """Operands live over different variable lists."""


class BudgetExceededError(ResidueToolError):
    """A configurable work budget ran out; the instance is beyond desk scale."""

    def __init__(self, stage: str, budget: int, detail: str = "") -> None:
        self.stage = stage
        self.budget = budget
        msg = f"{stage}: budget of {budget} exhausted"
        super().__init__(f"{msg} ({detail})" if detail else msg)


class NotProjectiveFormError(ResidueToolError):
    """Homogeneous 1-form whose Euler contraction does not vanish."""

    stage = "foliation"


class DegreeMismatchError(ResidueToolError):
    stage = "foliation"


class NotTransversalError(ResidueToolError):
    """Restriction to the disc vanishes identically."""

    stage = "foliation"


class DegenerateFieldError(ResidueToolError):
    """Both coefficients of a 2-variable form vanish identically."""

    stage = "foliation"


class NonIsolatedError(ResidueToolError):
    """The restricted field has a curve of zeros (zero resultant / infinite quotient)."""

    stage = "singular"


class DegeneratePointError(ResidueToolError):
    """det JX(p) = 0: the Jacobian formula does not apply."""

    stage = "residue"


class ComponentMissedError(ResidueToolError):
    """The disc centre is not a zero of the restricted field."""

    stage = "residue"


class GenericityError(ResidueToolError):
    stage = "verify"

    def __init__(self, component: str, failed: list[str]) -> None:
        self.component = component
        self.failed = failed
        super().__init__(f"component {component!r} failed genericity checks: {', '.join(failed)}")


class ConvergenceError(ResidueToolError):
    stage = "martinelli"


class NearbyZeroError(ResidueToolError):
    """Another zero of the field lies inside (or on) the integration sphere."""

    stage = "martinelli"


class DecompositionError(ResidueToolError):
    stage = "cenkl"


class ProblemSchemaError(ResidueToolError):
    """Problem file failed validation; `errors` maps JSON pointers to messages."""

    stage = "input"

    def __init__(self, errors: list[tuple[str, str]]) -> None:
        self.errors = errors
        joined = "; ".join(f"{ptr}: {msg}" for ptr, msg in errors)
        super().__init__(f"problem file invalid: {joined}")


class UnsupportedMonomialError(ResidueToolError):
    """Chern monomial outside what the global check can evaluate on N_F."""

    stage = "check"
