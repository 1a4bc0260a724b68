"""Exception hierarchy shared by every layer of the package."""


class AdequacyError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(AdequacyError, ValueError):
    """A model parameter lies outside its admissible domain."""


class UnsupportedOperationError(AdequacyError, TypeError):
    """The operation is not defined for this model variant."""


class MomentInfeasibleError(ParameterDomainError):
    """No distribution of the requested family matches the given moments."""


class ConfigurationError(AdequacyError, ValueError):
    """Invalid run configuration (step sizes, threshold grids, sample counts)."""


class PropagationError(AdequacyError):
    """A component model failed inside a Monte Carlo iteration."""

    def __init__(self, iteration, cause):
        super().__init__(f"iteration {iteration}: {cause}")
        self.iteration = iteration
        self.cause = cause


class IngestionError(AdequacyError, ValueError):
    """Malformed input data file."""


class ScenarioParseError(AdequacyError, ValueError):
    """The scenario file is not well-formed structured text."""


class ScenarioValidationError(AdequacyError, ValueError):
    """A scenario parsed but violates one or more invariants.

    ``violations`` holds one ``"<field path>: <message>"`` string per problem.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
