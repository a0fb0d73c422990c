"""Exception hierarchy shared by all engine modules.

``EngineError`` covers domain failures (undefined estimands, empty cells,
bad references); the two scenario-file errors are raised during parsing and
map to a distinct CLI exit code.
"""


class EngineError(Exception):
    """Base class for domain errors; CLI exit code 1."""


class PositivityError(EngineError):
    """A requested observational quantity is undefined because a stratum
    has no mass on one of the compared exposure arms."""


class UnknownStratumError(EngineError):
    """A stratum label does not exist in the scenario (or target)."""


class UnknownOutcomeError(EngineError):
    """An outcome name is not declared by the scenario."""


class UnknownStrainError(EngineError):
    """A version label is not a strain of the referenced stratum."""


class NonStochasticError(EngineError):
    """A supplied distribution has negative mass or does not sum to one."""


class EmptyCellError(EngineError):
    """An estimator cell required by the analysis has no observations."""


class EmptyReportError(EngineError):
    """A chart was requested for a report with nothing to draw."""


class ScenarioValidationError(EngineError):
    """A scenario failed invariant validation; carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ScenarioSyntaxError(Exception):
    """Scenario file is not well-formed JSON; CLI exit code 2."""


class ScenarioSchemaError(Exception):
    """Scenario file JSON does not match the documented schema; CLI exit code 2."""
