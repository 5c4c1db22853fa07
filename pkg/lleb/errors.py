"""Exceptions raised by the bifurcation toolkit.

Every error keeps the keyword context it was raised with, so the CLI can turn
it into a machine-readable object via `to_dict()`.
"""


class LLEBifError(Exception):
    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self):
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "context": {k: _plain(v) for k, v in self.context.items()},
        }


def _plain(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    try:
        return float(v)
    except (TypeError, ValueError):
        return repr(v)


class DomainError(LLEBifError, ValueError):
    """Curve parameter outside |t| < 1 - guard."""


class ConfigError(LLEBifError, ValueError):
    pass


class GenericityViolation(LLEBifError):
    """A numerical genericity check (simple roots, simple crossings) failed."""


class ResonantMode(LLEBifError):
    pass


class DegeneratePoint(LLEBifError):
    """Zero eigenvalue at the point where an index was requested."""


class UnstableCutoff(LLEBifError):
    pass


class TurningPointBifurcation(LLEBifError):
    pass


class NoStableEps(LLEBifError):
    pass


class OutOfWindow(LLEBifError):
    pass


class MissingPair(LLEBifError):
    pass


class InvalidSubspace(LLEBifError, ValueError):
    """p_div does not properly divide q."""


class NoConvergence(LLEBifError):
    pass


class SingularJacobian(LLEBifError):
    pass


class ReportedFailure(LLEBifError):
    def __init__(self, message, report=None, **context):
        super().__init__(message, **context)
        self.report = report
