"""Structured exceptions raised across quadtope.

Every error carries a short machine-readable ``code`` plus optional details,
so the CLI can emit them as JSON on stderr.
"""


class QuadtopeError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        out = {"error": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out


class PolyError(QuadtopeError):
    code = "poly"


class FormError(QuadtopeError):
    code = "qform"


class ConvergenceError(QuadtopeError):
    code = "convergence"


class DegeneracyError(QuadtopeError):
    code = "degeneracy"


class SizeLimitError(QuadtopeError):
    code = "size_limit"


class LadderError(QuadtopeError):
    code = "ladder"


class RetractionError(QuadtopeError):
    code = "retraction"


class ComplexError(QuadtopeError):
    code = "complex"


class UnsupportedError(QuadtopeError):
    code = "unsupported"


class FormulaError(QuadtopeError):
    code = "formula"


class BoundError(QuadtopeError):
    code = "bound"


class InputError(QuadtopeError):
    code = "input"


def _plain(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)
