"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class PcgError(Exception):
    code = "error"


class PresentationError(PcgError, ValueError):
    """Malformed `.pcp` source or an invalid Presentation."""

    code = "parse"

    def __init__(self, message, line=None, column=None, kind="syntax"):
        self.line = line
        self.column = column
        self.kind = kind
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InconsistentPresentationError(PcgError):
    code = "inconsistent"

    def __init__(self, failures):
        self.failures = list(failures)
        shown = "; ".join(f.describe() for f in self.failures[:3])
        more = f" (+{len(self.failures) - 3} more)" if len(self.failures) > 3 else ""
        super().__init__(f"presentation is inconsistent: {shown}{more}")


class CapacityError(PcgError):
    code = "capacity"


class MixedGroupError(PcgError, ValueError):
    code = "mixed-group"


class ParameterError(PcgError, ValueError):
    code = "parameter"
