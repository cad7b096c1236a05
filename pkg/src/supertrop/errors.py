"""Exception hierarchy.

Structural problems (bad tables, bad documents) and violated
preconditions are raised; a failed mathematical check carries the
offending elements in ``witness`` so callers can print it.
"""


class SupertropError(Exception):
    pass


def _with_witness(message, witness):
    if witness is None:
        return message
    if isinstance(witness, (tuple, list)):
        witness = " ".join(map(str, witness))
    return f"{message} (witness {witness})"


class StructureError(SupertropError):
    """A carrier description that is not even a well-formed table."""


class ParseError(StructureError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class PreconditionError(SupertropError, ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(_with_witness(message, witness))


class CheckFailed(SupertropError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(_with_witness(message, witness))


class NotBipotent(CheckFailed):
    pass


class TheoremViolation(CheckFailed):
    """An identity that must hold for every valid input failed.

    Seeing one means either the input violated an unchecked assumption
    or there is a bug.
    """
