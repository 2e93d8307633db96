"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad or inconsistent input,
CLI exit code 2) and ``DegenerateInput`` (well-formed input on which the
requested construction does not exist, CLI exit code 3).
"""


class BMError(Exception):
    pass


class InputError(BMError):
    pass


class DegenerateInput(BMError):
    pass


class InvalidInput(InputError, ValueError):
    pass


class ValidationError(InputError):
    pass


class ParseError(InputError):
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


class OutOfRange(InputError, ValueError):
    pass


class WrongSurface(InputError):
    pass


class NotK3(WrongSurface):
    pass


class ConditionCViolated(InputError):
    pass


class DegenerateWall(DegenerateInput):
    pass


class ZeroRank(DegenerateInput):
    pass


class WrongShape(DegenerateInput):
    pass


class NotUpperHalfPlane(DegenerateInput):
    pass


class NoSolution(DegenerateInput):
    pass


class EmptySearch(DegenerateInput):
    pass
