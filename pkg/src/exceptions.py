class BasePolymeanException(Exception):
    """Base Exception for all errors"""

    exit_code: int = 1

    def __init__(self, message):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class InvalidPolylineException(BasePolymeanException):
    """
    Exception for when a polyline cannot be built from the given vertices
    """


class InfeasibleException(BasePolymeanException):
    """
    Exception for when no monotone matching exists at the requested error
    """

    def __init__(self, message="infeasible"):
        super().__init__(message)
        self.message = message


class EmptyGraphException(BasePolymeanException):
    """
    Exception for when the source or sink of an event graph is blocked
    """

    def __init__(self, message="empty graph"):
        super().__init__(message)
        self.message = message


class UnreachableException(BasePolymeanException):
    """
    Exception for when the sink of an event graph cannot be reached
    """

    def __init__(self, message="unreachable"):
        super().__init__(message)
        self.message = message


class SimplificationFailedException(BasePolymeanException):
    """
    Exception for when the bi-criteria dynamic program reports FAILED
    """

    exit_code = 2

    def __init__(self, message="FAILED"):
        super().__init__(message)
        self.message = message


class BudgetExceededException(BasePolymeanException):
    """
    Exception for when an oracle is asked for more work than its budget allows
    """

    def __init__(self, message="budget exceeded"):
        super().__init__(message)
        self.message = message


class InstanceTooLargeException(BasePolymeanException):
    """
    Exception for when the exact p-mean search is given too many curves or vertices
    """

    def __init__(self, message="instance too large"):
        super().__init__(message)
        self.message = message


class ParseException(BasePolymeanException):
    """
    Exception for when a track file row cannot be parsed
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.message = message
        self.line_number = line_number


class NotFoundException(BasePolymeanException):
    """
    Exception for when an input file is not found
    """
