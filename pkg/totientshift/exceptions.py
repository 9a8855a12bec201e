class TotientShiftError(Exception):
    pass


class InvalidArgumentError(TotientShiftError, ValueError):
    pass


class IntegerWidthError(InvalidArgumentError):
    '''
    Raised when a value is outside the range where an exact answer is
    guaranteed (deterministic primality, fixed-width vectorized paths).
    '''
    pass


class ResourceLimitError(TotientShiftError, RuntimeError):
    pass


class SearchBudgetExceeded(ResourceLimitError):
    pass


class VerificationError(TotientShiftError, AssertionError):
    '''
    An exact invariant did not hold

    Parameters
    ----------
    failures : list of str
        Description of every check that failed.
    '''

    def __init__(self, failures):
        if isinstance(failures, str):
            failures = [failures]
        self.failures = list(failures)
        super().__init__('; '.join(self.failures))
