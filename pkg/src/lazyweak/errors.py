class InputError(ValueError):
    """Malformed or out-of-contract input (CLI maps this to exit code 2)."""


class UnsupportedFeature(InputError):
    pass


class RejectingDag(ValueError):
    """Raised by the decompositions when some path violates the acceptance condition.

    ``cycle`` is a list of vertex ids forming a cycle of the folded dag whose
    maximal priority is odd.
    """

    def __init__(self, message, cycle):
        super().__init__(message)
        self.cycle = list(cycle)
