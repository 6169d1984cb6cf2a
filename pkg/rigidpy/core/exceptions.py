class RigidityError(Exception):
    """
    Base class for rigidpy exceptions
    """

    pass


class NonInvertibleError(RigidityError, ZeroDivisionError):
    """
    Raised when an element with no multiplicative inverse is inverted.
    """

    pass


class FieldMismatchError(RigidityError, ValueError):
    """
    Raised when objects defined over different moduli are combined.
    """

    pass


class DegenerateModulusError(RigidityError, ValueError):
    """
    Raised when a construction that needs p >= 3 is asked to run over F_2.
    """

    pass


class PreconditionError(RigidityError, ValueError):
    """
    Raised when the hypothesis of a bound or construction is not met by the input.
    """

    pass


class CapExceededError(RigidityError):
    """
    Raised when an object would be materialized beyond its configured size cap.
    """

    def __init__(
        self, size, cap, msgtxt="Object too large; use implicit evaluation instead"
    ):
        self.size = size
        self.cap = cap
        self.msgtxt = msgtxt
        super().__init__(self.msgtxt)

    def __str__(self):
        return f"{self.msgtxt}: {self.size} exceeds the cap of {self.cap}"


class BudgetExceededError(RigidityError):
    """
    Raised when an exhaustive search needs more work than its operation budget allows.
    """

    def __init__(self, work, budget, msgtxt="Search exceeds the work budget"):
        self.work = work
        self.budget = budget
        self.msgtxt = msgtxt
        super().__init__(self.msgtxt)

    def __str__(self):
        return f"{self.msgtxt}: needs {self.work:.3g} operations, budget is {self.budget:.3g}"


class ConfigError(RigidityError):
    """
    Raised for invalid experiment configurations.
    """

    pass


class ExperimentIOError(RigidityError, OSError):
    """
    Raised when an experiment cannot read or write one of its files.
    """

    def __init__(self, errmsg, path):
        self.errmsg = errmsg
        self.path = path
        super().__init__(self.errmsg)

    def __str__(self):
        return f"{self.errmsg}: {self.path}"
