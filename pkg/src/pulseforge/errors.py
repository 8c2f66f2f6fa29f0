"""Exception hierarchy."""


class PulseforgeError(Exception):
    """Base class for all library errors."""


class InvalidInputError(PulseforgeError, ValueError):
    pass


class ConfigurationError(PulseforgeError):
    """Device model or counting convention lacks something an operation needs."""


class RoutingError(PulseforgeError):
    """A multi-qubit gate touches qubits that are not coupled."""


class CircuitFormatError(InvalidInputError):
    """A circuit/device/target document failed validation.

    ``code`` is stable and machine readable: ``malformed``, ``qubit_range``,
    ``bad_angle``, ``bad_enum`` or ``kind_mismatch``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code


class LMDivergedError(PulseforgeError):
    """Non-finite residuals during Levenberg-Marquardt; carries the last good point."""

    def __init__(self, message: str, last_good):
        super().__init__(message)
        self.last_good = last_good
