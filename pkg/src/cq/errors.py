"""Error taxonomy for the CQ runtime.

Every error carries a stable negative integer ``code`` so that foreign
bindings can report failures as plain status values.  0 is reserved for
success and never appears here.
"""

from __future__ import annotations

CQ_SUCCESS = 0


class CQError(Exception):
    """Base class for all runtime errors."""

    code = -99


# --- lifecycle -------------------------------------------------------------


class NotInitialisedError(CQError):
    """An operation ran before cq_init (or after cq_finalise)."""

    code = -1


class AlreadyInitialisedError(CQError):
    """cq_init called twice without an intervening cq_finalise."""

    code = -2


class DeviceStartFailureError(CQError):
    """The device context failed to come up."""

    code = -3


class DeviceDownError(CQError):
    """The device context has stopped accepting work."""

    code = -4


class DeviceContextError(CQError):
    """A host-only operation was called from inside a kernel."""

    code = -5


# --- resources -------------------------------------------------------------


class TooManyQubitsError(CQError):
    """Requested register size is outside the configured limits."""

    code = -10


class InvalidHandleError(CQError):
    """A handle is stale, foreign, not a root handle, or still in use."""

    code = -11


# --- kernel registry -------------------------------------------------------


class RegistryFullError(CQError):
    """The kernel registry reached its capacity."""

    code = -20


class UnknownKeyError(CQError):
    """No kernel is registered under the requested key."""

    code = -21


class WrongKernelKindError(CQError):
    """A plain kernel met a parameterised slot, or vice versa."""

    code = -22


# --- execution -------------------------------------------------------------


class BufferTooSmallError(CQError):
    """Result buffer capacity is below nmeasure * nshots."""

    code = -30


class UnknownBackendError(CQError):
    """Backend id does not name a configured device."""

    code = -31


class KernelError(CQError):
    """A kernel failed while executing on the device.

    ``shot`` holds the zero-based index of the first failing shot.
    """

    code = -32

    def __init__(self, message: str, shot: int | None = None):
        super().__init__(message)
        self.shot = shot


class StagingOverflowError(KernelError):
    """A shot issued more synchronised measurements than nmeasure."""

    code = -33


# --- simulator -------------------------------------------------------------


class InvalidCStateError(CQError):
    """Classical value is not a valid measurement outcome (0 or 1)."""

    code = -40


class HostContextError(CQError):
    """A device-only operation was called outside a kernel."""

    code = -41


class StateOutOfRangeError(CQError):
    """Basis-state index does not fit in the addressed register."""

    code = -42


class SizeMismatchError(CQError):
    """Declared qubit count disagrees with the handle or argument."""

    code = -43


class DuplicateQubitError(CQError):
    """The same qubit appears twice in one gate."""

    code = -44


class TargetOutOfRangeError(CQError):
    """Measurement target lies outside the register."""

    code = -45


class DuplicateTargetError(CQError):
    """The same target appears twice in one measurement."""

    code = -46


class TooLargeError(CQError):
    """Dense-matrix construction requested for too many qubits."""

    code = -47


# --- analogue --------------------------------------------------------------


class UnknownModeError(CQError):
    """Analogue mode id is not one of the supported modes."""

    code = -60


class ModeNotEnabledError(CQError):
    """Analogue operation without an enabled mode or register."""

    code = -61


class MissingTargetError(CQError):
    """LOCAL channel requested without a target qubit."""

    code = -62


class ChannelLimitError(CQError):
    """No free channel slots remain on this register."""

    code = -63


class GlobalChannelError(CQError):
    """Retarget attempted on a GLOBAL channel."""

    code = -64


class TargetOutOfRegisterError(CQError):
    """Channel target does not belong to the channel's register."""

    code = -65


class CoincidentQubitsError(CQError):
    """Two qubits were placed at the same position."""

    code = -66


class NonPositiveDurationError(CQError):
    """Pulse duration must be strictly positive."""

    code = -67


class InvalidPulseError(CQError):
    """Pulse was freed, or its sample layout is unusable."""

    code = -68


class BadParamsError(CQError):
    """Waveform parameters are invalid for the requested kind."""

    code = -69


class KnotCountTooSmallError(CQError):
    """Interpolated waveform needs at least two knots."""

    code = -70


class ShotsZeroError(CQError):
    """capture requires at least one shot."""

    code = -71


class NegativeDelayError(CQError):
    """delay requires a non-negative duration."""

    code = -72


class MixedRegistersError(CQError):
    """barrier channels must share one register."""

    code = -73


class EmptyChannelListError(CQError):
    """barrier needs at least one channel."""

    code = -74


# --- configuration ---------------------------------------------------------


class ConfigError(CQError):
    """Malformed configuration file or environment variable."""

    code = -90


class InternalError(CQError):
    """Unclassified internal failure."""

    code = -99


def code_of(exc: BaseException) -> int:
    """Map an exception to its negative status code (for foreign bindings)."""
    if isinstance(exc, CQError):
        return exc.code
    return InternalError.code
