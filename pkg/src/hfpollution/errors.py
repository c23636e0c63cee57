"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and belongs to one of
three families that the CLI maps onto exit statuses: configuration (2),
data (3) and I/O (4).
"""


class HfPollutionError(Exception):
    exit_status = 3
    family = "data"

    @property
    def code(self):
        return f"{self.family}:{type(self).__name__}"


class ConfigError(HfPollutionError, ValueError):
    exit_status = 2
    family = "config"


class DataError(HfPollutionError, ValueError):
    exit_status = 3
    family = "data"


class IoError(HfPollutionError, OSError):
    exit_status = 4
    family = "io"


# ingest
class MalformedLine(DataError):
    def __init__(self, line_no, detail=""):
        self.line_no = line_no
        super().__init__(f"line {line_no}: malformed record{': ' + detail if detail else ''}")


class AdcOutOfRange(DataError):
    def __init__(self, line_no, value):
        self.line_no = line_no
        super().__init__(f"line {line_no}: adc value {value} outside 0..4095")


class DuplicateTimestamp(DataError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"duplicate timestamp {t}")


class LengthMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class OffGrid(DataError):
    pass


# generic shape / size problems
class SeriesTooShort(DataError):
    pass


class EmptySeries(DataError):
    pass


class DegenerateVariance(DataError):
    pass


# resample
class BlockTooLarge(ConfigError):
    pass


class WindowTooLarge(ConfigError):
    pass


class EvenWindow(ConfigError):
    pass


# distribution
class DegenerateRange(DataError):
    pass


class NonPositiveValue(DataError):
    def __init__(self, index, value):
        self.index = index
        super().__init__(f"non-positive value {value!r} at index {index}")


class DegenerateFit(DataError):
    pass


class TooFewBlocks(ConfigError):
    def __init__(self, window_s, blocks):
        self.window_s = window_s
        super().__init__(f"window {window_s} s yields only {blocks} blocks (need >= 30)")


class AllZeroSigma(DataError):
    pass


# correlation / armodel
class LagTooLarge(ConfigError):
    pass


class NumericalBreakdown(DataError):
    pass


class SingularDesign(DataError):
    pass


class HistoryTooShort(DataError):
    pass


# drm
class InsufficientData(DataError):
    pass


# spectral
class BandTooNarrow(DataError):
    pass


class ZeroPowerInBand(DataError):
    pass


# synth
class NonStationaryPhi(ConfigError):
    pass


class SubNyquistPeriod(ConfigError):
    pass


# reporting
class UnknownFormat(ConfigError):
    pass
