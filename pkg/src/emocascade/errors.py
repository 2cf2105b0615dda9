"""Exception hierarchy shared by every analysis stage."""


class AnalysisError(Exception):
    """Base class. ``stage`` is filled in by the feature pipeline when it re-raises."""

    stage = None


class EmptySignal(AnalysisError):
    pass


class SilentSignal(AnalysisError):
    pass


class SignalTooShort(AnalysisError):
    pass


class UnsupportedFormat(AnalysisError):
    pass


class CorruptHeader(AnalysisError):
    pass


class NonPowerOfTwoSize(AnalysisError):
    pass


class LagTooLarge(AnalysisError):
    pass


class SingularAutocorrelation(AnalysisError):
    pass


class RootFindingDivergence(AnalysisError):
    pass


class NegativeFrequency(AnalysisError):
    pass


class TrackLengthMismatch(AnalysisError):
    pass


class SequenceTooShort(AnalysisError):
    pass


class BandCountTooLarge(AnalysisError):
    pass


class AllSilentFrames(AnalysisError):
    pass


class NonFiniteFeature(AnalysisError):
    pass


class InsufficientClassCoverage(AnalysisError):
    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class ConfigParseError(AnalysisError):
    pass


class MalformedName(AnalysisError):
    pass


class UnknownEmotionLetter(AnalysisError):
    pass


class EmptyCorpus(AnalysisError):
    pass
