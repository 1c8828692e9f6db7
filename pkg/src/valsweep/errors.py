"""Exception hierarchy shared across the package."""


class ValsweepError(Exception):
    """Base class for all library errors."""


# --- dataset loading ---

class FileUnreadable(ValsweepError):
    pass


class MissingTargetColumn(ValsweepError):
    pass


class NonBinaryTarget(ValsweepError):
    pass


class SingleClassTarget(ValsweepError):
    pass


# --- partitioning ---

class DegenerateSplit(ValsweepError):
    pass


class TooManyFolds(ValsweepError):
    pass


class BadK(ValsweepError):
    pass


# --- metrics ---

class LengthMismatch(ValsweepError):
    pass


class EmptyInput(ValsweepError):
    pass


class OutOfRangeProbability(ValsweepError):
    pass


# --- preprocessing ---

class EmptyTrainingSet(ValsweepError):
    pass


class SingleClassTraining(ValsweepError):
    pass


class SchemaMismatch(ValsweepError):
    pass


# --- classifiers ---

class NonFiniteFeature(ValsweepError):
    pass


class WidthMismatch(ValsweepError):
    pass


# --- evaluation / reporting ---

class AllCandidatesFailed(ValsweepError):
    pass


class UnknownFormat(ValsweepError):
    pass


class MissingArtifacts(ValsweepError):
    pass


class ConfigError(ValsweepError):
    pass
