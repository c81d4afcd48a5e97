"""Exception types shared across the package."""


class SeqrecError(Exception):
    pass


class DimensionError(SeqrecError, ValueError):
    """Shapes or lengths of numeric arguments do not line up."""


class ConfigError(SeqrecError, ValueError):
    """Invalid configuration value; message names the offending field."""


class IngestError(SeqrecError, ValueError):
    """Malformed input file; message carries the 1-based line number."""


class EmptyHistoryError(SeqrecError, ValueError):
    """A sample's behavior window is fully masked."""


class UndefinedAucError(SeqrecError, ValueError):
    """AUC requested with only one class present."""


class CheckpointError(SeqrecError, ValueError):
    """Checkpoint file is missing, corrupt, or incompatible."""
