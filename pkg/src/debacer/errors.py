"""Exception hierarchy shared across the toolkit.

Three families map onto CLI exit codes: ConfigError (2), DataError (3),
TrainingError (4). Everything raised by the library derives from
DebacerError so callers can catch broadly.
"""


class DebacerError(Exception):
    pass


class ConfigError(DebacerError):
    exit_code = 2


class DataError(DebacerError):
    exit_code = 3


class TrainingError(DebacerError):
    exit_code = 4


# corpus ingestion / persistence

class MissingField(DataError):
    def __init__(self, record_no: int, field: str):
        super().__init__(f"record {record_no}: missing field {field!r}")
        self.record_no = record_no
        self.field = field


class DuplicateOrder(DataError):
    def __init__(self, minute_id: str, order: int):
        super().__init__(f"minute {minute_id!r}: duplicate speaking order {order}")
        self.minute_id = minute_id
        self.order = order


class EmptyText(DataError):
    def __init__(self, record_no: int):
        super().__init__(f"record {record_no}: empty text")
        self.record_no = record_no


class InvalidConfig(ConfigError):
    pass


class InvalidPartition(DataError):
    pass


# features

class EmptyCorpus(DataError):
    pass


class RankTooLarge(ConfigError):
    pass


class DimensionMismatch(DataError):
    pass


# evaluation

class LengthMismatch(DataError):
    pass


class NoPositives(DataError):
    pass


class TooFewExamples(DataError):
    pass


class MismatchedFolds(DataError):
    pass


# search

class NoSuccessfulTrials(TrainingError):
    pass


# annotation

class NotEnoughSpeeches(DataError):
    pass


class InsufficientLabels(DataError):
    def __init__(self, label_class: int):
        super().__init__(f"need at least 2 human/reviewed labels of class {label_class}")
        self.label_class = label_class


class NotModeratorSpeech(DataError):
    pass


class DowngradeForbidden(DataError):
    pass
