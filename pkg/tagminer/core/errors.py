from pathlib import Path


class TagminerError(Exception):
    exit_code = 2


class UsageError(TagminerError):
    exit_code = 1


class DataError(TagminerError):
    """A problem with input data, optionally located in a file."""

    def __init__(
        self,
        detail: str,
        *,
        path: Path | str | None = None,
        line: int | None = None,
        unit: str = "line",
    ) -> None:
        self.detail = detail
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = str(path)
        if line is not None:
            location = f"{location}:{unit} {line}" if location else f"{unit} {line}"
        super().__init__(f"{location}: {detail}" if location else detail)


class ParseError(DataError):
    pass


class RejectedTagError(ValueError):
    pass


class EmptyCorpusError(DataError):
    pass


class NoAssignedPostsError(DataError):
    pass


class NotClosedError(DataError):
    pass


class ReviewConflictError(TagminerError):
    pass


class ContractViolationError(TagminerError):
    pass


class OracleScaleError(TagminerError):
    pass
