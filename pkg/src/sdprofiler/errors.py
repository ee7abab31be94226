"""Exception types raised across the profiling pipeline."""

from __future__ import annotations


class ProfilerError(Exception):
    """Base class for every error this package raises on purpose."""


class ParseError(ProfilerError):
    """Malformed input file; carries the path and, where known, the line."""

    def __init__(self, message: str, *, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(f"{where}{message}")


class ValidationError(ProfilerError):
    """One or more lexicon invariant violations; `.violations` lists them all."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DuplicatePost(ProfilerError):
    def __init__(self, member_id: str, post_id: str):
        self.member_id = member_id
        self.post_id = post_id
        super().__init__(f"duplicate post ({member_id!r}, {post_id!r})")


class UnknownValueCode(ProfilerError):
    def __init__(self, kind, code: str):
        self.kind = kind
        self.code = code
        super().__init__(f"unknown {kind} value code {code!r}")


class UnknownKind(ProfilerError):
    pass


class ConflictingLabel(ProfilerError):
    def __init__(self, member_id: str, kind, codes):
        self.member_id = member_id
        self.kind = kind
        self.codes = tuple(codes)
        super().__init__(
            f"member {member_id!r} carries conflicting {kind} labels: "
            + ", ".join(repr(c) for c in self.codes)
        )


class DanglingMarker(ProfilerError):
    def __init__(self, io_id: str, marker_id: str):
        self.io_id = io_id
        self.marker_id = marker_id
        super().__init__(
            f"indicative characteristic {io_id!r} references unknown marker {marker_id!r}"
        )


class TooFewClasses(ProfilerError):
    pass


class InvalidAssignment(ProfilerError):
    def __init__(self, pattern: str, indicator_code: str, reason: str):
        self.pattern = pattern
        self.indicator_code = indicator_code
        super().__init__(
            f"pattern {pattern!r} assigned to {indicator_code!r}: {reason}"
        )


class TrainTestOverlap(ProfilerError):
    def __init__(self, member_ids):
        self.member_ids = sorted(member_ids)
        super().__init__(
            "holdout shares member ids with the training sample: "
            + ", ".join(self.member_ids)
        )
