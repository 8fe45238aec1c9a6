from typing import Any, List, Optional, Sequence, Tuple


class RevSeqError(Exception):
    """Base class for every error raised by the toolkit"""

    status_code = 400

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "detail": str(self)}


class InvalidCircuitError(RevSeqError):
    """A circuit failed structural validation where a valid one is required"""

    status_code = 422

    def __init__(self, violations: Sequence[Any], context: str = ""):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        prefix = f"{context}: " if context else ""
        super().__init__(f"{prefix}invalid circuit: {lines}{more}")

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["violations"] = [v.model_dump(mode="json") for v in self.violations]
        return data


class InputArityError(RevSeqError):
    def __init__(self, missing: Sequence[str] = (), extra: Sequence[str] = (), what: str = "assignment"):
        self.missing = sorted(missing)
        self.extra = sorted(extra)
        parts = []
        if self.missing:
            parts.append(f"missing {', '.join(self.missing)}")
        if self.extra:
            parts.append(f"unexpected {', '.join(self.extra)}")
        super().__init__(f"{what} does not match the circuit: {'; '.join(parts)}")


class InvalidBitError(RevSeqError):
    def __init__(self, name: str, value: Any):
        self.name = name
        self.value = value
        super().__init__(f"{name} must be 0 or 1, got {value!r}")


class EnumerationTooLargeError(RevSeqError):
    def __init__(self, width: int, cap: int):
        self.width = width
        self.cap = cap
        super().__init__(f"{width} free nets exceed the enumeration cap of {cap}")


class OracleArityError(RevSeqError):
    pass


class UnknownNetError(RevSeqError):
    def __init__(self, name: str, role: str = "net"):
        self.name = name
        super().__init__(f"unknown {role} '{name}'")


class NetlistSyntaxError(RevSeqError):
    status_code = 422

    def __init__(self, line: int, column: int, expected: Sequence[str], found: str):
        self.line = line
        self.column = column
        self.expected = list(expected)
        self.found = found
        super().__init__(
            f"line {line}, column {column}: expected {' or '.join(self.expected)}, found {found!r}"
        )

    def to_dict(self) -> dict:
        data = super().to_dict()
        data.update(line=self.line, column=self.column, expected=self.expected, found=self.found)
        return data


class NetlistSemanticError(RevSeqError):
    status_code = 422

    def __init__(self, issues: Sequence[Tuple[int, str]], circuit_name: Optional[str] = None):
        self.issues = sorted(issues)
        self.circuit_name = circuit_name
        super().__init__("; ".join(f"line {line}: {message}" for line, message in self.issues))

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["issues"] = [{"line": line, "message": message} for line, message in self.issues]
        return data


class StimulusError(RevSeqError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EmptyTraceError(RevSeqError):
    def __init__(self):
        super().__init__("cannot dump an empty trace")


class UnknownCellError(RevSeqError):
    status_code = 404

    def __init__(self, name: str, known: List[str]):
        self.name = name
        super().__init__(f"unknown cell '{name}'; known cells: {', '.join(known)}")


class CellParameterError(RevSeqError):
    pass
