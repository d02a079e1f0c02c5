class AppException(Exception):
    """Base class for all app's exceptions"""
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

class GeometryDomainError(AppException):
    """Parameter outside its geometric domain"""
    def __init__(self, detail: str = "Parameter outside geometric domain"):
        super().__init__(detail)

class DegeneratePatternError(AppException):
    """Pattern collapsed to a line, no conic exists"""
    def __init__(self, detail: str = "Degenerate illumination pattern"):
        super().__init__(detail)

class NoIntersectionError(AppException):
    """Pattern does not reach the detection circle"""
    def __init__(self, detail: str = "Pattern does not reach the detection circle", delta: float | None = None):
        super().__init__(detail)
        self.delta = delta

class MonotonicityError(AppException):
    """Intersection angle is not strictly monotone over the scan"""
    def __init__(self, detail: str = "Intersection angle is not monotone"):
        super().__init__(detail)

class CodecRangeError(AppException):
    """Value outside the m-bit range"""
    def __init__(self, detail: str = "Value out of range"):
        super().__init__(detail)

class LengthMismatchError(AppException):
    """Bit or region count does not match the configuration"""
    def __init__(self, detail: str = "Length mismatch"):
        super().__init__(detail)

class EmptyRegionError(AppException):
    """Region narrower than one linewidth"""
    def __init__(self, detail: str = "Region narrower than one linewidth"):
        super().__init__(detail)

class GcodeParseError(AppException):
    """Malformed G-code field"""
    def __init__(self, detail: str = "Malformed G-code", line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {detail}")
        self.reason = detail
        self.line = line
        self.column = column

class AmbiguousRegionError(AppException):
    """No extruding segments found in a region"""
    def __init__(self, detail: str = "No extruding segments in region"):
        super().__init__(detail)

class DimensionMismatchError(AppException):
    """Frame and reference channel counts differ"""
    def __init__(self, detail: str = "Channel count mismatch"):
        super().__init__(detail)

class MapCacheError(AppException):
    """Unreadable nonlinear map cache file"""
    def __init__(self, detail: str = "Invalid map cache file"):
        super().__init__(detail)

class ScenarioFileError(AppException):
    """Malformed scenario file"""
    exit_code = 2

    def __init__(self, detail: str = "Malformed scenario file", line: int = 0):
        super().__init__(f"line {line}: {detail}" if line else detail)
        self.line = line

class TraceFormatError(AppException):
    """Malformed trace or reference CSV"""
    def __init__(self, detail: str = "Malformed trace file"):
        super().__init__(detail)

class EmptyInputError(AppException):
    """Nothing to evaluate"""
    def __init__(self, detail: str = "Empty input"):
        super().__init__(detail)

class ArtifactIOError(AppException):
    """File read or write failure"""
    def __init__(self, detail: str = "File access failed"):
        super().__init__(detail)
