"""Exception hierarchy shared by all modules."""


class FaceArtifactsError(Exception):
    """Base class for all toolkit errors."""


class DegenerateGeometry(FaceArtifactsError):
    """Geometry too degenerate to measure (collinear ring, zero area, ...)."""


class InvalidGeometry(FaceArtifactsError):
    """Structurally invalid geometry (self-intersecting ring, bad closure)."""


class NonPositiveInput(FaceArtifactsError):
    """An argument that must be strictly positive was not."""


class DegenerateSample(FaceArtifactsError):
    """Sample too small or without spread for density estimation."""


class ParseError(FaceArtifactsError):
    """Malformed input data.

    ``context`` carries a locator: byte offset for network payloads,
    feature index for GeoJSON.
    """

    def __init__(self, message, context=None):
        super().__init__(message if context is None else f"{message} ({context})")
        self.context = context


class NetworkError(FaceArtifactsError):
    """HTTP failure, timeout, or rate limit that survived retries."""


class GeographicCoordinatesWarning(UserWarning):
    """Input coordinates fit in [-180, 180] x [-90, 90]; they look geographic.

    All measures assume a projected plane in meters.
    """
