"""Common exception base for the guidance engine."""


class GuidanceError(Exception):
    """Base class for all engine errors."""
