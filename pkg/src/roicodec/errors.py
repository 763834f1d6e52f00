"""Exception types shared by every layer of the codec."""

from __future__ import annotations


class RoiCodecError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(RoiCodecError):
    """A caller broke an encode-side precondition (bad value range,
    unordered labels, state inconsistent with the frame, ...)."""


class MalformedStreamError(RoiCodecError):
    """Decoded bytes do not form a valid stream or payload.

    ``frame_index`` is attached when the failure can be tied to a
    specific frame record.
    """

    def __init__(self, message: str, frame_index: int | None = None):
        if frame_index is not None:
            message = f"frame {frame_index}: {message}"
        super().__init__(message)
        self.frame_index = frame_index


class ConfigError(RoiCodecError):
    """Invalid or missing configuration (detector parameters, sidecar
    entries, scheme/flag combinations)."""
