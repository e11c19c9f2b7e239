"""Transcriber and source-separation adapters for the altkit wire protocol."""

__version__ = "0.1.0"
