"""HTTP service exposing the detector-evaluation toolkit."""

from .app import app, create_app

__all__ = ["app", "create_app"]
