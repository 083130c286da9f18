"""HTTP service layer (FastAPI) around the rod laboratory core."""

from .app import app

__all__ = ["app"]
