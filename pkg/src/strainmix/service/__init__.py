"""HTTP service exposing the engine.

``uvicorn strainmix.service:app`` serves it; the routes live in
:mod:`strainmix.service.app`.
"""

from strainmix.service.app import app

__all__ = ["app"]
