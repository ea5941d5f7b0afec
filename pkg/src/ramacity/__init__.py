"""ramacity: cylindrical city deformation, scene pipeline, and navigation engine."""

__version__ = "0.1.0"
