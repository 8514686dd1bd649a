"""Group testing + compressive sensing pooling toolkit."""

__version__ = "1.0.0"
