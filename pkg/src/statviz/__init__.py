"""statviz: proportion statements in, ranked infographic SVGs out."""

__version__ = "0.1.0"
