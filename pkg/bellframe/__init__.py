"""Bell-inequality violation statistics under partially shared reference frames."""

__version__ = "0.1.0"
