"""Region-industry economic complexity analytics from firm registry records."""

__version__ = "0.1.0"
