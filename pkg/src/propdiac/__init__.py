"""Tools for diacritized Arabic proper-noun lemmas."""

__version__ = "0.1.0"
