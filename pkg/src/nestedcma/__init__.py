"""Class memory automata over (nested) data words and their decision procedures."""

__version__ = "0.1.0"
