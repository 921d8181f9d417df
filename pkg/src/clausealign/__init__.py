"""Clause alignment for ancient/modern Chinese parallel corpora."""
__version__ = "0.1.0"
