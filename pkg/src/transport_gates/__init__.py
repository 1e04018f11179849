"""Design and verification of trapped-ion transport gates."""

__version__ = "0.1.0"
