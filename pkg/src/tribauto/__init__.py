"""Decision procedures for Tribonacci-synchronized sequences."""

__version__ = "0.1.0"
