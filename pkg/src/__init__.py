"""randfib - Exact and Monte Carlo statistics of random Fibonacci sequences."""

__version__ = "1.0.0"
