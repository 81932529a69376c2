"""Exact computations with quadric surface fibrations over P^1 / F_q."""

__version__ = "0.1.0"
