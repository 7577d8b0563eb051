"""Endotriviality of chain complexes of p-permutation modules, relative to a
fixed module, decided by exact linear algebra over GF(p)."""

from .config import DEFAULT_CONFIG, EngineConfig

__all__ = ["DEFAULT_CONFIG", "EngineConfig"]
__version__ = "0.1.0"
