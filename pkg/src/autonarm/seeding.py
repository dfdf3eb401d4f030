"""Deterministic seed derivation for nested stochastic components.

Every random stream in the package is created from an explicit integer
seed.  Child seeds are derived by hashing the parent seed together with a
string tag (and optional indices), so that runs, pipeline evaluations and
preprocessing steps each get an independent, reproducible stream.
"""

import hashlib

__all__ = ["derive_seed"]


def derive_seed(*parts: int | str) -> int:
    """Derive a 64-bit seed from an arbitrary mix of integers and tags.

    The derivation is a SHA-256 hash of the textual form of the parts, so
    it is stable across platforms, processes and Python versions.
    """
    text = "/".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
