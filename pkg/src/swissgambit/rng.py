"""Deterministic random stream derivation.

Every source of randomness in a campaign is a private ``random.Random``
instance derived by hashing a master seed together with a structured key
(tournament index, round, board, and so on).  Streams are therefore
independent of worker count and scheduling order: the same key always
yields the same stream, and no stream is shared between consumers.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["derive_seed", "stream"]


def derive_seed(master_seed: int, *key: int | str) -> int:
    """Map (master_seed, key...) to a stable 64-bit seed via SHA-256.

    Key parts are joined by ':' after str() conversion; labels used as key
    parts must not contain ':' themselves.
    """
    text = ":".join([str(master_seed), *(str(part) for part in key)])
    digest = hashlib.sha256(text.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def stream(master_seed: int, *key: int | str) -> random.Random:
    """A fresh, private random stream for the given key."""
    return random.Random(derive_seed(master_seed, *key))
