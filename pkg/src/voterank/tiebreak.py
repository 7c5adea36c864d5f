"""Seeded tie-breaking shared by every ranking method.

Ties are resolved by adding a tiny random perturbation to the values being
compared. The perturbation for an alternative depends only on the seed and
the alternative's label, so every method in one invocation (and every profile
over the same labels) observes the same perturbation. The magnitude is far
below the score granularity of all rules, so a strict score difference is
never flipped.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

DEFAULT_MAGNITUDE = 1e-9


def _unit_hash(*parts: object) -> float:
    """Deterministic value in [0, 1) from a stable hash of the parts."""
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2**64


@dataclass(frozen=True)
class TieBreakPolicy:
    """Deterministic perturbation source keyed by (seed, label)."""

    seed: int = 0
    magnitude: float = DEFAULT_MAGNITUDE

    def offset(self, alternative: str) -> float:
        """Perturbation for one alternative, in [0, magnitude)."""
        return self.magnitude * _unit_hash(self.seed, alternative)

    def pair_offset(self, a: str, b: str) -> float:
        """Perturbation for an ordered pair (used when sorting pairwise margins)."""
        return self.magnitude * _unit_hash(self.seed, a, b)

    def pick(self, n: int, salt: object) -> int:
        """Deterministic index in [0, n) from the seed and a caller salt."""
        return int(_unit_hash(self.seed, salt) * n)

    def shuffled(self, items: list, salt: object) -> list:
        """Deterministically permute items using the seed and a caller salt."""
        return sorted(items, key=lambda x: _unit_hash(self.seed, salt, x))
