"""Agent-by-task score tables (the cardinal input that ballots are derived from)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ScoreTable:
    """Agents x tasks matrix of raw scores; NaN marks a missing entry."""

    agents: tuple[str, ...]
    tasks: tuple[str, ...]
    scores: np.ndarray  # float array, shape (len(agents), len(tasks))

    def __post_init__(self):
        if len(set(self.agents)) != len(self.agents):
            raise DataError("duplicate agent names")
        if len(set(self.tasks)) != len(self.tasks):
            raise DataError("duplicate task names")
        if self.scores.shape != (len(self.agents), len(self.tasks)):
            raise DataError(
                f"score matrix shape {self.scores.shape} does not match "
                f"{len(self.agents)} agents x {len(self.tasks)} tasks"
            )
        if np.any(np.isinf(self.scores)):
            raise DataError("score table contains infinite values")

    def is_complete(self) -> bool:
        return not np.any(np.isnan(self.scores))

    def column(self, task: str) -> np.ndarray:
        return self.scores[:, self.tasks.index(task)]
