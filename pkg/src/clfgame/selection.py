"""Action-selection heuristics: best response under a belief, and UCB.

Both sides pick actions with one of two rules.  `bne_select` maximizes
expected utility given the learner's current belief over adversary types
(the maximizer over mixed strategies is attained at a pure one because the
objective is linear).  The `ucb_select_*` pair scores actions by accumulated
utility plus an exploration bonus over visit counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .game import (
    AdversaryTypeId,
    ClassifierId,
    ConfigurationError,
    GameConfig,
    Strategy,
    TypeDistribution,
    adversary_utilities,
    pure_learner_utilities,
)


class SelectionMethod(str, Enum):
    """Which rule picks actions during play and tree descent."""

    BNE = "bne"
    UCB = "ucb"


@dataclass
class NodeStats:
    """Visit counts and accumulated utility sums for one mover's actions.

    `value_sums[a]` accumulates the mean-per-query utility of every play
    through action `a`, so the exploration constant works on the same scale
    regardless of batch size.
    """

    parent_visits: int
    action_visits: np.ndarray
    action_value_sums: np.ndarray

    def __post_init__(self):
        self.action_visits = np.asarray(self.action_visits, dtype=np.int64)
        self.action_value_sums = np.asarray(self.action_value_sums, dtype=float)
        if self.action_visits.shape != self.action_value_sums.shape:
            raise ConfigurationError("visit and value vectors must have equal length")
        if self.parent_visits < 0 or np.any(self.action_visits < 0):
            raise ConfigurationError("visit counts must be non-negative")
        if len(self.action_visits) and self.parent_visits < int(self.action_visits.max()):
            raise ConfigurationError("parent visits below an action's visit count")

    @classmethod
    def fresh(cls, n_actions: int) -> "NodeStats":
        return cls(0, np.zeros(n_actions, dtype=np.int64), np.zeros(n_actions))

    def record(self, action: int, value: float) -> None:
        """Fold one play's utility into the running sums."""
        self.parent_visits += 1
        self.action_visits[action] += 1
        self.action_value_sums[action] += value


def bne_select(belief: TypeDistribution, cfg: GameConfig) -> tuple[Strategy, AdversaryTypeId]:
    """Mutual best responses under the learner's belief.

    Returns the learner's utility-maximizing strategy (pure, by linearity;
    ties broken toward the lowest classifier index) and the adversary type
    that best responds to it (ties toward the lowest type index).
    """
    utilities = pure_learner_utilities(belief, cfg)
    best_action = int(np.argmax(utilities))
    strategy = Strategy.pure(best_action, cfg.n_classifiers)
    best_type = int(np.argmax(adversary_utilities(strategy, cfg)))
    return strategy, best_type


def _ucb_argmax(stats: NodeStats, c: float) -> int:
    unvisited = np.nonzero(stats.action_visits == 0)[0]
    if len(unvisited):
        # Never prefer a visited action while an unexplored one exists.
        return int(unvisited[0])
    if stats.parent_visits == 0:
        raise RuntimeError("all actions visited but parent visit count is zero")
    bonus = c * np.sqrt(2.0 * math.log(stats.parent_visits) / stats.action_visits)
    return int(np.argmax(stats.action_value_sums + bonus))


def ucb_select_learner(stats: NodeStats, c: float) -> ClassifierId:
    """UCB pick over classifier actions: argmax of value sum plus
    c * sqrt(2 ln(parent visits) / action visits), unvisited first."""
    return _ucb_argmax(stats, c)


def ucb_select_adversary(stats: NodeStats, c: float) -> AdversaryTypeId:
    """UCB pick over adversary types; same scoring as the learner side."""
    return _ucb_argmax(stats, c)
