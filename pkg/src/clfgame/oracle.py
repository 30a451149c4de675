"""Stochastic classifier oracle and query generation.

Queries carry no features: once per-type accuracies are measured, a
classifier's behavior on a type-i query collapses to a Bernoulli draw with
the matrix entry as its success probability (or the entry itself, in
expectation mode, for variance-free runs).  All randomness flows through an
explicit, splittable RandomSource so trials can be replayed bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .game import AdversaryTypeId, ClassifierId, GameConfig


class ClassificationMode(str, Enum):
    STOCHASTIC = "stochastic"
    EXPECTATION = "expectation"


class RandomSource:
    """Seeded random stream with deterministic per-trial splitting.

    The same seed and call sequence reproduce identical draws; `split`
    derives independent child streams so parallel trials never share a
    generator.
    """

    def __init__(self, seed: int | np.random.SeedSequence):
        self._sequence = (
            seed if isinstance(seed, np.random.SeedSequence)
            else np.random.SeedSequence(seed)
        )
        self.seed = self._sequence.entropy
        self.generator = np.random.default_rng(self._sequence)

    def split(self, n: int) -> list["RandomSource"]:
        return [RandomSource(child) for child in self._sequence.spawn(n)]

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"


@dataclass(frozen=True)
class Query:
    """One query instance: a hidden ground-truth label and the perturbation
    strength (adversary type) used to produce it."""

    true_label: int
    type_id: AdversaryTypeId
    query_id: int


def generate_queries(theta: AdversaryTypeId, q: int, rng: RandomSource) -> list[Query]:
    """Batch of q type-theta queries with uniformly random binary labels."""
    labels = rng.generator.integers(0, 2, size=q)
    return [Query(int(label), theta, k) for k, label in enumerate(labels)]


def classify(j: ClassifierId, query: Query, cfg: GameConfig,
             mode: ClassificationMode, rng: RandomSource) -> float:
    """Correctness of classifier j on one query.

    Stochastic mode returns 1.0 with probability acc[j][type], else 0.0;
    expectation mode returns the accuracy entry itself.
    """
    cfg.check_classifier(j)
    cfg.check_type(query.type_id)
    p_correct = float(cfg.accuracy.acc[j, query.type_id])
    if mode is ClassificationMode.EXPECTATION:
        return p_correct
    return 1.0 if rng.generator.random() < p_correct else 0.0


def empirical_accuracy(j: ClassifierId, i: AdversaryTypeId, n: int,
                       cfg: GameConfig, rng: RandomSource) -> float:
    """Fraction correct over n stochastic classifications of type-i queries.

    Sanity harness: reconstructs an accuracy-matrix cell from the oracle.
    """
    cfg.check_classifier(j)
    cfg.check_type(i)
    p_correct = float(cfg.accuracy.acc[j, i])
    draws = rng.generator.random(n) < p_correct
    return float(draws.mean())
