"""Core domain types for the classifier-selection game.

A learner owns a pool of classifiers hardened at increasing levels and must
answer query batches sent by an adversary whose private "type" is the
perturbation strength of its queries (type 0 = clean data).  Everything the
game needs to know about a classifier/type pair is a single number: the
probability that the classifier answers such a query correctly.  This module
holds the configuration types built around that accuracy matrix and the
per-play utility functions for both sides.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# Classifier and adversary-type identifiers are plain non-negative indices
# into the active GameConfig; validation happens at the config boundary.
ClassifierId = int
AdversaryTypeId = int

#: Tolerance for "this probability vector sums to one".
SIMPLEX_ATOL = 1e-9


class ConfigurationError(ValueError):
    """Raised when a config, strategy or belief has inconsistent dimensions
    or out-of-range entries."""


def _as_readonly_array(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ConfigurationError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


def _validate_simplex(probs: np.ndarray, name: str) -> None:
    if np.any(probs < -SIMPLEX_ATOL) or np.any(probs > 1 + SIMPLEX_ATOL):
        raise ConfigurationError(f"{name} entries must lie in [0, 1], got {probs}")
    total = float(probs.sum())
    if abs(total - 1.0) > SIMPLEX_ATOL:
        raise ConfigurationError(f"{name} entries must sum to 1 (got {total:.12f})")


@dataclass(frozen=True)
class Strategy:
    """Probability distribution over the learner's classifier pool."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _as_readonly_array(self.probs, 1, "Strategy"))
        _validate_simplex(self.probs, "Strategy")

    @classmethod
    def pure(cls, action: ClassifierId, n_classifiers: int) -> "Strategy":
        """Strategy placing all mass on one classifier."""
        probs = np.zeros(n_classifiers)
        probs[action] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, n_classifiers: int) -> "Strategy":
        return cls(np.full(n_classifiers, 1.0 / n_classifiers))

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class TypeDistribution:
    """Probability distribution over adversary types."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _as_readonly_array(self.probs, 1, "TypeDistribution"))
        _validate_simplex(self.probs, "TypeDistribution")

    @classmethod
    def degenerate(cls, type_id: AdversaryTypeId, n_types: int) -> "TypeDistribution":
        probs = np.zeros(n_types)
        probs[type_id] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, n_types: int) -> "TypeDistribution":
        return cls(np.full(n_types, 1.0 / n_types))

    @classmethod
    def concentrated(cls, type_id: AdversaryTypeId, n_types: int,
                     mass: float = 0.98) -> "TypeDistribution":
        """Distribution with `mass` on one type and the remainder split
        uniformly; the last non-focus entry absorbs rounding so the vector
        sums to one exactly (e.g. (0.98, 0.00667, 0.00667, 0.00666))."""
        if n_types == 1:
            return cls(np.ones(1))
        share = round((1.0 - mass) / (n_types - 1), 5)
        probs = np.full(n_types, share)
        probs[type_id] = mass
        others = [i for i in range(n_types) if i != type_id]
        probs[others[-1]] = 1.0 - mass - share * (len(others) - 1)
        return cls(probs)

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class AccuracyMatrix:
    """P(correct prediction | classifier j, adversary type i), indexed [j][i].

    Ground truth for the whole simulation: classifiers have no behavior
    beyond these per-type correctness probabilities.  A higher hardening
    level is normally at least as accurate on every type; violations are
    reported as a warning only, since measured accuracy tables can dip
    (the bundled defaults do, on the clean column).
    """

    acc: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "acc", _as_readonly_array(self.acc, 2, "AccuracyMatrix"))
        if np.any(self.acc < 0) or np.any(self.acc > 1):
            raise ConfigurationError("accuracy out of [0,1]")
        drops = np.diff(self.acc, axis=0) < 0
        if drops.any():
            cells = [f"L{j + 1}<L{j} on type {i}" for j, i in zip(*np.nonzero(drops))]
            warnings.warn(
                "hardening monotonicity violated: " + ", ".join(cells),
                stacklevel=2,
            )

    @property
    def n_classifiers(self) -> int:
        return self.acc.shape[0]

    @property
    def n_types(self) -> int:
        return self.acc.shape[1]


@dataclass(frozen=True)
class PayoffConfig:
    """Values and costs entering the utility functions.

    v_learner[j][i]: learner's value for a correct prediction by classifier j
    on a type-i query.  v_adversary[j][i]: adversary's value for a
    misclassification.  c_classifier[j]: cost of deploying classifier j.
    c_type[i]: adversary's cost of generating a type-i query.
    """

    v_learner: np.ndarray
    v_adversary: np.ndarray
    c_classifier: np.ndarray
    c_type: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v_learner", _as_readonly_array(self.v_learner, 2, "v_learner"))
        object.__setattr__(self, "v_adversary", _as_readonly_array(self.v_adversary, 2, "v_adversary"))
        object.__setattr__(self, "c_classifier", _as_readonly_array(self.c_classifier, 1, "c_classifier"))
        object.__setattr__(self, "c_type", _as_readonly_array(self.c_type, 1, "c_type"))
        if np.any(self.c_classifier < 0) or np.any(self.c_type < 0):
            raise ConfigurationError("costs must be non-negative")

    @classmethod
    def unit(cls, n_classifiers: int, n_types: int) -> "PayoffConfig":
        """All-ones values, zero costs (the documented default)."""
        return cls(
            v_learner=np.ones((n_classifiers, n_types)),
            v_adversary=np.ones((n_classifiers, n_types)),
            c_classifier=np.zeros(n_classifiers),
            c_type=np.zeros(n_types),
        )


@dataclass(frozen=True)
class GameConfig:
    """Dimensions, accuracy matrix and payoffs for one game instance."""

    n_classifiers: int
    n_types: int
    accuracy: AccuracyMatrix
    payoff: PayoffConfig

    def __post_init__(self):
        if self.n_classifiers < 1 or self.n_types < 1:
            raise ConfigurationError("need at least one classifier and one type")
        if self.accuracy.acc.shape != (self.n_classifiers, self.n_types):
            raise ConfigurationError(
                f"accuracy matrix shape {self.accuracy.acc.shape} does not match "
                f"({self.n_classifiers}, {self.n_types})"
            )
        p = self.payoff
        if p.v_learner.shape != (self.n_classifiers, self.n_types):
            raise ConfigurationError("v_learner dimensions do not match game")
        if p.v_adversary.shape != (self.n_classifiers, self.n_types):
            raise ConfigurationError("v_adversary dimensions do not match game")
        if p.c_classifier.shape != (self.n_classifiers,):
            raise ConfigurationError("c_classifier dimensions do not match game")
        if p.c_type.shape != (self.n_types,):
            raise ConfigurationError("c_type dimensions do not match game")

    def check_classifier(self, j: ClassifierId) -> None:
        if not 0 <= j < self.n_classifiers:
            raise ConfigurationError(f"classifier index {j} out of range")

    def check_type(self, i: AdversaryTypeId) -> None:
        if not 0 <= i < self.n_types:
            raise ConfigurationError(f"type index {i} out of range")


class UtilityPair(NamedTuple):
    """Utilities received by the learner and the adversary from one play."""

    u_learner: float
    u_adversary: float

    def __add__(self, other):  # type: ignore[override]
        return UtilityPair(self.u_learner + other.u_learner,
                           self.u_adversary + other.u_adversary)


#: Measured test accuracy of three increasingly hardened classifiers
#: (rows) on clean data and attacks of strength 1-3 (columns).  Bundled
#: default for every experiment that does not configure its own matrix.
DEFAULT_ACCURACY = np.array([
    [0.9392, 0.8684, 0.7706, 0.6814],  # L0: trained on clean data only
    [0.9426, 0.8800, 0.7922, 0.7056],  # L1: hardened at strength 1
    [0.9400, 0.8782, 0.8152, 0.7502],  # L2: hardened at strength 2
])


def default_config(c_classifier=None) -> GameConfig:
    """Bundled 3-classifier / 4-type game with unit values.

    Costs default to zero; pass `c_classifier` to price classifier
    deployment (e.g. increasing in hardening level).
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # default matrix dips on the clean column
        accuracy = AccuracyMatrix(DEFAULT_ACCURACY)
    payoff = PayoffConfig.unit(3, 4)
    if c_classifier is not None:
        payoff = PayoffConfig(
            v_learner=payoff.v_learner,
            v_adversary=payoff.v_adversary,
            c_classifier=np.asarray(c_classifier, dtype=float),
            c_type=payoff.c_type,
        )
    return GameConfig(n_classifiers=3, n_types=4, accuracy=accuracy, payoff=payoff)


def _check_strategy(s: Strategy, cfg: GameConfig) -> None:
    if len(s) != cfg.n_classifiers:
        raise ConfigurationError(
            f"strategy has {len(s)} entries for {cfg.n_classifiers} classifiers"
        )


def _check_distribution(d: TypeDistribution, cfg: GameConfig) -> None:
    if len(d) != cfg.n_types:
        raise ConfigurationError(
            f"type distribution has {len(d)} entries for {cfg.n_types} types"
        )


def learner_utility(s: Strategy, theta: AdversaryTypeId, cfg: GameConfig) -> float:
    """Learner's expected utility against a realized adversary type.

    sum_j s(j) * (acc[j][theta] * v_learner[j][theta] - c_classifier[j]);
    linear in the strategy.
    """
    _check_strategy(s, cfg)
    cfg.check_type(theta)
    gains = cfg.accuracy.acc[:, theta] * cfg.payoff.v_learner[:, theta]
    return float(s.probs @ (gains - cfg.payoff.c_classifier))


def pure_learner_utilities(belief: TypeDistribution, cfg: GameConfig) -> np.ndarray:
    """Expected utility of each pure classifier choice under a type belief."""
    _check_distribution(belief, cfg)
    gains = (cfg.accuracy.acc * cfg.payoff.v_learner) @ belief.probs
    return gains - cfg.payoff.c_classifier


def expected_learner_utility(s: Strategy, belief: TypeDistribution, cfg: GameConfig) -> float:
    """Learner's utility in expectation over adversary types.

    Bilinear in (strategy, belief): the belief-weighted average of
    `learner_utility` across types.
    """
    _check_strategy(s, cfg)
    return float(s.probs @ pure_learner_utilities(belief, cfg))


def adversary_utility(s: Strategy, theta: AdversaryTypeId, cfg: GameConfig) -> float:
    """Adversary's utility for sending type-theta queries against strategy s.

    sum_j s(j) * ((1 - acc[j][theta]) * v_adversary[j][theta] - c_type[theta]).
    """
    _check_strategy(s, cfg)
    cfg.check_type(theta)
    miss = (1.0 - cfg.accuracy.acc[:, theta]) * cfg.payoff.v_adversary[:, theta]
    return float(s.probs @ (miss - cfg.payoff.c_type[theta]))


def adversary_utilities(s: Strategy, cfg: GameConfig) -> np.ndarray:
    """Adversary utility of each type against strategy s, as a vector."""
    _check_strategy(s, cfg)
    miss = (1.0 - cfg.accuracy.acc) * cfg.payoff.v_adversary
    return s.probs @ miss - cfg.payoff.c_type
