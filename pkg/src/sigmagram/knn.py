"""1-NN classification on gram distances, and the training objective built on it.

Training evaluates thousands of weight vectors against the same dataset, so
the per-order mismatch counts are computed once into an integer tensor;
each candidate weighting then costs one weighted sum plus an argmin. Ties
in nearest-neighbor distance go to the lowest training index everywhere.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequences import NGramProfile, common_gram_mass, extract_ngrams


@dataclass(eq=False)
class LabeledDataset:
    """Parallel lists of class labels and instances."""

    labels: list
    items: list

    def __post_init__(self):
        self.labels = list(self.labels)
        self.items = list(self.items)
        if len(self.labels) != len(self.items):
            raise ValueError(
                f"{len(self.labels)} labels for {len(self.items)} items"
            )
        if not self.items:
            raise ValueError("dataset must contain at least one instance")

    @property
    def n_classes(self) -> int:
        return len(set(self.labels))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(zip(self.labels, self.items))


@dataclass(eq=False)
class MismatchTensor:
    """Per-order pairwise mismatch counts for one set of sequences.

    `terms[n - 1, i, j]` is the order-n gram mismatch between sequences i
    and j: an exact integer, symmetric, zero on the diagonal.
    """

    n_max: int
    terms: np.ndarray

    def __post_init__(self):
        self.terms = np.asarray(self.terms, dtype=np.int64)
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.terms.ndim != 3 or self.terms.shape[0] != self.n_max \
                or self.terms.shape[1] != self.terms.shape[2]:
            raise ValueError(
                f"terms must have shape ({self.n_max}, size, size), "
                f"got {self.terms.shape}"
            )

    @property
    def size(self) -> int:
        return self.terms.shape[1]


def build_mismatch_tensor(items, n_max: int) -> MismatchTensor:
    """Tabulate every pairwise mismatch term for orders 1 through n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    items = list(items)
    if not items:
        raise ValueError("at least one sequence is required")
    alphabets = {item.alphabet for item in items if hasattr(item, "alphabet")}
    if len(alphabets) > 1:
        raise ValueError("sequences come from more than one alphabet")
    size = len(items)
    terms = np.zeros((n_max, size, size), dtype=np.int64)
    for n in range(1, n_max + 1):
        profiles = [extract_ngrams(item, n) for item in items]
        for i in range(size):
            for j in range(i + 1, size):
                mismatch = (profiles[i].total + profiles[j].total
                            - 2 * common_gram_mass(profiles[i], profiles[j]))
                terms[n - 1, i, j] = mismatch
                terms[n - 1, j, i] = mismatch
    return MismatchTensor(n_max=n_max, terms=terms)


def loocv_error(tensor: MismatchTensor, labels, lambdas) -> float:
    """Leave-one-out 1-NN error rate under the given per-order weights.

    Accumulates the weighted distance matrix order by order, ascending,
    from a zero start; elementwise this is the exact float sequence the
    direct pairwise distance produces, so both routes agree bitwise.
    """
    weights = [float(w) for w in lambdas]
    if len(weights) != tensor.n_max:
        raise ValueError(
            f"{len(weights)} weights for a tensor of {tensor.n_max} orders"
        )
    labels = np.asarray(list(labels))
    if labels.shape[0] != tensor.size:
        raise ValueError(
            f"{labels.shape[0]} labels for {tensor.size} sequences"
        )
    distances = np.zeros((tensor.size, tensor.size))
    for index, weight in enumerate(weights):
        distances += weight * tensor.terms[index]
    np.fill_diagonal(distances, np.inf)
    nearest = np.argmin(distances, axis=1)
    return float(np.mean(labels[nearest] != labels))


def make_fitness(tensor: MismatchTensor, labels) -> Callable[[np.ndarray], float]:
    """Objective for the weight optimizer: position -> leave-one-out error."""
    frozen = list(labels)

    def fitness(position: np.ndarray) -> float:
        return loocv_error(tensor, frozen, position)

    return fitness


def cached_gram_distance(lambdas) -> Callable:
    """Weighted gram distance that memoizes n-gram profiles per sequence.

    Classifying a test set recomputes nothing: each distinct sequence is
    profiled once for every order and reused across all pairings. Results
    match the uncached distance bit for bit.
    """
    weights = [float(w) for w in lambdas]
    if not weights:
        raise ValueError("at least one weight is required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    profiles: dict[tuple, list[NGramProfile]] = {}

    def profile_orders(seq) -> list[NGramProfile]:
        key = tuple(seq)
        cached = profiles.get(key)
        if cached is None:
            cached = [extract_ngrams(key, n) for n in range(1, len(weights) + 1)]
            profiles[key] = cached
        return cached

    def distance(s, t) -> float:
        left = profile_orders(s)
        right = profile_orders(t)
        total = 0.0
        for weight, p, q in zip(weights, left, right):
            total += weight * (p.total + q.total - 2 * common_gram_mass(p, q))
        return total

    return distance


def classify_test(train: LabeledDataset, test: LabeledDataset,
                  distance: Callable, threads: int = 1) -> float:
    """1-NN test error of `test` against `train` under `distance`.

    With threads > 1 the test instances are scored concurrently; the
    distance must release the GIL (or be cheap) for that to pay off.
    """
    if threads < 1:
        raise ValueError("threads must be at least 1")

    def nearest_label(position_and_item):
        ti, item = position_and_item
        best_index = 0
        best_distance = np.inf
        for j, candidate in enumerate(train.items):
            try:
                d = distance(item, candidate)
            except Exception as exc:
                raise RuntimeError(
                    f"distance failed for test instance {ti} "
                    f"vs train instance {j}"
                ) from exc
            if d < best_distance:
                best_distance = d
                best_index = j
        return train.labels[best_index]

    tasks = list(enumerate(test.items))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            predicted = list(pool.map(nearest_label, tasks))
    else:
        predicted = [nearest_label(task) for task in tasks]
    wrong = sum(p != actual for p, actual in zip(predicted, test.labels))
    return wrong / len(test)
