"""Deterministic stratified splitters over binary label vectors.

All randomness flows through ``mix64``-derived seeds, so any work item
can be re-executed in isolation with an identical outcome.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadK, DegenerateSplit, TooManyFolds

_MASK = (1 << 64) - 1


def _splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix64(*parts):
    """Avalanche-mix integer parts into one 64-bit work-item seed.

    Chains the splitmix64 finalizer over the parts, so every
    (base seed, strategy, repeat, ...) tuple gets an independent stream.
    """
    h = 0
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK))
    return h


@dataclass(frozen=True)
class Split:
    train: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class PartitionPlan:
    splits: tuple
    kind: str
    seed: int


def _class_members(labels):
    labels = np.asarray(labels)
    return np.flatnonzero(labels == 0), np.flatnonzero(labels == 1)


def _round_half_away(x):
    return int(np.floor(x + 0.5)) if x >= 0 else -int(np.floor(-x + 0.5))


def stratified_holdout(labels, test_fraction, seed):
    """Single stratified split at the given test fraction.

    Total test size is round(f*n) half-away-from-zero; per-class test
    counts follow largest-remainder allocation; membership within each
    class is a seeded shuffle.
    """
    labels = np.asarray(labels)
    n = labels.shape[0]
    members = _class_members(labels)
    counts = [m.shape[0] for m in members]
    if min(counts) < 2:
        raise DegenerateSplit("each class needs at least 2 members")

    n_test = _round_half_away(test_fraction * n)
    if n_test < 1 or n_test > n - 1:
        raise DegenerateSplit(f"test fraction {test_fraction} empties one side")

    quotas = [test_fraction * c for c in counts]
    # largest-remainder: adjust the rounded quotas so totals match n_test
    alloc = [int(np.floor(q)) for q in quotas]
    remainders = sorted(
        range(len(counts)), key=lambda c: (-(quotas[c] - alloc[c]), c)
    )
    short = n_test - sum(alloc)
    for c in remainders[:short]:
        alloc[c] += 1
    for c, (a, total) in enumerate(zip(alloc, counts)):
        if a < 1 or a > total - 1:
            raise DegenerateSplit(
                f"class {c} would have {a} test rows of {total}"
            )

    rng = np.random.Generator(np.random.PCG64(seed))
    test_parts = []
    for m, a in zip(members, alloc):
        perm = rng.permutation(m)
        test_parts.append(perm[:a])
    test = np.sort(np.concatenate(test_parts))
    mask = np.ones(n, dtype=bool)
    mask[test] = False
    train = np.flatnonzero(mask)
    return Split(train=train, test=test)


def _one_kfold_round(labels, k, seed):
    members = _class_members(labels)
    rng = np.random.Generator(np.random.PCG64(seed))
    folds = [[] for _ in range(k)]
    offset = 0
    for m in members:
        perm = rng.permutation(m)
        count = m.shape[0]
        base, extra = divmod(count, k)
        # fold sizes for this class, extras placed round-robin starting
        # at the running offset so total fold sizes stay within 1
        pos = 0
        for j in range(k):
            size = base + (1 if (j - offset) % k < extra else 0)
            folds[j].extend(perm[pos:pos + size])
            pos += size
        offset = (offset + extra) % k
    n = labels.shape[0]
    splits = []
    for j in range(k):
        test = np.sort(np.array(folds[j], dtype=np.int64))
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        splits.append(Split(train=np.flatnonzero(mask), test=test))
    return splits


def stratified_kfold(labels, k, seed):
    """Seeded stratified k-fold plan whose test folds partition the data."""
    if k < 2:
        raise BadK(f"k must be >= 2, got {k}")
    labels = np.asarray(labels)
    min_count = min(m.shape[0] for m in _class_members(labels))
    if min_count < k:
        raise TooManyFolds(f"minority class has {min_count} members, k={k}")
    return PartitionPlan(
        splits=tuple(_one_kfold_round(labels, k, seed)), kind="kfold", seed=seed
    )


def repeated_stratified_kfold(labels, k, repeats, seed):
    """Concatenation of `repeats` independently-seeded k-fold rounds."""
    if repeats < 1:
        raise BadK(f"repeats must be >= 1, got {repeats}")
    splits = []
    for r in range(repeats):
        round_seed = mix64(seed, r)
        splits.extend(stratified_kfold(labels, k, round_seed).splits)
    return PartitionPlan(splits=tuple(splits), kind="repeated_kfold", seed=seed)
