"""Class partitions for cross-validation over held-out categories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

PASCAL_CLASSES = (
    "aeroplane", "bicycle", "bird", "boat", "bottle",
    "bus", "car", "cat", "chair", "cow",
    "diningtable", "dog", "horse", "motorbike", "person",
    "pottedplant", "sheep", "sofa", "train", "tvmonitor",
)


@dataclass(frozen=True)
class FoldSplit:
    """One train/test partition of the class set.

    Test classes are a contiguous block of the ordered class list; train
    classes are everything else.
    """

    fold_id: int
    train_classes: frozenset[int]
    test_classes: frozenset[int]

    def __post_init__(self):
        if self.train_classes & self.test_classes:
            raise ValueError("train and test classes overlap")

    def pool(self, mode: str) -> frozenset[int]:
        if mode == "train":
            return self.train_classes
        if mode == "test":
            return self.test_classes
        raise ValueError(f"mode must be 'train' or 'test', got {mode!r}")


def make_folds(classes: Sequence[int], n_folds: int) -> list[FoldSplit]:
    """Split an ordered class list into n_folds equal held-out blocks.

    Fold i's test classes are the i-th contiguous block; its train classes
    are the remaining ones.
    """
    classes = list(classes)
    if n_folds <= 0:
        raise ValueError("n_folds must be positive")
    if len(classes) % n_folds != 0:
        raise ValueError(
            f"{len(classes)} classes cannot be divided into {n_folds} equal folds"
        )
    if len(set(classes)) != len(classes):
        raise ValueError("class list contains duplicates")
    block = len(classes) // n_folds
    folds = []
    for i in range(n_folds):
        test = classes[i * block:(i + 1) * block]
        train = classes[:i * block] + classes[(i + 1) * block:]
        folds.append(FoldSplit(
            fold_id=i,
            train_classes=frozenset(train),
            test_classes=frozenset(test),
        ))
    return folds
