"""Classification evaluation, inter-rater agreement, and the Friedman test.

All statistics are computed from exact integer counts wherever the
definition allows, so results are reproducible to the last bit and degenerate
cases (empty input, absent classes, all-tied blocks) are reported as flags
on total results instead of exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammaincc

from .errors import DegenerateBlocks, EmptyInput
from .model import BEHAVIOUR_ORDER, BehaviourClass

__all__ = [
    "ConfusionMatrix",
    "ClassMetrics",
    "EvalReport",
    "KappaResult",
    "FriedmanResult",
    "evaluate",
    "cohens_kappa",
    "friedman_test",
    "chi_square_sf",
]

_CLASS_INDEX = {c: i for i, c in enumerate(BEHAVIOUR_ORDER)}


@dataclass(frozen=True)
class ConfusionMatrix:
    """K x K counts; rows are the true class, columns the predicted class."""

    classes: tuple[BehaviourClass, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.counts]


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """Everything Experiment-1-style evaluation reports for one pair list."""

    matrix: ConfusionMatrix
    per_class: Mapping[BehaviourClass, ClassMetrics]
    weighted_f1: float
    accuracy: float
    unmatched_pred: int = 0
    unmatched_true: int = 0
    degenerate: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "classes": [c.value for c in self.matrix.classes],
            "matrix": self.matrix.as_lists(),
            "per_class": {
                c.value: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for c, m in self.per_class.items()
            },
            "weighted_f1": self.weighted_f1,
            "weighted_f1_definition": (
                "support-weighted mean of per-class F1 scores; this follows "
                "the stated definition and can differ from other aggregates "
                "(macro-F1, accuracy) on imbalanced data"
            ),
            "accuracy": self.accuracy,
            "unmatched_pred": self.unmatched_pred,
            "unmatched_true": self.unmatched_true,
            "degenerate": list(self.degenerate),
        }


def evaluate(
    pairs: Sequence[tuple[BehaviourClass, BehaviourClass]],
    unmatched_pred: int = 0,
    unmatched_true: int = 0,
) -> EvalReport:
    """Score (predicted, true) pairs.

    precision_c = TP/(TP+FP), recall_c = TP/(TP+FN), f1_c = 2PR/(P+R),
    accuracy = trace/total, weighted F1 = sum(support_c * f1_c)/sum(support_c).
    Every 0/0 is defined as 0 and listed in ``degenerate``; an empty pair
    list yields an all-zero report flagged "empty input", never an exception.
    """
    k = len(BEHAVIOUR_ORDER)
    counts = np.zeros((k, k), dtype=np.int64)
    for predicted, true in pairs:
        counts[_CLASS_INDEX[true], _CLASS_INDEX[predicted]] += 1

    degenerate: list[str] = []
    total = int(counts.sum())
    if total == 0:
        degenerate.append("empty input")

    per_class: dict[BehaviourClass, ClassMetrics] = {}
    weighted_sum = 0.0
    support_sum = 0
    for i, cls in enumerate(BEHAVIOUR_ORDER):
        tp = int(counts[i, i])
        fp = int(counts[:, i].sum()) - tp
        fn = int(counts[i, :].sum()) - tp
        support = tp + fn

        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            degenerate.append(f"precision:{cls.value} undefined (0/0)")
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall = 0.0
            degenerate.append(f"recall:{cls.value} undefined (0/0)")
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
            degenerate.append(f"f1:{cls.value} undefined (0/0)")

        per_class[cls] = ClassMetrics(
            precision=precision, recall=recall, f1=f1, support=support
        )
        weighted_sum += support * f1
        support_sum += support

    if support_sum > 0:
        weighted_f1 = weighted_sum / support_sum
    else:
        weighted_f1 = 0.0
    accuracy = (int(np.trace(counts)) / total) if total > 0 else 0.0

    return EvalReport(
        matrix=ConfusionMatrix(
            classes=BEHAVIOUR_ORDER,
            counts=tuple(tuple(int(v) for v in row) for row in counts),
        ),
        per_class=per_class,
        weighted_f1=weighted_f1,
        accuracy=accuracy,
        unmatched_pred=unmatched_pred,
        unmatched_true=unmatched_true,
        degenerate=tuple(degenerate),
    )


@dataclass(frozen=True)
class KappaResult:
    value: float
    degenerate: bool = False


def cohens_kappa(
    pairs: Sequence[tuple[BehaviourClass, BehaviourClass]]
) -> KappaResult:
    """Cohen's kappa for two annotators' labels of the same items.

    Computed from integer counts as
    ``kappa = (N*sum(diag) - sum(r_i*s_i)) / (N^2 - sum(r_i*s_i))``
    (algebraically (p_o - p_e)/(1 - p_e)), which avoids rounding in p_o/p_e.
    When chance agreement is 1 (both annotators constant), the statistic is
    undefined; by convention it is 1 for perfect agreement, else 0, flagged.
    """
    if not pairs:
        raise EmptyInput("kappa needs at least one pair of labels")
    k = len(BEHAVIOUR_ORDER)
    counts = np.zeros((k, k), dtype=np.int64)
    for a, b in pairs:
        counts[_CLASS_INDEX[a], _CLASS_INDEX[b]] += 1
    n = int(counts.sum())
    diag = int(np.trace(counts))
    marg = int((counts.sum(axis=1) * counts.sum(axis=0)).sum())
    denominator = n * n - marg
    if denominator == 0:  # p_e == 1
        return KappaResult(value=1.0 if diag == n else 0.0, degenerate=True)
    return KappaResult(value=(n * diag - marg) / denominator)


@dataclass(frozen=True)
class FriedmanResult:
    chi_square: float
    df: int
    p_value: float
    degenerate: bool = False


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..K with tied values sharing the mean of their rank range."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0  # ranks are 1-based
        for t in range(i, j + 1):
            ranks[order[t]] = mid
        i = j + 1
    return ranks


def friedman_test(scores: Sequence[Sequence[float]]) -> FriedmanResult:
    """Friedman rank test over B blocks x K treatments.

    Within each block, values are ranked with mid-ranks for ties.  The
    statistic is ``[12/(B*K*(K+1))] * sum_j R_j^2 - 3*B*(K+1)`` divided by
    the tie correction ``1 - sum(t^3 - t)/(B*(K^3 - K))``.  When every block
    is fully tied the correction vanishes: the result is (0, p=1), flagged
    degenerate.  The p-value is the chi-square upper tail with K-1 df.
    """
    b = len(scores)
    if b < 2:
        raise DegenerateBlocks(f"need at least 2 blocks, got {b}")
    k = len(scores[0])
    if k < 2:
        raise DegenerateBlocks(f"need at least 2 treatments, got {k}")
    for row in scores:
        if len(row) != k:
            raise DegenerateBlocks(
                f"ragged score matrix: expected {k} treatments per block, "
                f"got {len(row)}"
            )

    rank_sums = [0.0] * k
    tie_term = 0  # sum over all tie groups of t^3 - t
    for row in scores:
        ranks = _midranks(row)
        for j in range(k):
            rank_sums[j] += ranks[j]
        # tally tie-group sizes in this block
        seen: dict[float, int] = {}
        for v in row:
            seen[v] = seen.get(v, 0) + 1
        for t in seen.values():
            tie_term += t**3 - t

    df = k - 1
    correction = 1.0 - tie_term / (b * (k**3 - k))
    if correction == 0.0:  # all values tied in every block
        return FriedmanResult(chi_square=0.0, df=df, p_value=1.0, degenerate=True)
    raw = (12.0 / (b * k * (k + 1))) * sum(r * r for r in rank_sums) - 3.0 * b * (
        k + 1
    )
    chi2 = raw / correction
    if chi2 < 0.0:
        chi2 = 0.0  # guard against tiny negative rounding on tied data
    return FriedmanResult(chi_square=chi2, df=df, p_value=chi_square_sf(chi2, df))


def chi_square_sf(x: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution.

    ``sf(x, df) = Q(df/2, x/2)``, the regularized upper incomplete gamma
    function.
    """
    if x < 0:
        raise DegenerateBlocks(f"chi-square statistic must be >= 0, got {x}")
    if df < 1:
        raise DegenerateBlocks(f"degrees of freedom must be >= 1, got {df}")
    return float(gammaincc(df / 2.0, x / 2.0))
