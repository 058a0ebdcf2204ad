"""Micro-averaged multi-label metrics and the evaluation report.

Counts are pooled over all cells of the selected column range; the 0/0
conventions are precision = recall = f1 = 0 when their denominators are 0.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import EmptyInputError, ShapeError
from .labels import LabelSchema, canonical_schema

# Report keys follow the published metric names for this task.
KEY_MAIN_ACCURACY = "Main Decision Accuracy (Argmax)"
KEY_MAIN_F1 = "Main Decision F1 (Argmax)"
KEY_OVERALL_F1 = "F1-micro (Overall)"
KEY_OVERALL_PRECISION = "Precision-micro (Overall)"
KEY_OVERALL_RECALL = "Recall-micro (Overall)"
KEY_REASON_F1 = "F1-micro (Reason Tags Only, Processed)"
KEY_AVG_PREDICTED = "Avg. Predicted Reason Tags"
KEY_AVG_TRUE = "Avg. True Reason Tags"


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D label matrix, got shape {arr.shape}")
    return arr


def _check_rows(truth: np.ndarray, pred: np.ndarray) -> None:
    if truth.shape[0] != pred.shape[0]:
        raise ShapeError(
            f"row counts differ: truth {truth.shape[0]} vs pred {pred.shape[0]}"
        )


def main_accuracy(truth, pred, main_count: int = 4) -> float:
    """Fraction of rows whose argmax over the decision columns agrees."""
    t, p = _as_matrix(truth), _as_matrix(pred)
    _check_rows(t, p)
    if t.shape[0] == 0:
        raise EmptyInputError("no rows to score")
    t_dec = np.argmax(t[:, :main_count], axis=1)
    p_dec = np.argmax(p[:, :main_count], axis=1)
    return float(np.mean(t_dec == p_dec))


def micro_counts(truth, pred, columns: Optional[range] = None) -> tuple[int, int, int]:
    """(TP, FP, FN) pooled over all cells in the column range."""
    t, p = _as_matrix(truth), _as_matrix(pred)
    if t.shape != p.shape:
        raise ShapeError(f"shapes differ: truth {t.shape} vs pred {p.shape}")
    if columns is not None:
        t = t[:, columns.start : columns.stop]
        p = p[:, columns.start : columns.stop]
    t = t != 0
    p = p != 0
    tp = int(np.sum(t & p))
    fp = int(np.sum(~t & p))
    fn = int(np.sum(t & ~p))
    return tp, fp, fn


def prf_from_counts(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def micro_prf(truth, pred, columns: Optional[range] = None) -> tuple[float, float, float]:
    """Micro-averaged (precision, recall, f1) over the column range."""
    return prf_from_counts(*micro_counts(truth, pred, columns))


def avg_tag_count(m, columns: Optional[range] = None) -> float:
    """Mean number of active flags per row within the column range."""
    arr = _as_matrix(m)
    if arr.shape[0] == 0:
        raise EmptyInputError("no rows to average")
    if columns is not None:
        arr = arr[:, columns.start : columns.stop]
    return float(np.mean(np.sum(arr != 0, axis=1)))


def main_decision_f1(truth, pred, main_count: int = 4) -> float:
    """Micro F1 of the argmax decision, pooled over the four classes.

    For a single-label task this pools to TP = #correct and FP = FN =
    #incorrect, so the value coincides with accuracy; it is reported under
    its own name for parity with the published metric table.
    """
    t, p = _as_matrix(truth), _as_matrix(pred)
    _check_rows(t, p)
    t_dec = np.argmax(t[:, :main_count], axis=1)
    p_dec = np.argmax(p[:, :main_count], axis=1)
    tp = int(np.sum(t_dec == p_dec))
    wrong = int(np.sum(t_dec != p_dec))
    _, _, f1 = prf_from_counts(tp, wrong, wrong)
    return f1


def build_report(
    truth,
    processed,
    raw=None,
    threshold: float = 0.5,
    schema: Optional[LabelSchema] = None,
    provenance: Optional[dict] = None,
) -> dict:
    """Assemble the metrics report over truth/prediction label matrices.

    ``processed`` is the post-processed prediction matrix; ``raw``
    (optional) is the plain sigmoid-threshold prediction matrix, reported
    side by side since the published table leaves the choice ambiguous
    for the overall rows.
    """
    schema = schema or canonical_schema()
    reason = schema.reason_range
    op, orc, of1 = micro_prf(truth, processed)
    _, _, rf1 = micro_prf(truth, processed, reason)
    report = {
        KEY_MAIN_ACCURACY: main_accuracy(truth, processed, schema.main_count),
        KEY_MAIN_F1: main_decision_f1(truth, processed, schema.main_count),
        KEY_OVERALL_F1: of1,
        KEY_OVERALL_PRECISION: op,
        KEY_OVERALL_RECALL: orc,
        KEY_REASON_F1: rf1,
        KEY_AVG_PREDICTED: avg_tag_count(processed, reason),
        KEY_AVG_TRUE: avg_tag_count(truth, reason),
    }
    if raw is not None:
        rp, rr, rof1 = micro_prf(truth, raw)
        _, _, rrf1 = micro_prf(truth, raw, reason)
        report.update(
            {
                "F1-micro (Overall, Raw Threshold)": rof1,
                "Precision-micro (Overall, Raw Threshold)": rp,
                "Recall-micro (Overall, Raw Threshold)": rr,
                "F1-micro (Reason Tags Only, Raw Threshold)": rrf1,
            }
        )
    report["provenance"] = dict(provenance or {}, threshold=threshold)
    return report
