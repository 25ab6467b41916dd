# evaluation/metrics.py
# 成对测试行上的二分类指标，以及排序结果与真实顺序的 Kendall tau
from dataclasses import dataclass

import numpy as np
from scipy.stats import kendalltau

from dataset.data_model import FoldTRError


class EmptyInput(FoldTRError):
    """没有可评估的预测"""
    pass


@dataclass(frozen=True)
class Scores:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_tuple(self):
        return (self.accuracy, self.precision, self.recall, self.f1)


def _ratio(num, den):
    return float(num) / float(den) if den else 0.0


def metrics(predictions, labels):
    """准确率、精确率、召回率与 F1；分母为 0 时对应指标取 0"""
    predictions = np.asarray(predictions, dtype=bool)
    labels = np.asarray(labels, dtype=bool)
    if predictions.shape != labels.shape:
        raise ValueError(f"预测与标签长度不一致: {predictions.shape} vs {labels.shape}")
    if predictions.size == 0:
        raise EmptyInput("没有可评估的预测")
    tp = int(np.sum(predictions & labels))
    fp = int(np.sum(predictions & ~labels))
    fn = int(np.sum(~predictions & labels))
    tn = int(np.sum(~predictions & ~labels))
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return Scores(
        accuracy=_ratio(tp + tn, predictions.size),
        precision=precision,
        recall=recall,
        f1=_ratio(2 * precision * recall, precision + recall),
    )


def kendall_tau(ranked_ids, true_ids):
    """ranked_ids 为排序结果，true_ids 为真实顺序（同一组样本编号）"""
    position = {item_id: k for k, item_id in enumerate(ranked_ids)}
    if len(position) != len(true_ids) or any(i not in position for i in true_ids):
        raise ValueError("排序结果与真实顺序包含的样本不一致")
    if len(true_ids) < 2:
        return 1.0
    tau, _ = kendalltau(np.arange(len(true_ids)), [position[i] for i in true_ids])
    return float(tau)
