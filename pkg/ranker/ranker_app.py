# ranker/ranker_app.py
# FOLD-TR 排序框架：采样、展开、训练 better/2 比较器，并对新样本列表排序
import logging
from dataclasses import dataclass

import numpy as np

import config
from dataset.data_model import check_item
from learner.foldrpp import FoldRPP
from learner.rules import RuleSet, predict, predict_table
from ranker.plotting import PairSchema, cross_table, pair_rows_table, plot_pairs, plot_values
from ranker.sampling import AllTied, default_sampler_config, sample_pairs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Comparator:
    """学到的比较器：better(A,B) 规则集及其成对模式"""
    rules: RuleSet
    pair_schema: PairSchema

    @property
    def schema(self):
        return self.pair_schema.source


def train(data, cfg=None, ratio=config.DEFAULT_RATIO, max_workers=None, learn_callback=None,
          tail=config.DEFAULT_TAIL):
    """采样 -> 展开 -> 按标签划分 E+/E- -> FOLD-R++"""
    cfg = cfg or default_sampler_config(len(data))
    pairs = sample_pairs(data, cfg)
    if not pairs:
        raise AllTied("没有可用于训练的样本对")
    pair_schema, rows = plot_pairs(data, pairs)
    table = pair_rows_table(pair_schema, rows)
    labels = np.array([r.label for r in rows], dtype=bool)
    everything = table.all()

    learner = FoldRPP(pair_schema, head=config.TARGET_PREDICATE, ratio=ratio, max_workers=max_workers, tail=tail)
    learner.learn_callback = learn_callback
    rules = learner.fit(everything.subset(labels), everything.subset(~labels))
    return Comparator(rules, pair_schema)


def plot_pair(cmp, a, b):
    check_item(cmp.schema, a)
    check_item(cmp.schema, b)
    return plot_values(cmp.pair_schema, a, b)


def compare(cmp, a, b):
    """A 是否优于 B"""
    return predict(cmp.rules, plot_pair(cmp, a, b))


def compare_matrix(cmp, items):
    """wins[x, y] = compare(items[x], items[y])，对角线为 False"""
    n = len(items)
    a_idx, b_idx = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    off = a_idx != b_idx
    table = cross_table(cmp.pair_schema, items, a_idx[off], b_idx[off])
    wins = np.zeros((n, n), dtype=bool)
    wins[off] = predict_table(cmp.rules, table)
    return wins


def copeland_scores(cmp, items):
    """Copeland 得分 = 胜场数 - 负场数"""
    wins = compare_matrix(cmp, items)
    return wins.sum(axis=1).astype(int) - wins.sum(axis=0).astype(int)


def rank_with_scores(cmp, items):
    """按 Copeland 得分降序排列，得分相同保持输入顺序"""
    items = list(items)
    if not items:
        return []
    scores = copeland_scores(cmp, items)
    order = sorted(range(len(items)), key=lambda k: -scores[k])
    return [(items[k], int(scores[k])) for k in order]


def rank_list(cmp, items):
    return [item for item, _ in rank_with_scores(cmp, items)]


class RankerApp:
    """命令行使用的排序应用"""

    def __init__(self, ratio=config.DEFAULT_RATIO, max_workers=None, tail=config.DEFAULT_TAIL):
        self.ratio = ratio
        self.max_workers = max_workers
        self.tail = tail
        self.comparator = None

    def fit(self, data, cfg=None):
        self.comparator = train(data, cfg, self.ratio, self.max_workers, tail=self.tail)
        n_rules = len(self.comparator.rules)
        logger.info(f"比较器训练完成: {n_rules} 条规则")
        return self.comparator

    def load(self, comparator):
        self.comparator = comparator
        return self

    def rank(self, items):
        return rank_with_scores(self.comparator, items)

    def better(self, a, b):
        return compare(self.comparator, a, b)
