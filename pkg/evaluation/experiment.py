# evaluation/experiment.py
# 实验流程：多次按种子划分 80/20，训练比较器，在测试集内部的全部样本对上评估
import json
import logging
import time
from dataclasses import asdict, dataclass, replace
from typing import List, Optional

import numpy as np

import config
from dataset.ingest import split
from evaluation.metrics import kendall_tau, metrics
from learner.rules import predict_table, rule_stats
from ranker.plotting import cross_table
from ranker.ranker_app import rank_list, train
from ranker.sampling import default_sampler_config, sample_pairs
from utils.concurrent_utils import TaskManager

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    runs: int = config.DEFAULT_RUNS
    seed: int = config.DEFAULT_SEED
    ratio: float = config.DEFAULT_RATIO
    tail: float = config.DEFAULT_TAIL
    train_fraction: float = config.TRAIN_FRACTION
    sigma: Optional[float] = None
    max_pairs: Optional[int] = None
    window: Optional[int] = None
    max_workers: Optional[int] = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs 至少为 1: {self.runs}")


@dataclass(frozen=True)
class RunResult:
    run: int
    seed: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    n_rules: int
    n_preds: int
    kendall_tau: float
    test_pairs: int
    seconds: float


@dataclass(frozen=True)
class ExperimentReport:
    runs: List[RunResult]

    def mean(self, name):
        return float(np.mean([getattr(r, name) for r in self.runs]))

    def to_dict(self):
        fields = ('accuracy', 'precision', 'recall', 'f1', 'n_rules', 'n_preds', 'kendall_tau', 'seconds')
        return {
            'runs': [asdict(r) for r in self.runs],
            'mean': {name: self.mean(name) for name in fields},
        }


def held_out_pairs_table(cmp, test, cfg):
    """测试集内部的全部样本对（区间取整个测试集，最多 cfg.max_pairs 个），正序为正例、反序为反例"""
    pairs = sample_pairs(test, replace(cfg, window=max(2, len(test))))
    a_idx = np.array([i for i, _ in pairs] + [j for _, j in pairs], dtype=np.int64)
    b_idx = np.array([j for _, j in pairs] + [i for i, _ in pairs], dtype=np.int64)
    labels = np.arange(len(a_idx)) < len(pairs)
    return cross_table(cmp.pair_schema, test.items, a_idx, b_idx), labels


def run_once(data, run, exp, learner_workers=None):
    seed = exp.seed + run
    started = time.perf_counter()
    train_set, test_set = split(data, exp.train_fraction, seed)
    train_cfg = default_sampler_config(len(train_set), seed, exp.sigma, exp.max_pairs, exp.window)
    cmp = train(train_set, train_cfg, exp.ratio, learner_workers, tail=exp.tail)

    test_cfg = default_sampler_config(len(test_set), seed, exp.sigma, exp.max_pairs, exp.window)
    table, labels = held_out_pairs_table(cmp, test_set, test_cfg)
    scores = metrics(predict_table(cmp.rules, table), labels)
    tau = kendall_tau([it.id for it in rank_list(cmp, test_set.items)], test_set.item_ids())
    n_rules, n_preds = rule_stats(cmp.rules)
    seconds = time.perf_counter() - started

    logger.info(f"第 {run + 1} 次运行完成 (seed={seed}): acc={scores.accuracy:.3f}, "
                f"{n_rules} 条规则, {n_preds} 个谓词, {seconds:.2f}s")
    return RunResult(run + 1, seed, *scores.as_tuple(), n_rules, n_preds, tau,
                     len(labels) // 2, seconds)


def run_experiment(data, exp = None):
    """重复 runs 次并汇总；多次运行之间相互独立，可以并行"""
    exp = exp or ExperimentConfig()
    logger.info(f"开始实验: {len(data)} 个样本, {exp.runs} 次运行, seed={exp.seed}")
    with TaskManager(exp.max_workers) as tasks:
        # 并行运行时学习器内部不再开线程池
        learner_workers = 1 if tasks.max_workers > 1 else None
        results = tasks.map_ordered(lambda run: run_once(data, run, exp, learner_workers), range(exp.runs))
    return ExperimentReport(results)


_COLUMNS = [
    ('run', 'run', '{}'),
    ('seed', 'seed', '{}'),
    ('acc', 'accuracy', '{:.3f}'),
    ('prec', 'precision', '{:.3f}'),
    ('rec', 'recall', '{:.3f}'),
    ('f1', 'f1', '{:.3f}'),
    ('#rules', 'n_rules', '{:.1f}'),
    ('#preds', 'n_preds', '{:.1f}'),
    ('tau', 'kendall_tau', '{:.3f}'),
    ('time(s)', 'seconds', '{:.2f}'),
]


def format_report(report):
    """对齐的纯文本表格：每次运行一行，最后一行为平均值"""
    rows = []
    for r in report.runs:
        rows.append([fmt.format(getattr(r, attr)) if attr not in ('n_rules', 'n_preds') else str(getattr(r, attr))
                     for _, attr, fmt in _COLUMNS])
    mean = ['mean', '']
    mean += [fmt.format(report.mean(attr)) for _, attr, fmt in _COLUMNS[2:]]
    rows.append(mean)

    header = [title for title, _, _ in _COLUMNS]
    widths = [max(len(header[k]), *(len(row[k]) for row in rows)) for k in range(len(header))]
    lines = ['  '.join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ['  '.join(c.rjust(w) for c, w in zip(row, widths)) for row in rows]
    return '\n'.join(lines) + '\n'


def report_json(report):
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + '\n'
