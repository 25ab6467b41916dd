# learner/foldrpp.py
# 定制的 FOLD-R++：基于信息增益的贪心文字选择、默认规则与（嵌套）例外的学习
import logging
import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

import config
from dataset.data_model import Cat, FeatureKind, FoldTRError, Missing, value_key
from learner.rules import (
    CatEq, CatNeq, ExampleTable, NumGt, NumLeq, Rule, RuleSet, classify, covers,
)
from utils.concurrent_utils import TaskManager

logger = logging.getLogger(__name__)

NEG_INF = float('-inf')

# 学习过程中尚未组装成规则集时使用的空上下文
EMPTY_RULESET = RuleSet('')


class ExceptionDepthError(FoldTRError):
    """例外嵌套层数超过上限"""
    pass


@dataclass(frozen=True)
class Candidate:
    gain: float
    literals: Tuple = ()

    @property
    def valid(self):
        return bool(self.literals) and self.gain > NEG_INF


INVALID = Candidate(NEG_INF, ())


def gain_array(tp, fn, tn, fp):
    """FOIL 信息增益（向量化）；tp+fp=0 时为 -inf，tp=0 时为 0"""
    tp = np.asarray(tp, dtype=float)
    fn = np.asarray(fn, dtype=float)
    tn = np.asarray(tn, dtype=float)
    fp = np.asarray(fp, dtype=float)
    covered = tp + fp
    total = tp + fn + tn + fp
    with np.errstate(divide='ignore', invalid='ignore'):
        g = tp * (np.log2(tp / covered) - np.log2((tp + fn) / total))
    g = np.where(tp > 0, g, 0.0)
    return np.where(covered > 0, g, NEG_INF)


def info_gain(c):
    return float(gain_array([c.tp], [c.fn], [c.tn], [c.fp])[0])


def is_used(literal, used):
    """已用文字及其对偶（同列同值的相反比较）不能再次选择"""
    return literal in used or literal.dual() in used


def best_numeric_literal(pos, neg, col, used=frozenset(), min_cover=0):
    """用前缀和一次性评估所有阈值：排序 O(M log M)，评估 O(U)

    覆盖正例少于 min_cover 个的文字不参与选择。
    """
    if len(pos) == 0:
        return INVALID
    column = pos.table.numeric[col]
    pv = column[pos.idx]
    nv = column[neg.idx]
    # 非数值单元格对 <= 和 > 都不成立，不参与计数
    pf = pv[~np.isnan(pv)]
    nf = nv[~np.isnan(nv)]
    if pf.size + nf.size == 0:
        return INVALID

    uniq, inverse = np.unique(np.concatenate([pf, nf]), return_inverse=True)
    inverse = inverse.reshape(-1)
    u = len(uniq)
    tp_le = np.cumsum(np.bincount(inverse[:pf.size], minlength=u))
    fp_le = np.cumsum(np.bincount(inverse[pf.size:], minlength=u))
    n_pos, n_neg = len(pos), len(neg)
    g_le = gain_array(tp_le, n_pos - tp_le, n_neg - fp_le, fp_le)
    tp_gt = pf.size - tp_le
    fp_gt = nf.size - fp_le
    g_gt = gain_array(tp_gt, n_pos - tp_gt, n_neg - fp_gt, fp_gt)
    g_le[tp_le < min_cover] = NEG_INF
    g_gt[tp_gt < min_cover] = NEG_INF

    for t in {lit.t for lit in used if isinstance(lit, (NumLeq, NumGt)) and lit.col == col}:
        k = int(np.searchsorted(uniq, t))
        if k < u and uniq[k] == t:
            if is_used(NumLeq(col, t), used):
                g_le[k] = NEG_INF
            if is_used(NumGt(col, t), used):
                g_gt[k] = NEG_INF

    # argmax 取第一个最大值，即阈值最小者
    k_le = int(np.argmax(g_le))
    k_gt = int(np.argmax(g_gt))
    if g_le[k_le] == NEG_INF and g_gt[k_gt] == NEG_INF:
        return INVALID
    if g_le[k_le] >= g_gt[k_gt]:
        return Candidate(float(g_le[k_le]), (NumLeq(col, float(uniq[k_le])),))
    return Candidate(float(g_gt[k_gt]), (NumGt(col, float(uniq[k_gt])),))


def best_categorical_literal(pos, neg, col, used=frozenset(), min_cover=0):
    """对列中每个分类取值统计正负例个数，评估 = 与 != 两类文字"""
    if len(pos) == 0:
        return INVALID
    table = pos.table
    vocab = table.vocab[col]
    codes = table.codes[col]
    pc = np.bincount(codes[pos.idx], minlength=len(vocab))
    nc = np.bincount(codes[neg.idx], minlength=len(vocab))
    candidates = [k for k in range(len(vocab))
                  if pc[k] + nc[k] > 0 and isinstance(vocab[k], (Cat, Missing))]
    if not candidates:
        return INVALID
    candidates.sort(key=lambda k: value_key(vocab[k]))
    order = np.array(candidates, dtype=np.int64)

    n_pos, n_neg = len(pos), len(neg)
    tp_eq, fp_eq = pc[order], nc[order]
    g_eq = gain_array(tp_eq, n_pos - tp_eq, n_neg - fp_eq, fp_eq)
    tp_ne, fp_ne = n_pos - tp_eq, n_neg - fp_eq
    g_ne = gain_array(tp_ne, n_pos - tp_ne, n_neg - fp_ne, fp_ne)
    g_eq[tp_eq < min_cover] = NEG_INF
    g_ne[tp_ne < min_cover] = NEG_INF

    for v in {lit.v for lit in used if isinstance(lit, (CatEq, CatNeq)) and lit.col == col}:
        hit = np.flatnonzero(order == table.code_of(col, v))
        if is_used(CatEq(col, v), used):
            g_eq[hit] = NEG_INF
        if is_used(CatNeq(col, v), used):
            g_ne[hit] = NEG_INF

    k_eq = int(np.argmax(g_eq))
    k_ne = int(np.argmax(g_ne))
    if g_eq[k_eq] == NEG_INF and g_ne[k_ne] == NEG_INF:
        return INVALID
    if g_eq[k_eq] >= g_ne[k_ne]:
        return Candidate(float(g_eq[k_eq]), (CatEq(col, vocab[order[k_eq]]),))
    return Candidate(float(g_ne[k_ne]), (CatNeq(col, vocab[order[k_ne]]),))


def best_literal_pair(pos, neg, i, j, used=frozenset(), min_cover=0):
    """先在 A 侧列 i 上选最优文字，再在它覆盖的样本上为 B 侧列 j 选文字"""
    if len(pos) == 0 and len(neg) == 0:
        return INVALID
    left = best_categorical_literal(pos, neg, i, used, min_cover)
    if not left.valid:
        return INVALID
    left_lit = left.literals[0]
    tp_set = pos.subset(left_lit.mask(pos.table, pos.idx))
    fp_set = neg.subset(left_lit.mask(neg.table, neg.idx))
    right = best_categorical_literal(tp_set, fp_set, j, used, min_cover)
    # 右侧文字无法进一步改善时退化为单个文字
    if not right.valid or right.gain <= 0:
        return left
    rule = Rule('', (left_lit, right.literals[0]))
    counts, _ = classify(rule, pos, neg, EMPTY_RULESET)
    return Candidate(info_gain(counts), rule.defaults)


def _column_jobs(schema):
    twins = dict(schema.twin_pairs())
    b_side = set(twins.values())
    jobs = []
    for col, feature in enumerate(schema.features):
        if col in b_side:
            continue
        if feature.kind is FeatureKind.NUMERIC:
            jobs.append(('numeric', col, None))
        elif col in twins:
            jobs.append(('pair', col, twins[col]))
        else:
            jobs.append(('categorical', col, None))
    return jobs


def _run_job(job, pos, neg, used, min_cover):
    kind, col, other = job
    if kind == 'numeric':
        return best_numeric_literal(pos, neg, col, used, min_cover)
    if kind == 'pair':
        return best_literal_pair(pos, neg, col, other, used, min_cover)
    return best_categorical_literal(pos, neg, col, used, min_cover)


def find_best_literal(pos, neg, schema=None, used=frozenset(), tasks=None,
                      min_cover=0):
    """在所有列上取增益最大的文字（或文字对）；增益相同时取列号最小者"""
    schema = schema if schema is not None else pos.table.schema
    jobs = _column_jobs(schema)
    if tasks is None:
        results = [_run_job(job, pos, neg, used, min_cover) for job in jobs]
    else:
        results = tasks.map_ordered(lambda job: _run_job(job, pos, neg, used, min_cover), jobs)
    best = INVALID
    for cand in results:
        if cand.gain > best.gain:
            best = cand
    return best


class FoldRPP:
    """FOLD-R++ 规则学习器

    learn_callback(event, payload) 在规则被接受（'rule_accepted'）、
    默认部分因比例条件结束（'ratio_exit'）或因找不到更好的文字结束（'gain_exit'）时被调用。

    tail 为最小覆盖比例：每个被选中的文字至少要覆盖 ceil(tail * |E+|) 个当前正例，
    |E+| 取最外层的正例数。覆盖面太小的规则和例外因此不会被学出来。
    """

    def __init__(self, schema, head=config.TARGET_PREDICATE, ratio=config.DEFAULT_RATIO,
                 max_depth=config.MAX_EXCEPTION_DEPTH, max_workers=None, tail=config.DEFAULT_TAIL):
        if ratio < 0:
            raise ValueError(f"ratio 不能为负数: {ratio}")
        if not 0 <= tail < 1:
            raise ValueError(f"tail 必须在 [0, 1) 内: {tail}")
        self.schema = schema
        self.head = head
        self.ratio = ratio
        self.tail = tail
        self.max_depth = max_depth
        self.max_workers = max_workers
        self.learn_callback = None
        self.ab_rules = []
        self.min_cover = 1
        self._tasks = None

    def fit(self, pos, neg, used=frozenset()):
        """学习目标谓词的规则集"""
        self.ab_rules = []
        self.min_cover = max(1, math.ceil(self.tail * len(pos)))
        logger.info(f"开始学习 {self.head}: 正例 {len(pos)}, 反例 {len(neg)}, "
                    f"ratio={self.ratio}, 最小覆盖 {self.min_cover}")
        with TaskManager(self.max_workers) as tasks:
            self._tasks = tasks
            try:
                rules = self.fold_rpp(pos, neg, frozenset(used), 0)
            finally:
                self._tasks = None
        rs = RuleSet(self.head, tuple(replace(r, head=self.head) for r in rules), tuple(self.ab_rules), self.ratio)
        logger.info(f"学习完成: {len(rs.target_rules)} 条目标规则, {len(rs.ab_rules)} 条例外规则")
        return rs

    def context(self):
        return RuleSet(self.head, (), tuple(self.ab_rules), self.ratio)

    def fold_rpp(self, pos, neg, used, depth=0):
        rules = []
        while len(pos) > 0:
            mark = len(self.ab_rules)
            rule = self.learn_rule(pos, neg, used, depth)
            uncovered = covers(rule, pos, False, self.context())
            if len(uncovered) == len(pos):
                # 该规则没有覆盖任何正例，撤销为它学到的例外
                del self.ab_rules[mark:]
                break
            self._notify('rule_accepted', rule=rule, covered=len(pos) - len(uncovered),
                         remaining=len(pos), depth=depth)
            pos = uncovered
            rules.append(rule)
        return rules

    def learn_rule(self, pos, neg, used, depth=0):
        literals = []
        while True:
            cand = find_best_literal(pos, neg, self.schema, used | frozenset(literals), self._tasks, self.min_cover)
            # 增益必须为正；只有没有反例时才接受零增益的文字
            if not cand.valid or not (cand.gain > 0 or len(neg) == 0):
                if literals:
                    self._notify('gain_exit', pos=len(pos), neg=len(neg), depth=depth)
                break
            logger.debug(f"深度 {depth}: 选择 {cand.literals}, 增益 {cand.gain:.4f}")
            literals.extend(cand.literals)
            step = Rule('', cand.literals)
            pos = covers(step, pos, True, EMPTY_RULESET)
            neg = covers(step, neg, True, EMPTY_RULESET)
            if len(neg) <= len(pos) * self.ratio:
                self._notify('ratio_exit', pos=len(pos), neg=len(neg), ratio=self.ratio, depth=depth)
                break

        exceptions = ()
        # 两种结束方式都交换剩余的正反例递归学习例外；剩余反例不足 min_cover 个时学不出例外
        if literals and len(neg) >= self.min_cover:
            exceptions = self._learn_exceptions(neg, pos, used | frozenset(literals), depth + 1)
        return Rule('', tuple(literals), exceptions)

    def _learn_exceptions(self, pos, neg, used, depth):
        if depth > self.max_depth:
            raise ExceptionDepthError(f"例外嵌套超过 {self.max_depth} 层")
        rules = self.fold_rpp(pos, neg, used, depth)
        names = []
        for rule in rules:
            name = f"{config.AB_PREFIX}{len(self.ab_rules)}"
            self.ab_rules.append(replace(rule, head=name))
            names.append(name)
        return tuple(names)

    def _notify(self, event, **payload):
        if self.learn_callback:
            self.learn_callback(event, payload)


def fold_rpp(pos, neg, used=frozenset(), ratio=config.DEFAULT_RATIO,
             head=config.TARGET_PREDICATE, **kwargs):
    return FoldRPP(pos.table.schema, head=head, ratio=ratio, **kwargs).fit(pos, neg, used)


def fit_classifier(schema, rows, labels, head, ratio=config.DEFAULT_RATIO, **kwargs):
    """普通二分类模式：labels 为 True 的行是正例"""
    table = ExampleTable.from_rows(schema, rows)
    labels = np.asarray(labels, dtype=bool)
    everything = table.all()
    return fold_rpp(everything.subset(labels), everything.subset(~labels), ratio=ratio, head=head, **kwargs)
