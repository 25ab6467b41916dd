# learner/rules.py
# 文字（literal）、默认规则与例外、规则集，以及在样本上的求值
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from dataset.data_model import FeatureKind, Num, num_gt, num_leq, value_equal, value_key


class ExampleTable:
    """按列编码的样本表：数值列为 float 数组（非数值为 NaN），分类列为整数编码"""

    def __init__(self, schema, size, numeric, codes, vocab, rows=None):
        self.schema = schema
        self.size = size
        self.numeric = numeric
        self.codes = codes
        self.vocab = vocab
        self.rows = rows
        self._code_index = {col: {v: k for k, v in enumerate(values)} for col, values in vocab.items()}

    @classmethod
    def from_rows(cls, schema, rows):
        rows = [tuple(r) for r in rows]
        numeric, codes, vocab = {}, {}, {}
        for col, feature in enumerate(schema.features):
            cells = [r[col] for r in rows]
            if feature.kind is FeatureKind.NUMERIC:
                # NaN 参与 <= / > 比较总是 False，与“数值和非数值比较为假”一致
                numeric[col] = np.array([c.value if isinstance(c, Num) else np.nan for c in cells], dtype=float)
            else:
                index = {}
                codes[col] = np.array([index.setdefault(c, len(index)) for c in cells], dtype=np.int64)
                vocab[col] = list(index)
        return cls(schema, len(rows), numeric, codes, vocab, rows)

    def __len__(self):
        return self.size

    def code_of(self, col, value):
        return self._code_index[col].get(value, -1)

    def all(self):
        return ExampleSet(self, np.arange(self.size))


class ExampleSet:
    """样本表中的一个样本子集（行下标数组）"""

    def __init__(self, table, idx):
        self.table = table
        self.idx = np.asarray(idx, dtype=np.int64)

    def __len__(self):
        return len(self.idx)

    def subset(self, mask):
        return ExampleSet(self.table, self.idx[mask])

    def rows(self):
        return [self.table.rows[i] for i in self.idx]


@dataclass(frozen=True)
class NumLeq:
    col: int
    t: float

    def evaluate(self, row):
        return num_leq(row[self.col], self.t)

    def mask(self, table, idx):
        return table.numeric[self.col][idx] <= self.t

    def dual(self):
        return NumGt(self.col, self.t)

    def sort_key(self):
        return (self.col, 0, self.t)


@dataclass(frozen=True)
class NumGt:
    col: int
    t: float

    def evaluate(self, row):
        return num_gt(row[self.col], self.t)

    def mask(self, table, idx):
        return table.numeric[self.col][idx] > self.t

    def dual(self):
        return NumLeq(self.col, self.t)

    def sort_key(self):
        return (self.col, 1, self.t)


@dataclass(frozen=True)
class CatEq:
    col: int
    v: object

    def evaluate(self, row):
        return value_equal(row[self.col], self.v)

    def mask(self, table, idx):
        return table.codes[self.col][idx] == table.code_of(self.col, self.v)

    def dual(self):
        return CatNeq(self.col, self.v)

    def sort_key(self):
        return (self.col, 2, value_key(self.v))


@dataclass(frozen=True)
class CatNeq:
    col: int
    v: object

    def evaluate(self, row):
        # 数值单元格与分类值按种类即不相等
        return not value_equal(row[self.col], self.v)

    def mask(self, table, idx):
        return table.codes[self.col][idx] != table.code_of(self.col, self.v)

    def dual(self):
        return CatEq(self.col, self.v)

    def sort_key(self):
        return (self.col, 3, value_key(self.v))


Literal = Union[NumLeq, NumGt, CatEq, CatNeq]


def eval_literal(literal, row):
    """文字在单行上的真值（数值比较遇到非数值单元格为假）"""
    return literal.evaluate(row)


@dataclass(frozen=True)
class Rule:
    head: str
    defaults: Tuple[Literal, ...]
    exceptions: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RuleSet:
    head: str
    target_rules: Tuple[Rule, ...] = ()
    ab_rules: Tuple[Rule, ...] = ()
    ratio: float = 0.5

    def rules_for(self, name):
        return [r for r in self.ab_rules if r.head == name]

    def all_rules(self):
        return list(self.target_rules) + list(self.ab_rules)

    def __len__(self):
        return len(self.target_rules) + len(self.ab_rules)


@dataclass(frozen=True)
class Counts:
    tp: int
    fn: int
    tn: int
    fp: int


def rule_stats(rs):
    """(#规则, #谓词)：谓词数 = 所有子句的规则头 + 体内文字（含 not abN）"""
    n_preds = sum(1 + len(r.defaults) + len(r.exceptions) for r in rs.all_rules())
    return len(rs), n_preds


def is_stratified(rs):
    """例外引用图无环（不存在经由否定的递归）"""
    edges = {}
    for r in rs.all_rules():
        edges.setdefault(r.head, set()).update(r.exceptions)
    state = {}

    def visit(name):
        if state.get(name) == 1:
            return False
        if state.get(name) == 2:
            return True
        state[name] = 1
        ok = all(visit(child) for child in edges.get(name, ()))
        state[name] = 2
        return ok

    return all(visit(name) for name in list(edges))


def rule_holds(rule, row, rs):
    if not rule.defaults:
        return False
    if not all(eval_literal(lit, row) for lit in rule.defaults):
        return False
    return not any(predicate_holds(name, row, rs) for name in rule.exceptions)


def predicate_holds(name, row, rs):
    return any(rule_holds(r, row, rs) for r in rs.rules_for(name))


def rule_mask(rule, table, idx, rs):
    """规则在 idx 各行上是否成立（默认部分全真且所有例外均不成立）"""
    m = np.zeros(len(idx), dtype=bool)
    if not rule.defaults:
        return m
    m[:] = True
    for lit in rule.defaults:
        m &= lit.mask(table, idx)
    if rule.exceptions and m.any():
        sub = idx[m]
        abnormal = np.zeros(len(sub), dtype=bool)
        for name in rule.exceptions:
            abnormal |= predicate_mask(name, table, sub, rs)
        m[m] = ~abnormal
    return m


def predicate_mask(name, table, idx, rs):
    m = np.zeros(len(idx), dtype=bool)
    for r in rs.rules_for(name):
        m |= rule_mask(r, table, idx, rs)
    return m


def covers(rule, examples, positive, rs):
    """positive=True 返回规则蕴含的样本，否则返回其补集"""
    m = rule_mask(rule, examples.table, examples.idx, rs)
    return examples.subset(m if positive else ~m)


def classify(rule, pos, neg, rs):
    """返回 (Counts, (E_tp, E_fn, E_tn, E_fp))"""
    pm = rule_mask(rule, pos.table, pos.idx, rs)
    nm = rule_mask(rule, neg.table, neg.idx, rs)
    parts = (pos.subset(pm), pos.subset(~pm), neg.subset(~nm), neg.subset(nm))
    counts = Counts(len(parts[0]), len(parts[1]), len(parts[2]), len(parts[3]))
    return counts, parts


def predict(rs, row):
    """被任一目标规则蕴含即为正例"""
    return any(rule_holds(r, row, rs) for r in rs.target_rules)


def predict_table(rs, table):
    idx = np.arange(len(table))
    m = np.zeros(len(idx), dtype=bool)
    for r in rs.target_rules:
        m |= rule_mask(r, table, idx, rs)
    return m
