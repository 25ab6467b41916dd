# ranker/plotting.py
# 把有序样本对展开为成对比较数据：数值特征取差值，分类特征取 A/B 两侧取值
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from dataset.data_model import MISSING, Feature, FeatureKind, Num, Schema, Value, check_item
from learner.rules import ExampleTable


@dataclass(frozen=True)
class PairSchema(Schema):
    """成对比较数据的模式

    origins[c] = (原特征下标, 侧别)，数值差列的侧别为 None；
    twins 为相邻的 (A 侧列, B 侧列)。
    """
    source: Optional[Schema] = None
    origins: Tuple[Tuple[int, Optional[str]], ...] = ()
    twins: Tuple[Tuple[int, int], ...] = ()

    def twin_pairs(self):
        return self.twins

    def origin_feature(self, col):
        k, side = self.origins[col]
        return self.source.features[k].name, k, side


@dataclass(frozen=True)
class PairRow:
    a_id: object
    b_id: object
    values: Tuple[Value, ...]
    label: bool


def build_pair_schema(schema):
    """先按原顺序放所有数值差列，再按原顺序放分类特征的 A/B 两列"""
    features, origins, twins = [], [], []
    for k, f in enumerate(schema.features):
        if f.kind is FeatureKind.NUMERIC:
            features.append(Feature(f.name, FeatureKind.NUMERIC))
            origins.append((k, None))
    for k, f in enumerate(schema.features):
        if f.kind is FeatureKind.CATEGORICAL:
            twins.append((len(features), len(features) + 1))
            features.append(Feature(f"{f.name}@A", FeatureKind.CATEGORICAL))
            features.append(Feature(f"{f.name}@B", FeatureKind.CATEGORICAL))
            origins.extend([(k, 'A'), (k, 'B')])
    return PairSchema(tuple(features), schema.target, source=schema,
                      origins=tuple(origins), twins=tuple(twins))


def plot_values(pair_schema, a, b):
    values = []
    for k, side in pair_schema.origins:
        if side is None:
            va, vb = a.values[k], b.values[k]
            if isinstance(va, Num) and isinstance(vb, Num):
                values.append(Num(va.value - vb.value))
            else:
                values.append(MISSING)
        elif side == 'A':
            values.append(a.values[k])
        else:
            values.append(b.values[k])
    return tuple(values)


def plot_pairs(data, pairs):
    """每个有序对 (i, j)（i 排名更高）生成正例 (A=i, B=j) 与对称反例 (A=j, B=i)"""
    pair_schema = build_pair_schema(data.schema)
    rows = []
    for i, j in pairs:
        a, b = data.items[i], data.items[j]
        rows.append(PairRow(a.id, b.id, plot_values(pair_schema, a, b), True))
        rows.append(PairRow(b.id, a.id, plot_values(pair_schema, b, a), False))
    return pair_schema, rows


def pair_rows_table(pair_schema, rows):
    return ExampleTable.from_rows(pair_schema, [r.values for r in rows])


def cross_table(pair_schema, items, a_idx, b_idx):
    """不逐行构造 PairRow，直接向量化生成 items[a_idx[t]] 对 items[b_idx[t]] 的比较表"""
    source = pair_schema.source
    for item in items:
        check_item(source, item)
    a_idx = np.asarray(a_idx, dtype=np.int64)
    b_idx = np.asarray(b_idx, dtype=np.int64)
    numeric, codes, vocab = {}, {}, {}
    for col, (k, side) in enumerate(pair_schema.origins):
        if side is None:
            x = np.array([v.value if isinstance(v, Num) else np.nan
                          for v in (it.values[k] for it in items)], dtype=float)
            with np.errstate(invalid='ignore', over='ignore'):
                numeric[col] = x[a_idx] - x[b_idx]
        else:
            index = {}
            item_codes = np.array([index.setdefault(it.values[k], len(index)) for it in items], dtype=np.int64)
            codes[col] = item_codes[a_idx if side == 'A' else b_idx]
            vocab[col] = list(index)
    return ExampleTable(pair_schema, len(a_idx), numeric, codes, vocab)
