""" 共用的测试数据：手写的小表、Boston 模式与随机实例生成器 """

import numpy as np
import pytest

from dataset.data_model import MISSING, Cat, Feature, FeatureKind, Item, Num, RankedDataset, Schema
from explain.program_text import parse
from learner.rules import ExampleTable
from ranker.plotting import build_pair_schema
from ranker.ranker_app import Comparator

BOSTON_FEATURES = ['crim', 'zn', 'indus', 'chas', 'nox', 'rm', 'age', 'dis', 'rad', 'tax', 'ptratio', 'b', 'lstat']

# 7 条规则的 Boston 比较器，每行一个子句
BOSTON_PROGRAM = """\
better(A,B) :- rm(A,NA5), rm(B,NB5), NA5-NB5>0.156, not ab5(A,B).
better(A,B) :- rm(A,NA5), rm(B,NB5), NA5-NB5=<0.154, crim(A,NA0), crim(B,NB0), NA0-NB0=<-5.806.
ab1(A,B) :- crim(A,NA0), crim(B,NB0), NA0-NB0=<4.994, indus(A,NA2), indus(B,NB2), NA2-NB2>10.72.
ab2(A,B) :- age(A,NA6), age(B,NB6), NA6-NB6=<2.6, crim(A,NA0), crim(B,NB0), NA0-NB0=<3.992.
ab3(A,B) :- age(A,NA6), age(B,NB6), NA6-NB6>-9.0, rm(A,NA5), rm(B,NB5), NA5-NB5=<0.363, not ab1(A,B), not ab2(A,B).
ab4(A,B) :- b(A,NA11), b(B,NB11), NA11-NB11>-64.79, crim(A,NA0), crim(B,NB0), NA0-NB0=<6.595, not ab3(A,B).
ab5(A,B) :- crim(A,NA0), crim(B,NB0), NA0-NB0>2.415, not ab4(A,B).
"""

HOUSE_A = (0.00632, 18.0, 2.31, 0.0, 0.538, 6.575, 65.2, 4.09, 1.0, 296.0, 15.3, 396.9, 4.98)
HOUSE_B = (13.3598, 0.0, 18.1, 0.0, 0.693, 5.887, 94.7, 1.7821, 24.0, 666.0, 20.2, 396.9, 16.35)


def boolean_schema(*names):
    return Schema(tuple(Feature(n, FeatureKind.CATEGORICAL) for n in names))


def boolean_row(*flags):
    return tuple(Cat('true') if f else Cat('false') for f in flags)


@pytest.fixture
def penguin():
    """tweety、et 会飞，kitty 是猫，polly 是企鹅；列为布尔特征 (bird, penguin, cat)"""
    schema = boolean_schema('bird', 'penguin', 'cat')
    rows = [
        boolean_row(True, False, False),   # tweety
        boolean_row(True, False, False),   # et
        boolean_row(False, False, True),   # kitty
        boolean_row(True, True, False),    # polly
    ]
    labels = [True, True, False, False]
    return schema, rows, labels


@pytest.fixture
def boston_schema():
    return Schema(tuple(Feature(n, FeatureKind.NUMERIC) for n in BOSTON_FEATURES), 'medv')


@pytest.fixture
def boston_comparator(boston_schema):
    pair_schema = build_pair_schema(boston_schema)
    return Comparator(parse(BOSTON_PROGRAM, pair_schema), pair_schema)


def house(item_id, values, **changes):
    values = list(values)
    for name, v in changes.items():
        values[BOSTON_FEATURES.index(name)] = v
    return Item(item_id, tuple(Num(v) for v in values))


@pytest.fixture
def houses():
    return house('A', HOUSE_A), house('B', HOUSE_B)


def ranked(xs, targets=None, cats=None):
    """数值特征 x（可选分类特征 c）的排序数据集"""
    features = [Feature('x', FeatureKind.NUMERIC)]
    if cats is not None:
        features.append(Feature('c', FeatureKind.CATEGORICAL))
    schema = Schema(tuple(features), 'y')
    targets = xs if targets is None else targets
    items = []
    for k, (x, y) in enumerate(zip(xs, targets)):
        values = (Num(float(x)),) if cats is None else (Num(float(x)), Cat(cats[k]))
        items.append(Item(k, values, float(y)))
    return RankedDataset.from_items(schema, items)


@pytest.fixture
def make_ranked():
    return ranked


def random_value(rng, kind):
    if rng.random() < 0.1:
        return MISSING
    if kind is FeatureKind.NUMERIC:
        return Num(float(rng.integers(0, 6)))
    return Cat(str(rng.choice(['u', 'v', 'w'])))


def random_instance(rng, max_rows=40, max_features=4):
    """随机的小规模混合类型分类实例（至少一个正例）"""
    n_rows = int(rng.integers(2, max_rows + 1))
    n_features = int(rng.integers(1, max_features + 1))
    kinds = [FeatureKind.NUMERIC if rng.random() < 0.5 else FeatureKind.CATEGORICAL for _ in range(n_features)]
    schema = Schema(tuple(Feature(f"f{k}", kind) for k, kind in enumerate(kinds)))
    rows = [tuple(random_value(rng, kind) for kind in kinds) for _ in range(n_rows)]
    labels = rng.random(n_rows) < 0.5
    labels[0] = True
    return schema, rows, labels


@pytest.fixture
def make_instance():
    return random_instance


def split_table(schema, rows, labels):
    table = ExampleTable.from_rows(schema, rows)
    labels = np.asarray(labels, dtype=bool)
    everything = table.all()
    return table, everything.subset(labels), everything.subset(~labels)


@pytest.fixture
def make_split():
    return split_table


def random_ranked(rng, n_items, n_numeric=2, n_categorical=1):
    """带缺失值的随机排序数据集（目标值互不相同）"""
    features = [Feature(f"n{k}", FeatureKind.NUMERIC) for k in range(n_numeric)]
    features += [Feature(f"c{k}", FeatureKind.CATEGORICAL) for k in range(n_categorical)]
    schema = Schema(tuple(features), 'score')
    items = []
    for k in range(n_items):
        values = tuple(random_value(rng, f.kind) for f in features)
        items.append(Item(k, values, float(rng.integers(0, 1000)) + k / 1000.0))
    return RankedDataset.from_items(schema, items)


@pytest.fixture
def make_random_ranked():
    return random_ranked
