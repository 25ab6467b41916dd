# dataset/ingest.py
# 读取 CSV、推断模式、按种子划分训练/测试集
import csv
import logging
import math
import os

import numpy as np
import pandas as pd

from dataset.data_model import (
    MISSING, Cat, Feature, FeatureKind, FoldTRError, Item, Num, RankedDataset, Schema, SchemaMismatch,
)

logger = logging.getLogger(__name__)


class MissingTarget(FoldTRError):
    """目标列不存在"""
    pass


class NonNumericTarget(FoldTRError):
    """目标列含有非数值单元格"""
    pass


class MissingIdColumn(FoldTRError):
    """指定的编号列不存在"""
    pass


class RaggedRow(FoldTRError):
    """某行的列数与表头不一致"""
    pass


class EmptyDataset(FoldTRError):
    """没有任何数据行"""
    pass


class EmptyColumn(FoldTRError):
    """整列为空，无法推断类型"""
    pass


def parse_number(text):
    """解析为有限实数，失败返回 None"""
    try:
        x = float(text)
    except (TypeError, ValueError):
        return None
    return x if math.isfinite(x) else None


def _read_frame(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"文件不存在: {path}")
    try:
        # 表头也按普通行读入：比表头长的行直接报错，不会被 pandas 当作行索引
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, na_filter=False,
                            encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise EmptyDataset(f"文件为空: {path}")
    except pd.errors.ParserError as e:
        raise RaggedRow(f"{path}: 行长度与表头不一致 ({e})")

    header = frame.iloc[0].tolist()
    if len(set(header)) != len(header):
        raise SchemaMismatch(f"{path}: 表头中有重复的列名")
    frame = frame.iloc[1:].reset_index(drop=True)
    frame.columns = header

    # na_filter=False 时只有缺列的短行会出现 NaN
    short_rows = frame.isna().any(axis=1)
    if short_rows.any():
        row = int(np.flatnonzero(short_rows.to_numpy())[0])
        raise RaggedRow(f"{path}: 第 {row + 2} 行的列数少于表头")
    return frame


def _check_id_column(frame, id_column):
    if id_column is not None and id_column not in frame.columns:
        raise MissingIdColumn(f"找不到编号列: {id_column}")


def _cells(frame, column):
    return [str(c).strip() for c in frame[column].tolist()]


def infer_kind(cells, column):
    """非空单元格全部可解析为有限实数则为数值列，否则为分类列"""
    present = [c for c in cells if c != '']
    if not present:
        raise EmptyColumn(f"列 {column} 全部为空")
    if all(parse_number(c) is not None for c in present):
        return FeatureKind.NUMERIC
    return FeatureKind.CATEGORICAL


def to_value(text, kind, column=None):
    if text == '':
        return MISSING
    if kind is FeatureKind.NUMERIC:
        x = parse_number(text)
        if x is None:
            raise SchemaMismatch(f"数值列 {column} 中出现非数值单元格: {text!r}")
        return Num(x)
    return Cat(text)


def _parse_targets(frame, target_column):
    targets = []
    for row, text in enumerate(_cells(frame, target_column)):
        x = parse_number(text)
        if x is None:
            raise NonNumericTarget(f"目标列 {target_column} 第 {row + 2} 行不是数值: {text!r}")
        targets.append(x)
    return targets


def from_frame(frame, target_column, id_column=None):
    """由字符串 DataFrame 构造 RankedDataset"""
    if target_column not in frame.columns:
        raise MissingTarget(f"找不到目标列: {target_column}")
    _check_id_column(frame, id_column)
    if len(frame) == 0:
        raise EmptyDataset("数据集没有任何数据行")

    feature_columns = [c for c in frame.columns if c not in (target_column, id_column)]
    columns = {c: _cells(frame, c) for c in feature_columns}
    schema = Schema(
        tuple(Feature(c, infer_kind(columns[c], c)) for c in feature_columns),
        target_column,
    )
    targets = _parse_targets(frame, target_column)
    ids = _cells(frame, id_column) if id_column else list(range(len(frame)))

    items = []
    for row in range(len(frame)):
        values = tuple(to_value(columns[f.name][row], f.kind, f.name) for f in schema.features)
        items.append(Item(ids[row], values, targets[row]))
    return RankedDataset.from_items(schema, items)


def load_csv(path, target_column, id_column=None):
    """读取 CSV 文件并推断模式，返回按目标值降序的数据集"""
    frame = _read_frame(path)
    data = from_frame(frame, target_column, id_column)
    n_numeric = sum(1 for f in data.schema.features if f.kind is FeatureKind.NUMERIC)
    logger.info(f"已加载 {path}: {len(data)} 行, {len(data.schema)} 个特征 (数值 {n_numeric})")
    return data


def load_items(path, schema, id_column=None):
    """按已有模式读取待排序的数据行（目标列可以不存在）"""
    frame = _read_frame(path)
    if len(frame) == 0:
        raise EmptyDataset(f"文件没有任何数据行: {path}")
    missing = [f.name for f in schema.features if f.name not in frame.columns]
    if missing:
        raise SchemaMismatch(f"{path} 缺少特征列: {missing}")
    _check_id_column(frame, id_column)

    targets = _parse_targets(frame, schema.target) if schema.target in frame.columns else [0.0] * len(frame)
    ids = _cells(frame, id_column) if id_column else list(range(len(frame)))
    columns = {f.name: _cells(frame, f.name) for f in schema.features}
    items = []
    for row in range(len(frame)):
        values = tuple(to_value(columns[f.name][row], f.kind, f.name) for f in schema.features)
        items.append(Item(ids[row], values, targets[row]))
    return items


def parse_row(text, schema, item_id=None):
    """把一行逗号分隔的特征值（按模式顺序，不含目标列）解析为 Item"""
    cells = next(csv.reader([text]))
    cells = [c.strip() for c in cells]
    if len(cells) != len(schema.features):
        raise SchemaMismatch(f"数据行需要 {len(schema.features)} 个值，实际 {len(cells)} 个: {text!r}")
    values = tuple(to_value(c, f.kind, f.name) for c, f in zip(cells, schema.features))
    return Item(item_id if item_id is not None else text, values, 0.0)


def split(data, train_fraction, seed):
    """按种子打乱后划分训练集/测试集，两部分各自重新按目标值排序"""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction 必须在 (0, 1) 之间: {train_fraction}")
    n = len(data)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = int(round(train_fraction * n))
    # data.items 已按目标值降序，按原下标取出即保持降序且并列时保持读入顺序
    train_items = [data.items[k] for k in np.sort(order[:n_train])]
    test_items = [data.items[k] for k in np.sort(order[n_train:])]
    return (RankedDataset(data.schema, tuple(train_items)),
            RankedDataset(data.schema, tuple(test_items)))
