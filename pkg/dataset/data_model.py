# dataset/data_model.py
# 单元格取值、数据模式与排序数据集，以及混合类型的比较约定
import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union


class FoldTRError(Exception):
    """本项目所有可预期错误的基类"""
    pass


class SchemaMismatch(FoldTRError):
    """数据行与模式不一致"""
    pass


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"数值必须是有限实数: {self.value}")


@dataclass(frozen=True)
class Cat:
    symbol: str


@dataclass(frozen=True)
class Missing:
    pass


MISSING = Missing()

Value = Union[Num, Cat, Missing]


def value_equal(a: Value, b: Value) -> bool:
    """同类且取值完全相同才相等（Missing 与自身相等）"""
    return a == b


def num_leq(a: Value, threshold: float) -> bool:
    # 数值与分类值（或缺失值）之间的比较总是 false
    return isinstance(a, Num) and a.value <= threshold


def num_gt(a: Value, threshold: float) -> bool:
    return isinstance(a, Num) and a.value > threshold


def value_key(v: Value):
    """取值的确定性排序键：Missing < Cat < Num"""
    if isinstance(v, Missing):
        return (0, '', 0.0)
    if isinstance(v, Cat):
        return (1, v.symbol, 0.0)
    return (2, '', v.value)


def format_number(x: float) -> str:
    return repr(float(x))


def format_value(v: Value) -> str:
    if isinstance(v, Num):
        return format_number(v.value)
    if isinstance(v, Cat):
        return v.symbol
    return 'missing'


def value_to_json(v: Value):
    if isinstance(v, Num):
        return {'num': v.value}
    if isinstance(v, Cat):
        return {'cat': v.symbol}
    return {'missing': True}


def value_from_json(d) -> Value:
    if 'num' in d:
        return Num(float(d['num']))
    if 'cat' in d:
        return Cat(str(d['cat']))
    return MISSING


class FeatureKind(Enum):
    NUMERIC = 'numeric'
    CATEGORICAL = 'categorical'


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind


@dataclass(frozen=True)
class Schema:
    features: Tuple[Feature, ...]
    target: Optional[str] = None

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaMismatch(f"特征名重复: {names}")
        if self.target is not None and self.target in names:
            raise SchemaMismatch(f"目标列不能同时作为特征: {self.target}")

    def __len__(self):
        return len(self.features)

    @property
    def names(self):
        return [f.name for f in self.features]

    def index_of(self, name: str) -> int:
        for k, f in enumerate(self.features):
            if f.name == name:
                return k
        raise SchemaMismatch(f"未知特征: {name}")

    def kind(self, col: int) -> FeatureKind:
        return self.features[col].kind

    def twin_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """成对选择的分类列（普通模式下没有）"""
        return ()

    def to_dict(self):
        return {
            'features': [{'name': f.name, 'kind': f.kind.value} for f in self.features],
            'target': self.target,
        }

    @classmethod
    def from_dict(cls, d):
        features = tuple(Feature(f['name'], FeatureKind(f['kind'])) for f in d['features'])
        return cls(features, d.get('target'))

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


@dataclass(frozen=True)
class Item:
    id: object
    values: Tuple[Value, ...]
    target: float = 0.0


def check_item(schema: Schema, item: Item):
    """检查数据行是否按位置符合模式"""
    if len(item.values) != len(schema.features):
        raise SchemaMismatch(
            f"数据行 {item.id!r} 有 {len(item.values)} 个值，模式要求 {len(schema.features)} 个")
    for feature, v in zip(schema.features, item.values):
        if feature.kind is FeatureKind.NUMERIC and isinstance(v, Cat):
            raise SchemaMismatch(f"数据行 {item.id!r} 的数值特征 {feature.name} 取到分类值 {v.symbol!r}")


@dataclass(frozen=True)
class RankedDataset:
    schema: Schema
    items: Tuple[Item, ...]

    @classmethod
    def from_items(cls, schema: Schema, items: Sequence[Item]) -> 'RankedDataset':
        """按目标值降序稳定排序（目标值相同的保持输入顺序）"""
        for item in items:
            check_item(schema, item)
        ordered = sorted(items, key=lambda it: -it.target)
        return cls(schema, tuple(ordered))

    def __len__(self):
        return len(self.items)

    def item_ids(self):
        return [it.id for it in self.items]
