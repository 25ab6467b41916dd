# ranker/model_io.py
# 规则集与比较器的 JSON 序列化（文字用列名表示，阈值保留完整精度）
import json
import logging
import os

import config
from dataset.data_model import FoldTRError, Schema, value_from_json, value_to_json
from learner.rules import CatEq, CatNeq, NumGt, NumLeq, Rule, RuleSet, is_stratified
from ranker.plotting import build_pair_schema
from ranker.ranker_app import Comparator

logger = logging.getLogger(__name__)

MODEL_FORMAT = 'fold-tr-model'

_OPS = {NumLeq: 'le', NumGt: 'gt', CatEq: 'eq', CatNeq: 'ne'}
_LITERALS = {op: cls for cls, op in _OPS.items()}


class ModelFormatError(FoldTRError):
    """模型文件格式错误或与模式不匹配"""
    pass


def literal_to_dict(lit, schema):
    d = {'op': _OPS[type(lit)], 'column': schema.features[lit.col].name}
    d['value'] = lit.t if isinstance(lit, (NumLeq, NumGt)) else value_to_json(lit.v)
    return d


def literal_from_dict(d, schema):
    try:
        cls = _LITERALS[d['op']]
        col = schema.index_of(d['column'])
    except KeyError as e:
        raise ModelFormatError(f"无法识别的文字: {d} ({e})")
    except FoldTRError as e:
        raise ModelFormatError(str(e))
    if cls in (NumLeq, NumGt):
        return cls(col, float(d['value']))
    return cls(col, value_from_json(d['value']))


def ruleset_to_dict(rs, schema):
    def rule_dict(r):
        return {
            'head': r.head,
            'defaults': [literal_to_dict(lit, schema) for lit in r.defaults],
            'exceptions': list(r.exceptions),
        }

    return {
        'head': rs.head,
        'ratio': rs.ratio,
        'target_rules': [rule_dict(r) for r in rs.target_rules],
        'ab_rules': [rule_dict(r) for r in rs.ab_rules],
    }


def ruleset_from_dict(d, schema):
    def rule(r):
        return Rule(r['head'], tuple(literal_from_dict(lit, schema) for lit in r['defaults']),
                    tuple(r.get('exceptions', ())))

    try:
        rs = RuleSet(d['head'], tuple(rule(r) for r in d['target_rules']),
                     tuple(rule(r) for r in d['ab_rules']), float(d.get('ratio', config.DEFAULT_RATIO)))
    except KeyError as e:
        raise ModelFormatError(f"规则集缺少字段: {e}")
    if not is_stratified(rs):
        raise ModelFormatError("规则集的例外引用存在环")
    return rs


def comparator_to_dict(cmp):
    source = cmp.pair_schema.source
    return {
        'format': MODEL_FORMAT,
        'version': config.MODEL_FORMAT_VERSION,
        'fingerprint': source.fingerprint(),
        'schema': source.to_dict(),
        'rules': ruleset_to_dict(cmp.rules, cmp.pair_schema),
    }


def comparator_from_dict(d):
    if d.get('format') != MODEL_FORMAT:
        raise ModelFormatError(f"不是 FOLD-TR 模型文件: format={d.get('format')!r}")
    if d.get('version') != config.MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"不支持的模型版本: {d.get('version')!r}")
    source = Schema.from_dict(d['schema'])
    if source.fingerprint() != d.get('fingerprint'):
        raise ModelFormatError("模型文件中的模式指纹不匹配")
    pair_schema = build_pair_schema(source)
    return Comparator(ruleset_from_dict(d['rules'], pair_schema), pair_schema)


def dumps_model(cmp):
    return json.dumps(comparator_to_dict(cmp), indent=2, ensure_ascii=False)


def save_model(path, cmp):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps_model(cmp))
    logger.info(f"模型已保存: {path}")


def load_model(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"文件不存在: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"模型文件不是有效的 JSON: {path} ({e})")
    return comparator_from_dict(d)
