# explain/justify.py
# 为比较器的每个预测生成两种解释：自然语言证明树，以及带 [T]/[F] 标注的规则
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from dataset.data_model import Cat, Value, format_value
from explain.program_text import (
    format_threshold, quote_string, render_exception, render_head, render_literal,
)
from learner.rules import CatEq, NumLeq, NumGt, Rule, eval_literal, predicate_holds, rule_holds
from ranker.ranker_app import plot_pair

HOLDS = 'DOES HOLD'
NOT_HOLDS = 'DOES NOT HOLD'


class NodeKind(Enum):
    RULE_HEAD = 'RuleHead'
    DEFAULT_LITERAL = 'DefaultLiteral'
    EXCEPTION_REF = 'ExceptionRef'


@dataclass
class ProofNode:
    kind: NodeKind
    text: str
    holds: bool
    bindings: List[Tuple[str, str, Value]] = field(default_factory=list)
    children: List['ProofNode'] = field(default_factory=list)


@dataclass(frozen=True)
class AnnotatedRule:
    """一条被调用的规则：marks 与 defaults + exceptions 一一对应，None 表示未被求值"""
    rule: Rule
    holds: bool
    marks: Tuple[Optional[bool], ...]


class _Context:
    """一次解释所需的全部信息：规则集、成对模式、展开后的行与两侧原始样本"""

    def __init__(self, cmp, a, b):
        self.rs = cmp.rules
        self.schema = cmp.pair_schema
        self.row = plot_pair(cmp, a, b)
        self.items = {'A': a, 'B': b}

    def literal_bindings(self, lit):
        name, k, side = self.schema.origin_feature(lit.col)
        sides = ('A', 'B') if side is None else (side,)
        return [(name, s, self.items[s].values[k]) for s in sides]

    def literal_text(self, lit):
        name, _, side = self.schema.origin_feature(lit.col)
        if isinstance(lit, (NumLeq, NumGt)):
            relation = 'be less equal to' if isinstance(lit, NumLeq) else 'be greater than'
            return (f"the {name} value of A minus the {name} value of B should "
                    f"{relation} {format_threshold(lit.t)}")
        relation = 'equal' if isinstance(lit, CatEq) else 'not equal'
        return f"the {name} value of {side} should {relation} {_constant(lit.v)}"


def _constant(v):
    return quote_string(v.symbol) if isinstance(v, Cat) else format_value(v)


def _unique_bindings(bindings):
    """按首次出现顺序去重（同一特征同一侧只保留一次）"""
    seen, unique = set(), []
    for b in bindings:
        if b[:2] not in seen:
            seen.add(b[:2])
            unique.append(b)
    return unique


def _merge_bindings(nodes):
    return _unique_bindings([b for node in nodes for b in node.bindings])


def _rule_node(ctx, rule, text):
    """规则节点：依次列出默认文字与例外，在第一个不成立处截断"""
    children = []
    holds = bool(rule.defaults)
    for lit in rule.defaults:
        ok = eval_literal(lit, ctx.row)
        children.append(ProofNode(NodeKind.DEFAULT_LITERAL, ctx.literal_text(lit), ok, ctx.literal_bindings(lit)))
        if not ok:
            holds = False
            break
    if holds:
        for name in rule.exceptions:
            ref = _exception_node(ctx, name)
            children.append(ref)
            if ref.holds:
                holds = False
                break
    return ProofNode(NodeKind.RULE_HEAD, text, holds, _merge_bindings(children), children)


def _exception_node(ctx, name):
    holds = predicate_holds(name, ctx.row, ctx.rs)
    rules = ctx.rs.rules_for(name)
    if holds:
        # 只展示第一条成立的例外规则
        rules = [next(r for r in rules if rule_holds(r, ctx.row, ctx.rs))]
    children = [_rule_node(ctx, r, f"the rule for {name}") for r in rules]
    return ProofNode(NodeKind.EXCEPTION_REF, f"the exception {name} of A and B", holds,
                     _merge_bindings(children), children)


def explain(cmp, a, b):
    """证明树：预测为真时以第一条成立的目标规则为根，否则列出每条目标规则的第一个失败点"""
    ctx = _Context(cmp, a, b)
    text = 'the item A is better than item B'
    for rule in ctx.rs.target_rules:
        if rule_holds(rule, ctx.row, ctx.rs):
            return _rule_node(ctx, rule, text)
    children = [_rule_node(ctx, rule, f"rule ({k}) for {text}")
                for k, rule in enumerate(ctx.rs.target_rules, start=1)]
    return ProofNode(NodeKind.RULE_HEAD, text, False, _merge_bindings(children), children)


def format_bindings(bindings):
    parts = []
    for name, side, v in bindings:
        parts.append(f"{name}({side}, {_constant(v)})")
    return '{' + ', '.join(parts) + '}'


def _render_node(node, indent, lines):
    pad = '    ' * indent
    verdict = HOLDS if node.holds else NOT_HOLDS
    if node.kind is NodeKind.RULE_HEAD:
        lines.append(f"{pad}{node.text} {verdict}" + (' because' if node.children else ''))
    else:
        lines.append(f"{pad}{node.text} ({verdict})")
    for child in node.children:
        _render_node(child, indent + 1, lines)


def render_proof(node, number=None):
    lines = []
    if number is not None:
        lines.append(f"Proof Tree for example number {number} :")
    _render_node(node, 0, lines)
    lines.append(format_bindings(node.bindings))
    return '\n'.join(lines) + '\n'


def _annotate(ctx, rule, out, seen):
    marks = []
    holds = bool(rule.defaults)
    for lit in rule.defaults:
        ok = eval_literal(lit, ctx.row)
        marks.append(ok)
        if not ok:
            holds = False
            break
    invoked = []
    if holds:
        for name in rule.exceptions:
            ok = not predicate_holds(name, ctx.row, ctx.rs)
            marks.append(ok)
            invoked.append(name)
            if not ok:
                holds = False
                break
    marks += [None] * (len(rule.defaults) + len(rule.exceptions) - len(marks))
    out.append(AnnotatedRule(rule, holds, tuple(marks)))
    for name in invoked:
        if name in seen:
            continue
        seen.add(name)
        for r in ctx.rs.rules_for(name):
            _annotate(ctx, r, out, seen)


def _annotated(ctx):
    out, seen = [], set()
    firing = [r for r in ctx.rs.target_rules if rule_holds(r, ctx.row, ctx.rs)]
    for rule in (firing[:1] or ctx.rs.target_rules):
        _annotate(ctx, rule, out, seen)
    return out


def annotate_rules(cmp, a, b):
    """被调用到的规则（先序）：预测为真时只含第一条成立的目标规则，否则含全部目标规则"""
    return _annotated(_Context(cmp, a, b))


def _mark(ok):
    if ok is None:
        return ''
    return '[T]' if ok else '[F]'


def annotate(cmp, a, b):
    ctx = _Context(cmp, a, b)
    annotated = _annotated(ctx)
    lines, bindings = [], []
    for entry in annotated:
        rule = entry.rule
        body = []
        for lit, ok in zip(rule.defaults, entry.marks):
            body.append(_mark(ok) + render_literal(lit, ctx.schema))
            if ok is not None:
                bindings.extend(ctx.literal_bindings(lit))
        for name, ok in zip(rule.exceptions, entry.marks[len(rule.defaults):]):
            body.append(_mark(ok) + render_exception(name, ctx.schema))
        lines.append(f"{_mark(entry.holds)}{render_head(rule.head, ctx.schema)} :- {', '.join(body)}.")
    lines.append(format_bindings(_unique_bindings(bindings)))
    return '\n'.join(lines) + '\n'
