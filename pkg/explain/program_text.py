# explain/program_text.py
# 把规则集输出为正规逻辑程序文本，并能把该文本解析回规则集
import re

import lark

import config
from dataset.data_model import MISSING, Cat, FoldTRError, Missing, SchemaMismatch, format_number
from learner.rules import CatEq, CatNeq, NumGt, NumLeq, Rule, RuleSet
from ranker.plotting import PairSchema

FULL_PRECISION = 'full'

_BARE_ATOM = re.compile(r'[a-z][A-Za-z0-9_]*')

program_grammar = r'''
    start: clause*

    clause: atom ":-" body "."

    body: element ("," element)*

    element: NOT atom                       -> negated
           | atom                           -> positive
           | VAR "-" VAR OP SIGNED_NUMBER   -> diff_compare
           | VAR OP SIGNED_NUMBER           -> compare

    atom: name ("(" term ("," term)* ")")?

    ?name: SYMBOL | STRING
    ?term: VAR | STRING | SYMBOL | SIGNED_NUMBER

    NOT: "not"
    OP: "=<" | ">"
    VAR: /[A-Z][A-Za-z0-9_]*/
    SYMBOL: /[a-z][A-Za-z0-9_]*/
    STRING: /'(\\.|[^'\\])*'/
    COMMENT: /%[^\n]*/

    %import common.SIGNED_NUMBER
    %import common.WS
    %ignore WS
    %ignore COMMENT
'''

parser = lark.Lark(program_grammar, parser='lalr', propagate_positions=True)


class ProgramSyntaxError(FoldTRError):
    """程序文本语法错误（带行号、列号）"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"第 {line} 行第 {column} 列: " if line is not None else ''
        super().__init__(where + message)


def format_threshold(t, precision=config.THRESHOLD_DECIMALS):
    """默认保留 3 位小数并去掉多余的 0（至少保留一位小数）；'full' 输出完整精度"""
    if precision == FULL_PRECISION or precision is None:
        return format_number(t)
    text = f"{t:.{int(precision)}f}"
    if '.' in text:
        text = text.rstrip('0')
        if text.endswith('.'):
            text += '0'
    return text


def quote_atom(name):
    if _BARE_ATOM.fullmatch(name) and name != 'not':
        return name
    return "'" + name.replace('\\', '\\\\').replace("'", "\\'") + "'"


def unquote(text):
    if text.startswith("'"):
        return re.sub(r'\\(.)', r'\1', text[1:-1])
    return text


def quote_string(s):
    return "'" + s.replace('\\', '\\\\').replace("'", "\\'") + "'"


def _format_constant(v):
    if isinstance(v, Missing):
        return 'missing'
    return quote_string(v.symbol)


def is_pair_schema(schema):
    return isinstance(schema, PairSchema)


def head_args(schema):
    return '(A,B)' if is_pair_schema(schema) else '(X)'


def render_head(name, schema):
    return f"{quote_atom(name)}{head_args(schema)}"


def render_literal(lit, schema, precision=config.THRESHOLD_DECIMALS):
    """单个文字的程序文本"""
    if isinstance(lit, (NumLeq, NumGt)):
        op = '=<' if isinstance(lit, NumLeq) else '>'
        t = format_threshold(lit.t, precision)
        if is_pair_schema(schema):
            name, k, _ = schema.origin_feature(lit.col)
            f = quote_atom(name)
            return f"{f}(A,NA{k}), {f}(B,NB{k}), NA{k}-NB{k}{op}{t}"
        f = quote_atom(schema.features[lit.col].name)
        return f"{f}(X,N{lit.col}), N{lit.col}{op}{t}"

    neg = 'not ' if isinstance(lit, CatNeq) else ''
    if is_pair_schema(schema):
        name, _, side = schema.origin_feature(lit.col)
        return f"{neg}{quote_atom(name)}({side},{_format_constant(lit.v)})"
    f = quote_atom(schema.features[lit.col].name)
    if lit.v == Cat('true'):
        return f"{neg}{f}(X)"
    return f"{neg}{f}(X,{_format_constant(lit.v)})"


def render_exception(name, schema):
    return f"not {render_head(name, schema)}"


def render_rule(rule, schema, precision=config.THRESHOLD_DECIMALS):
    body = [render_literal(lit, schema, precision) for lit in rule.defaults]
    body += [render_exception(name, schema) for name in rule.exceptions]
    return f"{render_head(rule.head, schema)} :- {', '.join(body)}."


def emit(rs, schema, precision=config.THRESHOLD_DECIMALS):
    """每条规则一行；目标规则在前，例外规则按编号顺序在后"""
    lines = [render_rule(r, schema, precision) for r in rs.all_rules()]
    return '\n'.join(lines) + ('\n' if lines else '')


class _ClauseBuilder:
    """把一个子句的语法树转换为 Rule"""

    def __init__(self, schema, features):
        self.schema = schema
        self.features = features
        self.pair = is_pair_schema(schema)

    def column(self, name, token, side=None):
        key = f"{name}@{side}" if side in ('A', 'B') and f"{name}@{side}" in self.features else name
        try:
            return self.schema.index_of(key)
        except SchemaMismatch as e:
            raise ProgramSyntaxError(str(e), token.line, token.column)

    def build(self, clause):
        head_atom, body = clause.children
        head_name = unquote(str(head_atom.children[0]))
        bindings = {}
        literals, exceptions = [], []
        for element in body.children:
            if element.data == 'diff_compare':
                var_a, _, op, number = element.children
                name = self._bound(bindings, var_a)
                literals.append(self._numeric(self.column(name, var_a), op, number))
            elif element.data == 'compare':
                var, op, number = element.children
                name = self._bound(bindings, var)
                literals.append(self._numeric(self.column(name, var), op, number))
            elif element.data == 'positive':
                lit = self._atom(element.children[0], bindings, negated=False)
                if lit is not None:
                    literals.append(lit)
            else:
                atom = element.children[1]
                name = unquote(str(atom.children[0]))
                if self._is_feature(name):
                    literals.append(self._atom(atom, bindings, negated=True))
                else:
                    exceptions.append(name)
        if not literals and not exceptions:
            raise ProgramSyntaxError("子句体为空", head_atom.meta.line, head_atom.meta.column)
        return Rule(head_name, tuple(literals), tuple(exceptions))

    def _is_feature(self, name):
        return name in self.features or f"{name}@A" in self.features

    def _bound(self, bindings, var):
        if str(var) not in bindings:
            raise ProgramSyntaxError(f"变量 {var} 未绑定到任何特征", var.line, var.column)
        return bindings[str(var)]

    @staticmethod
    def _numeric(col, op, number):
        t = float(number)
        return NumLeq(col, t) if str(op) == '=<' else NumGt(col, t)

    def _atom(self, atom, bindings, negated):
        name_token, *terms = atom.children
        name = unquote(str(name_token))
        if len(terms) == 1:
            # bird(X) 表示布尔分类列取 'true'
            col = self.column(name, name_token)
            return CatNeq(col, Cat('true')) if negated else CatEq(col, Cat('true'))
        if len(terms) != 2:
            raise ProgramSyntaxError(f"无法识别的调用: {name}/{len(terms)}", name_token.line, name_token.column)
        subject, arg = terms
        if arg.type == 'VAR':
            if negated:
                raise ProgramSyntaxError(f"绑定调用不能取否定: {name}", name_token.line, name_token.column)
            bindings[str(arg)] = name
            return None
        col = self.column(name, name_token, str(subject))
        if arg.type == 'SYMBOL' and str(arg) == 'missing':
            value = MISSING
        else:
            value = Cat(unquote(str(arg)))
        return CatNeq(col, value) if negated else CatEq(col, value)


def parse(text, schema, head=None, ratio=config.DEFAULT_RATIO):
    """解析 emit 生成的程序文本；被 not 引用的谓词视为例外谓词"""
    try:
        tree = parser.parse(text)
    except lark.exceptions.UnexpectedInput as e:
        line, column = getattr(e, 'line', -1), getattr(e, 'column', -1)
        if line is None or line < 1:
            # 输入提前结束时定位到最后一行末尾
            lines = text.rstrip('\n').split('\n')
            line, column = len(lines), len(lines[-1]) + 1
        raise ProgramSyntaxError(f"语法错误: {e.__class__.__name__}", line, column)

    builder = _ClauseBuilder(schema, set(schema.names))
    rules = [builder.build(clause) for clause in tree.children]
    referenced = {name for r in rules for name in r.exceptions}
    target_rules = tuple(r for r in rules if r.head not in referenced)
    ab_rules = tuple(r for r in rules if r.head in referenced)
    heads = {r.head for r in target_rules}
    if len(heads) > 1:
        raise ProgramSyntaxError(f"程序包含多个目标谓词: {sorted(heads)}")
    head = heads.pop() if heads else (head or config.TARGET_PREDICATE)
    return RuleSet(head, target_rules, ab_rules, ratio)
