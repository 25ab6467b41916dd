""" 逻辑程序文本：输出、解析与往返 """

import numpy as np
import pytest

from dataset.data_model import MISSING, Cat, Feature, FeatureKind, Schema
from explain.program_text import (
    FULL_PRECISION, ProgramSyntaxError, emit, format_threshold, parse, render_rule,
)
from learner.foldrpp import fit_classifier
from learner.rules import CatEq, CatNeq, NumGt, Rule, RuleSet, predict
from ranker.plotting import build_pair_schema, pair_rows_table, plot_pairs
from ranker.ranker_app import train
from ranker.sampling import default_sampler_config

from conftest import BOSTON_PROGRAM

PENGUIN_PROGRAM = "fly(X) :- bird(X), not ab0(X).\nab0(X) :- penguin(X).\n"


@pytest.mark.parametrize(
    "t, text",
    [
        (0.156, '0.156'),
        (-5.806, '-5.806'),
        (-64.79, '-64.79'),
        (-9.0, '-9.0'),
        (10.72, '10.72'),
        (0.15449, '0.154'),
        (2.0, '2.0'),
    ],
)
def test_format_threshold(t, text):
    assert format_threshold(t) == text


def test_full_precision_threshold():
    assert format_threshold(0.1 + 0.2, FULL_PRECISION) == '0.30000000000000004'


def test_penguin_emit(penguin):
    schema, rows, labels = penguin
    assert emit(fit_classifier(schema, rows, labels, head='fly'), schema) == PENGUIN_PROGRAM


def test_boston_rule_text(boston_schema):
    pair_schema = build_pair_schema(boston_schema)
    rm = boston_schema.index_of('rm')
    rule = Rule('better', (NumGt(rm, 0.156),), ('ab5',))
    assert render_rule(rule, pair_schema) == "better(A,B) :- rm(A,NA5), rm(B,NB5), NA5-NB5>0.156, not ab5(A,B)."


def test_empty_ruleset_emits_nothing(boston_schema):
    assert emit(RuleSet('better'), build_pair_schema(boston_schema)) == ''


def test_boston_program_round_trip(boston_comparator):
    rs = boston_comparator.rules
    assert len(rs.target_rules) == 2
    assert [r.head for r in rs.ab_rules] == ['ab1', 'ab2', 'ab3', 'ab4', 'ab5']
    assert emit(rs, boston_comparator.pair_schema) == BOSTON_PROGRAM


def test_penguin_parse_predicts_the_same(penguin):
    schema, rows, labels = penguin
    rs = fit_classifier(schema, rows, labels, head='fly')
    parsed = parse(emit(rs, schema), schema)
    assert parsed == rs
    assert [predict(parsed, row) for row in rows] == [predict(rs, row) for row in rows]


def test_categorical_pair_literals():
    schema = Schema((Feature('colour', FeatureKind.CATEGORICAL), Feature('size', FeatureKind.NUMERIC)), 'y')
    pair_schema = build_pair_schema(schema)
    a, b = pair_schema.twin_pairs()[0]
    rule = Rule('better', (CatEq(a, Cat("it's")), CatNeq(b, MISSING)))
    text = render_rule(rule, pair_schema)
    assert text == "better(A,B) :- colour(A,'it\\'s'), not colour(B,missing)."
    assert parse(text, pair_schema).target_rules == (rule,)


@pytest.mark.parametrize(
    "text",
    [
        "fly(X) :- .",
        "fly(X) :- bird(X)",
        "fly(X) :- bird(X), N0>.",
    ],
)
def test_syntax_errors(text, penguin):
    schema, _, _ = penguin
    with pytest.raises(ProgramSyntaxError) as info:
        parse(text, schema)
    assert info.value.line == 1


def test_unknown_feature(penguin):
    schema, _, _ = penguin
    with pytest.raises(ProgramSyntaxError):
        parse("fly(X) :- dog(X).", schema)


def test_unbound_variable(boston_schema):
    with pytest.raises(ProgramSyntaxError):
        parse("better(A,B) :- NA5-NB5>0.1.", build_pair_schema(boston_schema))


@pytest.mark.parametrize("seed", range(50))
def test_full_precision_round_trip(seed, make_random_ranked):
    rng = np.random.default_rng(300 + seed)
    data = make_random_ranked(rng, int(rng.integers(6, 30)))
    cmp = train(data, default_sampler_config(len(data), seed=seed))
    parsed = parse(emit(cmp.rules, cmp.pair_schema, FULL_PRECISION), cmp.pair_schema, ratio=cmp.rules.ratio)
    assert parsed == cmp.rules

    n = len(data)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pair_schema, rows = plot_pairs(data, pairs)
    table = pair_rows_table(pair_schema, rows)
    for row in table.rows:
        assert predict(parsed, row) == predict(cmp.rules, row)
