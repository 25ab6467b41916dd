""" CSV 读取、模式推断与训练/测试划分 """

import pytest

from dataset.data_model import MISSING, Cat, FeatureKind, Num, SchemaMismatch
from dataset.ingest import (
    EmptyColumn, EmptyDataset, MissingIdColumn, MissingTarget, NonNumericTarget, RaggedRow, load_csv, load_items,
    parse_row, split,
)

HOUSES_CSV = """\
id,size,colour,price
a,3,red,10
b,,blue,30
c,1.5,,20
d,2,red,30
"""


def write_csv(tmp_path, text, name='data.csv'):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


@pytest.fixture
def houses_csv(tmp_path):
    return write_csv(tmp_path, HOUSES_CSV)


def test_schema_inference(houses_csv):
    data = load_csv(houses_csv, 'price', 'id')
    assert data.schema.names == ['size', 'colour']
    assert [f.kind for f in data.schema.features] == [FeatureKind.NUMERIC, FeatureKind.CATEGORICAL]
    assert data.schema.target == 'price'


def test_rows_are_sorted_by_descending_target(houses_csv):
    data = load_csv(houses_csv, 'price', 'id')
    # 目标值相同时保持读入顺序
    assert data.item_ids() == ['b', 'd', 'c', 'a']
    assert [it.target for it in data.items] == [30.0, 30.0, 20.0, 10.0]
    assert data.items[0].values == (MISSING, Cat('blue'))
    assert data.items[2].values == (Num(1.5), MISSING)


def test_default_ids_are_row_numbers(houses_csv):
    data = load_csv(houses_csv, 'price')
    assert data.schema.names == ['id', 'size', 'colour']
    assert data.item_ids() == [1, 3, 2, 0]


def test_mixed_column_is_categorical(tmp_path):
    path = write_csv(tmp_path, "grade,score\n3,1\nA,2\n")
    data = load_csv(path, 'score')
    assert data.schema.features[0].kind is FeatureKind.CATEGORICAL
    assert [it.values[0] for it in data.items] == [Cat('A'), Cat('3')]


@pytest.mark.parametrize(
    "text, error",
    [
        ("size,colour\n3,red\n", MissingTarget),
        ("size,price\n3,cheap\n", NonNumericTarget),
        ("size,price\n1,5\n3,10,extra\n", RaggedRow),
        ("x,y\n1,2,9\n3,4,8\n", RaggedRow),
        ("price,price\n1,2\n", SchemaMismatch),
        ("size,price\n", EmptyDataset),
        ("", EmptyDataset),
        ("size,price\n,10\n,20\n", EmptyColumn),
    ],
)
def test_load_errors(tmp_path, text, error):
    path = write_csv(tmp_path, text)
    with pytest.raises(error):
        load_csv(path, 'price')


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_csv(str(tmp_path / 'absent.csv'), 'price')


def test_load_items_with_existing_schema(tmp_path, houses_csv):
    schema = load_csv(houses_csv, 'price', 'id').schema
    path = write_csv(tmp_path, "id,colour,size\nx,red,4\ny,green,\n", 'items.csv')
    items = load_items(path, schema, 'id')
    assert [it.id for it in items] == ['x', 'y']
    assert [it.values for it in items] == [(Num(4.0), Cat('red')), (MISSING, Cat('green'))]
    assert all(it.target == 0.0 for it in items)


@pytest.mark.parametrize(
    "text",
    [
        "id,colour\nx,red\n",          # 缺少 size 列
        "id,colour,size\nx,red,big\n",  # 数值列中出现非数值
    ],
)
def test_load_items_mismatch(tmp_path, houses_csv, text):
    schema = load_csv(houses_csv, 'price', 'id').schema
    with pytest.raises(SchemaMismatch):
        load_items(write_csv(tmp_path, text, 'items.csv'), schema, 'id')


def test_parse_row(houses_csv):
    schema = load_csv(houses_csv, 'price', 'id').schema
    item = parse_row("3.5, red", schema, 'A')
    assert item.id == 'A'
    assert item.values == (Num(3.5), Cat('red'))
    assert parse_row(",blue", schema).values == (MISSING, Cat('blue'))
    with pytest.raises(SchemaMismatch):
        parse_row("1,red,extra", schema)
    with pytest.raises(SchemaMismatch):
        parse_row("red,1", schema)


def test_split(make_ranked):
    data = make_ranked([float(x) for x in range(10)])
    train_set, test_set = split(data, 0.8, seed=4)
    assert (len(train_set), len(test_set)) == (8, 2)
    assert sorted(train_set.item_ids() + test_set.item_ids()) == sorted(data.item_ids())
    for part in (train_set, test_set):
        targets = [it.target for it in part.items]
        assert targets == sorted(targets, reverse=True)
    again = split(data, 0.8, seed=4)
    assert again[0].item_ids() == train_set.item_ids()


@pytest.mark.parametrize("fraction", [0.0, 1.0, 1.5])
def test_split_fraction_bounds(make_ranked, fraction):
    with pytest.raises(ValueError):
        split(make_ranked([1.0, 2.0]), fraction, seed=1)


def test_unknown_id_column(tmp_path, houses_csv):
    with pytest.raises(MissingIdColumn):
        load_csv(houses_csv, 'price', 'nope')
    schema = load_csv(houses_csv, 'price', 'id').schema
    path = write_csv(tmp_path, "id,colour,size\nx,red,4\n", 'items.csv')
    with pytest.raises(MissingIdColumn):
        load_items(path, schema, 'nope')
