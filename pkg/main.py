# FOLD-TR
# 主程序入口：命令行前端（训练、排序、比较、评估、输出程序文本）

import argparse
import csv
import io
import logging
import os
import sys

# 添加项目根目录到系统路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import config
from dataset.data_model import FoldTRError
from dataset.ingest import load_csv, load_items, parse_row
from evaluation.experiment import ExperimentConfig, format_report, report_json, run_experiment
from explain.justify import annotate, explain, render_proof
from explain.program_text import FULL_PRECISION, emit
from ranker.model_io import load_model, save_model
from ranker.ranker_app import RankerApp
from ranker.sampling import default_sampler_config
from utils.log_utils import setup_logging

logger = logging.getLogger('fold_tr')


def precision_arg(text):
    if text == FULL_PRECISION:
        return FULL_PRECISION
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"精度必须是非负整数或 '{FULL_PRECISION}': {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"精度不能为负数: {value}")
    return value


def write_output(text, path=None):
    """写入文件；未指定路径时输出到标准输出"""
    if path:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"已写入 {path}")
    else:
        sys.stdout.write(text)


def add_sampler_args(parser):
    parser.add_argument('--ratio', type=float, default=config.DEFAULT_RATIO, help='例外比例')
    parser.add_argument('--tail', type=float, default=config.DEFAULT_TAIL, help='最小覆盖比例')
    parser.add_argument('--sigma', type=float, default=None, help='排名间隔的标准差（默认 max(1, n/4)）')
    parser.add_argument('--max-pairs', type=int, default=None, help='最多采样的样本对数量')
    parser.add_argument('--window', type=int, default=None, help='改为在连续排名区间内取所有样本对')
    parser.add_argument('--seed', type=int, default=config.DEFAULT_SEED)


def build_parser():
    parser = argparse.ArgumentParser(prog='fold-tr', description='FOLD-TR: 基于规则学习的可解释排序')
    parser.add_argument('--log-level', default=None, help='日志级别（默认取 FOLDTR_LOG_LEVEL）')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('train', help='训练 better/2 比较器')
    p.add_argument('--data', required=True)
    p.add_argument('--target', required=True, help='排序依据的目标列')
    p.add_argument('--id-column', default=None)
    add_sampler_args(p)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--out', default=None, help='模型 JSON 输出路径')
    p.add_argument('--emit', default=None, help='程序文本 (.lp) 输出路径')
    p.add_argument('--precision', type=precision_arg, default=config.THRESHOLD_DECIMALS)

    p = sub.add_parser('rank', help='用已训练的模型对样本排序')
    p.add_argument('--model', required=True)
    p.add_argument('--items', required=True)
    p.add_argument('--id-column', default=None)
    p.add_argument('--out', default=None)

    p = sub.add_parser('compare', help='判断 A 是否优于 B')
    p.add_argument('--model', required=True)
    p.add_argument('--a-row', required=True, help='A 的特征值（逗号分隔，按模式顺序）')
    p.add_argument('--b-row', required=True)
    p.add_argument('--justify', action='store_true', help='输出证明树与标注规则')

    p = sub.add_parser('eval', help='按 80/20 划分重复实验')
    p.add_argument('--data', required=True)
    p.add_argument('--target', required=True)
    p.add_argument('--id-column', default=None)
    p.add_argument('--runs', type=int, default=config.DEFAULT_RUNS)
    add_sampler_args(p)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--report', choices=['table', 'json'], default='table')
    p.add_argument('--out', default=None)

    p = sub.add_parser('emit', help='把模型输出为程序文本')
    p.add_argument('--model', required=True)
    p.add_argument('--precision', type=precision_arg, default=config.THRESHOLD_DECIMALS)
    p.add_argument('--out', default=None)
    return parser


def cmd_train(args):
    data = load_csv(args.data, args.target, args.id_column)
    cfg = default_sampler_config(len(data), args.seed, args.sigma, args.max_pairs, args.window)
    app = RankerApp(args.ratio, args.workers, args.tail)
    cmp = app.fit(data, cfg)
    program = emit(cmp.rules, cmp.pair_schema, args.precision)
    if args.out:
        save_model(args.out, cmp)
    if args.emit or not args.out:
        write_output(program, args.emit)


def cmd_rank(args):
    app = RankerApp().load(load_model(args.model))
    items = load_items(args.items, app.comparator.schema, args.id_column)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['rank', 'id', 'score'])
    for k, (item, score) in enumerate(app.rank(items), start=1):
        writer.writerow([k, item.id, score])
    write_output(buffer.getvalue(), args.out)


def cmd_compare(args):
    app = RankerApp().load(load_model(args.model))
    schema = app.comparator.schema
    a = parse_row(args.a_row, schema, 'A')
    b = parse_row(args.b_row, schema, 'B')
    print('true' if app.better(a, b) else 'false')
    if args.justify:
        print(render_proof(explain(app.comparator, a, b), 1), end='')
        print(annotate(app.comparator, a, b), end='')


def cmd_eval(args):
    data = load_csv(args.data, args.target, args.id_column)
    exp = ExperimentConfig(runs=args.runs, seed=args.seed, ratio=args.ratio, tail=args.tail,
                           sigma=args.sigma, max_pairs=args.max_pairs, window=args.window,
                           max_workers=args.workers)
    report = run_experiment(data, exp)
    text = report_json(report) if args.report == 'json' else format_report(report)
    write_output(text, args.out)


def cmd_emit(args):
    cmp = load_model(args.model)
    write_output(emit(cmp.rules, cmp.pair_schema, args.precision), args.out)


COMMANDS = {
    'train': cmd_train,
    'rank': cmd_rank,
    'compare': cmd_compare,
    'eval': cmd_eval,
    'emit': cmd_emit,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        COMMANDS[args.command](args)
    except (FoldTRError, OSError, ValueError) as e:
        logger.error(f"{args.command} 失败: {e}")
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
