# ranker/sampling.py
# 按排名位置的正态分布采样样本对：排名越接近的样本对被采到的概率越大
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

import config
from dataset.data_model import FoldTRError

logger = logging.getLogger(__name__)


class NotEnoughItems(FoldTRError):
    """样本数少于 2，无法组成样本对"""
    pass


class AllTied(FoldTRError):
    """所有样本目标值相同，没有偏序信息"""
    pass


@dataclass(frozen=True)
class SamplerConfig:
    sigma: float
    max_pairs: int
    seed: int = config.DEFAULT_SEED
    window: Optional[int] = None  # 设置后改为在连续的排名区间内取所有样本对

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma 必须为正数: {self.sigma}")
        if self.max_pairs < 1:
            raise ValueError(f"max_pairs 至少为 1: {self.max_pairs}")
        if self.window is not None and self.window < 2:
            raise ValueError(f"window 至少为 2: {self.window}")


def default_sampler_config(n, seed=config.DEFAULT_SEED, sigma=None, max_pairs=None, window=None):
    """sigma 默认 max(1, n/4)，max_pairs 默认 min(5000, n(n-1)/2)"""
    if sigma is None:
        sigma = max(config.MIN_SIGMA, n / config.SIGMA_RANK_DIVISOR)
    if max_pairs is None:
        max_pairs = max(1, min(config.MAX_PAIRS_CAP, n * (n - 1) // 2))
    return SamplerConfig(float(sigma), int(max_pairs), seed, window)


def _targets(data):
    n = len(data)
    if n < 2:
        raise NotEnoughItems(f"至少需要 2 个样本，当前 {n} 个")
    targets = np.array([it.target for it in data.items], dtype=float)
    if np.all(targets[:-1] == targets[1:]):
        raise AllTied("所有样本的目标值相同")
    return targets


def sample_pairs(data, cfg):
    """返回去重后的有序下标对 (i, j)，i 的排名高于 j；结果只取决于种子"""
    targets = _targets(data)
    rng = np.random.default_rng(cfg.seed)
    if cfg.window is not None:
        return _window_pairs(targets, cfg, rng)

    n = len(targets)
    seen = set()
    pairs = []
    attempts = 0
    limit = cfg.max_pairs * config.SAMPLER_ATTEMPT_FACTOR
    while len(pairs) < cfg.max_pairs and attempts < limit:
        batch = min(cfg.max_pairs, limit - attempts)
        attempts += batch
        # 间隔 g = max(1, round(|z|))，z ~ N(0, sigma)
        gaps = np.maximum(1, np.rint(np.abs(rng.normal(0.0, cfg.sigma, size=batch))).astype(np.int64))
        gaps = np.minimum(gaps, n - 1)
        anchors = np.floor(rng.random(batch) * (n - gaps)).astype(np.int64)
        for i, g in zip(anchors.tolist(), gaps.tolist()):
            j = i + g
            # 目标值相同的样本对没有偏好信息
            if targets[i] == targets[j] or (i, j) in seen:
                continue
            seen.add((i, j))
            pairs.append((i, j))
            if len(pairs) == cfg.max_pairs:
                break

    logger.info(f"采样完成: {len(pairs)} 个样本对 (n={n}, sigma={cfg.sigma:.2f}, 尝试 {attempts} 次)")
    return pairs


def _window_pairs(targets, cfg, rng):
    n = len(targets)
    w = min(cfg.window, n)
    start = int(rng.integers(0, n - w + 1))
    i, j = np.triu_indices(w, k=1)
    i, j = i + start, j + start
    keep = targets[i] != targets[j]
    i, j = i[keep], j[keep]
    if len(i) > cfg.max_pairs:
        # 超过 max_pairs 时均匀抽取，保持原有次序
        pick = np.sort(rng.choice(len(i), size=cfg.max_pairs, replace=False))
        i, j = i[pick], j[pick]
    logger.info(f"区间采样完成: 区间 [{start}, {start + w}), {len(i)} 个样本对")
    return list(zip(i.tolist(), j.tolist()))
