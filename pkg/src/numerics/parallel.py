"""
Block-parallel helpers

把 Monte-Carlo 抽樣切成固定大小的區塊，每個區塊使用 derive() 出的串流，
結果依任務順序合併，因此輸出與執行緒數量無關。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

import numpy as np

from numerics.rng import RngStream

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

BLOCK_SIZE = 65536


def ordered_map(fn: Callable[[T], R], tasks: Sequence[T], threads: int = 1) -> List[R]:
    """依輸入順序回傳 fn(task) 結果；threads ≤ 1 時在目前執行緒執行"""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def block_sizes(n: int, block: int = BLOCK_SIZE) -> List[int]:
    sizes = [block] * (n // block)
    if n % block:
        sizes.append(n % block)
    return sizes


def sample_blocks(
    draw: Callable[[RngStream, int], np.ndarray],
    n: int,
    rng: RngStream,
    label: int,
    threads: int = 1,
    block: int = BLOCK_SIZE,
) -> np.ndarray:
    """
    分區塊抽樣並依序串接

    Args:
        draw: (stream, count) -> 形狀 (count, ...) 的樣本
        n: 總樣本數
        rng: 父串流
        label: 區分同一父串流下不同用途（例如 out / in 假設）
        threads: 工作執行緒數
        block: 區塊大小
    """
    sizes = block_sizes(n, block)
    tasks = [(rng.derive(label, index), size) for index, size in enumerate(sizes)]
    logger.debug(f"[Sampling] label={label} n={n} blocks={len(tasks)} threads={threads}")
    parts = ordered_map(lambda task: draw(task[0], task[1]), tasks, threads)
    return np.concatenate(parts, axis=0)
