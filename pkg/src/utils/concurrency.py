# -*- coding: utf-8 -*-
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, List, Sequence, TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")


def partition(total: int, parts: int) -> List[range]:
    """把 range(total) 切成至多 parts 段连续区间，顺序保持不变"""
    parts = max(1, min(parts, total)) if total > 0 else 1
    size, extra = divmod(total, parts)
    ranges = []
    start = 0
    for index in range(parts):
        stop = start + size + (1 if index < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges


def ordered_parallel_map(fn: Callable[[T], R], tasks: Sequence[T], max_workers: int) -> List[R]:
    """并发执行 fn，结果按 tasks 的顺序返回

    任一任务抛出异常时记录日志并原样抛出。
    """
    if max_workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]

    results: Dict[int, R] = {}
    with ThreadPoolExecutor(max_workers=min(max_workers, len(tasks))) as executor:
        futures = {executor.submit(fn, task): index for index, task in enumerate(tasks)}
        for future in as_completed(futures):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"[Concurrency] 分片 {index} 失败: {e}")
                raise
    return [results[index] for index in range(len(tasks))]
