# utils/concurrent_utils.py
import logging
from concurrent.futures import ThreadPoolExecutor

import config

logger = logging.getLogger(__name__)


class TaskManager:
    """任务管理器，用于并发执行相互独立的计算任务"""

    def __init__(self, max_workers=None):
        self.max_workers = config.MAX_WORKERS if max_workers is None else max_workers
        # max_workers <= 1 时不创建线程池，直接在当前线程执行
        self.executor = ThreadPoolExecutor(max_workers=self.max_workers) if self.max_workers > 1 else None
        self.futures = {}
        self.task_counter = 0

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.shutdown()

    def submit_task(self, func, *args, **kwargs):
        """提交任务，返回任务编号"""
        task_id = self.task_counter
        self.task_counter += 1
        if self.executor is None:
            self.futures[task_id] = _ImmediateResult(func, *args, **kwargs)
        else:
            self.futures[task_id] = self.executor.submit(func, *args, **kwargs)
        return task_id

    def get_result(self, task_id):
        """获取任务结果（任务出错时抛出原异常）"""
        if task_id in self.futures:
            return self.futures.pop(task_id).result()
        return None

    def map_ordered(self, func, items):
        """对每个元素执行 func，按提交顺序返回结果"""
        task_ids = [self.submit_task(func, item) for item in items]
        logger.debug(f"已提交 {len(task_ids)} 个任务, {self.get_active_tasks_count()} 个未完成")
        return [self.get_result(task_id) for task_id in task_ids]

    def get_active_tasks_count(self):
        """获取未完成任务数量"""
        return sum(1 for future in self.futures.values() if not future.done())

    def shutdown(self, wait=True):
        """关闭任务管理器"""
        if self.executor is not None:
            self.executor.shutdown(wait=wait)
            self.executor = None


class _ImmediateResult:
    """同步执行的任务结果，接口与 Future 一致"""

    def __init__(self, func, *args, **kwargs):
        self._value = None
        self._error = None
        try:
            self._value = func(*args, **kwargs)
        except Exception as e:  # 与 Future 一样，在 result() 时再抛出
            self._error = e

    def done(self):
        return True

    def result(self):
        if self._error is not None:
            raise self._error
        return self._value
