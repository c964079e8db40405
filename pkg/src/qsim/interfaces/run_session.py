from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional


class RunStatus(Enum):
    """运行状态枚举"""
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"
    CANCELLED = "cancelled"


@dataclass
class RunContext:
    """Checkpoint of a chunked run; `next_start` is the first undelivered index."""
    run_id: str
    circuit_path: str
    out_path: Optional[str]
    fmt: str
    total_start: int
    total_end: int
    chunk_size: int
    next_start: int = None
    status: RunStatus = RunStatus.PENDING
    created_at: datetime = None
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.created_at is None:
            self.created_at = datetime.now()
        if self.next_start is None:
            self.next_start = self.total_start

    @property
    def remaining(self) -> int:
        return self.total_end - self.next_start

    def progress_percentage(self) -> float:
        total = self.total_end - self.total_start
        done = self.next_start - self.total_start
        return round(done / total * 100, 2) if total > 0 else 100.0


class SessionManager(ABC):
    """会话管理器抽象基类"""

    @abstractmethod
    def create_session(self, circuit_path: str, out_path: Optional[str], fmt: str,
                       total_start: int, total_end: int, chunk_size: int) -> RunContext:
        """创建新的运行会话

        Args:
            circuit_path: 电路文件路径
            out_path: 输出文件路径，None 表示 stdout
            fmt: 输出格式 ("text" 或 "binary")
            total_start: 输出区间起点
            total_end: 输出区间终点（不含）
            chunk_size: 每个任务的振幅数

        Returns:
            运行上下文，next_start 等于 total_start
        """
        pass

    @abstractmethod
    def save_session(self, context: RunContext) -> None:
        """保存会话状态

        Args:
            context: 运行上下文
        """
        pass

    @abstractmethod
    def load_session(self, run_id: str) -> Optional[RunContext]:
        """加载会话状态

        Args:
            run_id: 运行ID

        Returns:
            运行上下文，如果不存在则返回None
        """
        pass

    @abstractmethod
    def list_sessions(self) -> List[RunContext]:
        """列出所有会话

        Returns:
            会话列表
        """
        pass

    @abstractmethod
    def delete_session(self, run_id: str) -> bool:
        """删除会话

        Args:
            run_id: 运行ID

        Returns:
            是否删除成功
        """
        pass
