import json
import logging
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..interfaces.run_session import RunContext, RunStatus, SessionManager

logger = logging.getLogger(__name__)


def _new_context(circuit_path, out_path, fmt, total_start, total_end, chunk_size) -> RunContext:
    return RunContext(
        run_id=uuid.uuid4().hex[:12],
        circuit_path=circuit_path,
        out_path=out_path,
        fmt=fmt,
        total_start=total_start,
        total_end=total_end,
        chunk_size=chunk_size,
        status=RunStatus.PENDING,
        created_at=datetime.now(),
    )


class InMemorySessionManager(SessionManager):
    """内存会话管理器实现"""

    def __init__(self):
        self._sessions: Dict[str, RunContext] = {}

    def create_session(self, circuit_path, out_path, fmt, total_start, total_end, chunk_size) -> RunContext:
        context = _new_context(circuit_path, out_path, fmt, total_start, total_end, chunk_size)
        self._sessions[context.run_id] = context
        return context

    def save_session(self, context: RunContext) -> None:
        self._sessions[context.run_id] = context

    def load_session(self, run_id: str) -> Optional[RunContext]:
        return self._sessions.get(run_id)

    def list_sessions(self) -> List[RunContext]:
        return list(self._sessions.values())

    def delete_session(self, run_id: str) -> bool:
        return self._sessions.pop(run_id, None) is not None


class FileSessionManager(SessionManager):
    """文件会话管理器实现: one JSON file per run."""

    def __init__(self, session_dir: str = "./sessions"):
        self.session_dir = Path(session_dir)
        self.session_dir.mkdir(parents=True, exist_ok=True)

    def _get_session_file(self, run_id: str) -> Path:
        return self.session_dir / f"{run_id}.json"

    def _serialize_context(self, context: RunContext) -> Dict[str, Any]:
        return {
            "run_id": context.run_id,
            "circuit_path": context.circuit_path,
            "out_path": context.out_path,
            "fmt": context.fmt,
            "total_start": context.total_start,
            "total_end": context.total_end,
            "chunk_size": context.chunk_size,
            "next_start": context.next_start,
            "status": context.status.value,
            "created_at": context.created_at.isoformat() if context.created_at else None,
            "started_at": context.started_at.isoformat() if context.started_at else None,
            "completed_at": context.completed_at.isoformat() if context.completed_at else None,
            "metadata": context.metadata,
        }

    def _deserialize_context(self, data: Dict[str, Any]) -> RunContext:
        def when(key):
            return datetime.fromisoformat(data[key]) if data.get(key) else None

        return RunContext(
            run_id=data["run_id"],
            circuit_path=data["circuit_path"],
            out_path=data.get("out_path"),
            fmt=data["fmt"],
            total_start=int(data["total_start"]),
            total_end=int(data["total_end"]),
            chunk_size=int(data["chunk_size"]),
            next_start=int(data["next_start"]),
            status=RunStatus(data["status"]),
            created_at=when("created_at"),
            started_at=when("started_at"),
            completed_at=when("completed_at"),
            metadata=data.get("metadata", {}),
        )

    def create_session(self, circuit_path, out_path, fmt, total_start, total_end, chunk_size) -> RunContext:
        context = _new_context(circuit_path, out_path, fmt, total_start, total_end, chunk_size)
        self.save_session(context)
        return context

    def save_session(self, context: RunContext) -> None:
        session_file = self._get_session_file(context.run_id)
        tmp = session_file.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump(self._serialize_context(context), f, indent=2, ensure_ascii=False)
        tmp.replace(session_file)

    def load_session(self, run_id: str) -> Optional[RunContext]:
        session_file = self._get_session_file(run_id)
        if not session_file.exists():
            return None
        try:
            with open(session_file, "r", encoding="utf-8") as f:
                return self._deserialize_context(json.load(f))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            logger.warning("Error loading session %s: %s", run_id, e)
            return None

    def list_sessions(self) -> List[RunContext]:
        sessions = []
        for session_file in self.session_dir.glob("*.json"):
            context = self.load_session(session_file.stem)
            if context:
                sessions.append(context)
        return sorted(sessions, key=lambda x: x.created_at or datetime.min, reverse=True)

    def delete_session(self, run_id: str) -> bool:
        session_file = self._get_session_file(run_id)
        if session_file.exists():
            try:
                session_file.unlink()
                return True
            except OSError as e:
                logger.warning("Error deleting session %s: %s", run_id, e)
        return False
