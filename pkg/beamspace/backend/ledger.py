"""SQL ledger of CLI runs, one row per manifest."""

import json
from datetime import datetime, timezone

from sqlalchemy import desc
from sqlalchemy.engine import Engine
from sqlmodel import Field, Session, SQLModel, create_engine, select

from .models import RunManifest


class RunRecord(SQLModel, table=True):  # type: ignore
    """The run model."""

    id: int | None = Field(default=None, primary_key=True)
    command: str = Field(index=True)
    argv: str
    parameters: str
    inputs: str
    outputs: str
    version: str
    wall_time_s: float
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))

    def to_manifest(self) -> RunManifest:
        return RunManifest(
            command=self.command,
            argv=json.loads(self.argv),
            parameters=json.loads(self.parameters),
            inputs=json.loads(self.inputs),
            outputs=json.loads(self.outputs),
            version=self.version,
            wall_time_s=self.wall_time_s,
        )


def open_ledger(url: str) -> Engine:
    """Engine for the ledger database; tables are created on first use."""
    engine = create_engine(url)
    SQLModel.metadata.create_all(engine)
    return engine


def record_run(engine: Engine, manifest: RunManifest) -> RunRecord:
    record = RunRecord(
        command=manifest.command,
        argv=json.dumps(manifest.argv),
        parameters=json.dumps(manifest.parameters, sort_keys=True),
        inputs=json.dumps(manifest.inputs),
        outputs=json.dumps(manifest.outputs),
        version=manifest.version,
        wall_time_s=manifest.wall_time_s,
    )
    with Session(engine) as session:
        session.add(record)
        session.commit()
        session.refresh(record)
    return record


def list_runs(engine: Engine, command: str | None = None, limit: int = 20) -> list[RunRecord]:
    """Most recent runs first."""
    with Session(engine) as session:
        query = select(RunRecord)
        if command:
            query = query.where(RunRecord.command == command)
        query = query.order_by(desc(RunRecord.id)).limit(limit)
        return list(session.exec(query).all())


def get_run(engine: Engine, run_id: int) -> RunRecord | None:
    with Session(engine) as session:
        return session.exec(select(RunRecord).where(RunRecord.id == run_id)).first()
