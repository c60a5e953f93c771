from datetime import datetime, timezone

from sqlalchemy import Column, DateTime, Float, Index, Integer, String, Text

from ..database import Base


class CacheEntry(Base):
    __tablename__ = "cache_entries"

    id = Column(Integer, primary_key=True, index=True)
    kind = Column(String, nullable=False)  # relation, decoupling
    cache_key = Column(String, nullable=False, index=True)
    family = Column(String, nullable=False)
    n = Column(Integer, nullable=False)
    weight = Column(Integer, nullable=False)
    document = Column(Text, nullable=False)  # JSON RelationDocument / DecouplingDocument
    created_at = Column(DateTime, default=lambda: datetime.now(timezone.utc))

    __table_args__ = (
        Index("ix_cache_kind_key", "kind", "cache_key"),
    )


class RunLog(Base):
    __tablename__ = "run_log"

    id = Column(Integer, primary_key=True, index=True)
    timestamp = Column(DateTime, default=lambda: datetime.now(timezone.utc))
    command = Column(String, nullable=False)
    args_hash = Column(String, nullable=True)
    status = Column(String, nullable=False)  # ok, failed, error
    exit_code = Column(Integer, nullable=False)
    elapsed_ms = Column(Float, nullable=False)
    result_digest = Column(String, nullable=True)
