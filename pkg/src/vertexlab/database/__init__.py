import os
from functools import lru_cache

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

DATABASE_NAME = "vertexlab.db"

Base = declarative_base()


def database_url(cache_dir: str) -> str:
    return f"sqlite:///{os.path.join(os.path.abspath(cache_dir), DATABASE_NAME)}"


@lru_cache(maxsize=None)
def get_session_factory(cache_dir: str) -> sessionmaker:
    """Session factory for the result store under ``cache_dir``, created on first use."""
    os.makedirs(cache_dir, exist_ok=True)
    engine = create_engine(
        database_url(cache_dir),
        connect_args={"check_same_thread": False},
        pool_pre_ping=True,
    )
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


def init_db(cache_dir: str) -> sessionmaker:
    """Create the tables (if missing) and return the session factory."""
    from .. import models  # noqa: F401  registers the tables on Base

    factory = get_session_factory(cache_dir)
    Base.metadata.create_all(bind=factory.kw["bind"])
    return factory


def get_db(cache_dir: str):
    db = init_db(cache_dir)()
    try:
        yield db
    finally:
        db.close()
