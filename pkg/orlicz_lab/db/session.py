from contextlib import contextmanager
from typing import Iterator

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker

from orlicz_lab.db.base import Base

def make_session_factory(url: str) -> sessionmaker:
    """Engine and session factory for a ledger URL; creates missing tables."""
    engine = create_engine(url, echo=False)
    Base.metadata.create_all(engine)
    return sessionmaker(engine, class_=Session, expire_on_commit=False)

# Scope a session to one unit of work
@contextmanager
def session_scope(factory: sessionmaker) -> Iterator[Session]:
    session = factory()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
