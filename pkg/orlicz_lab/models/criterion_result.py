from sqlalchemy import Column, String, DateTime, ForeignKey, JSON, Boolean, Float, Text
from sqlalchemy.orm import relationship
from datetime import datetime
import uuid

from orlicz_lab.db.base_class import Base

class CriterionResult(Base):
    __tablename__ = "criterion_results"

    id = Column(String, primary_key=True, default=lambda: f"cr_{uuid.uuid4().hex[:8]}")
    run_id = Column(String, ForeignKey("verification_runs.id"), nullable=False)
    name = Column(String, nullable=False)
    success = Column(Boolean, nullable=False)
    runtime = Column(Float, nullable=False)
    metrics = Column(JSON, nullable=True)  # Observed values keyed by quantity
    detail = Column(Text, nullable=True)
    executed_at = Column(DateTime, default=datetime.utcnow)

    # Relationships
    run = relationship("VerificationRun", back_populates="criterion_results")
