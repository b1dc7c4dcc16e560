"""Persistence of acceptance-suite runs."""
import logging
from datetime import datetime
from typing import Dict, List, Optional, Sequence

from sqlalchemy import select
from sqlalchemy.orm import Session, selectinload

from orlicz_lab.core.exceptions import PreconditionError
from orlicz_lab.models.criterion_result import CriterionResult
from orlicz_lab.models.run import RunStatus, VerificationRun
from orlicz_lab.schemas.run import (
    CriterionOutcome,
    VerificationRun as VerificationRunSchema,
    VerificationRunCreate,
    VerificationRunWithResults,
)

logger = logging.getLogger(__name__)


def create_run(db: Session, run_in: VerificationRunCreate) -> VerificationRunSchema:
    """
    Create a new verification run in the running state.

    Args:
        db: Open session.
        run_in: The run to create.

    Returns:
        The created run.
    """
    db_run = VerificationRun(
        seed=run_in.seed,
        settings_snapshot=run_in.settings_snapshot,
        status=RunStatus.RUNNING,
        started_at=datetime.utcnow(),
    )
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    logger.info("ledger run %s started", db_run.id)
    return VerificationRunSchema.model_validate(db_run)


def record_outcomes(db: Session, run_id: str, outcomes: Sequence[CriterionOutcome]) -> VerificationRunWithResults:
    """
    Attach criterion outcomes to a run and close it.

    Args:
        db: Open session.
        run_id: The ID of the run.
        outcomes: Outcomes in execution order.

    Returns:
        The run with its results; completed when every criterion passed.
    """
    run = db.get(VerificationRun, run_id)
    if run is None:
        raise PreconditionError(f"run {run_id} not found")

    for outcome in outcomes:
        db.add(
            CriterionResult(
                run_id=run_id,
                name=outcome.name,
                success=outcome.success,
                runtime=outcome.runtime,
                metrics=outcome.metrics,
                detail=outcome.detail,
            )
        )
    run.status = RunStatus.COMPLETED if all(o.success for o in outcomes) else RunStatus.FAILED
    run.finished_at = datetime.utcnow()
    db.commit()
    logger.info("ledger run %s closed as %s", run_id, run.status.value)
    return read_run(db, run_id)


def read_run(db: Session, run_id: str) -> VerificationRunWithResults:
    """
    Get a run by ID.

    Args:
        db: Open session.
        run_id: The ID of the run to get.

    Returns:
        The run with its results.
    """
    query = select(VerificationRun).options(selectinload(VerificationRun.criterion_results)).where(
        VerificationRun.id == run_id
    )
    run = db.execute(query).scalar_one_or_none()
    if run is None:
        raise PreconditionError(f"run {run_id} not found")
    return VerificationRunWithResults.model_validate(run)


def list_runs(db: Session, limit: Optional[int] = None) -> List[VerificationRunWithResults]:
    """Most recent runs first."""
    query = (
        select(VerificationRun)
        .options(selectinload(VerificationRun.criterion_results))
        .order_by(VerificationRun.created_at.desc())
    )
    if limit is not None:
        query = query.limit(limit)
    return [VerificationRunWithResults.model_validate(run) for run in db.execute(query).scalars()]


def delete_run(db: Session, run_id: str) -> VerificationRunSchema:
    """Delete a run together with its criterion results."""
    run = db.get(VerificationRun, run_id)
    if run is None:
        raise PreconditionError(f"run {run_id} not found")
    deleted = VerificationRunSchema.model_validate(run)
    db.delete(run)
    db.commit()
    return deleted


def summary_rows(runs: Sequence[VerificationRunWithResults]) -> List[Dict[str, object]]:
    rows = []
    for run in runs:
        results = run.criterion_results
        rows.append(
            {
                "id": run.id,
                "status": run.status.value,
                "seed": run.seed,
                "created_at": run.created_at.isoformat(timespec="seconds"),
                "criteria": len(results),
                "passed": sum(1 for r in results if r.success),
            }
        )
    return rows
