import pytest

from orlicz_lab.core.config import Settings
from orlicz_lab.core.exceptions import ConfigurationError, PreconditionError
from orlicz_lab.db.session import make_session_factory, session_scope
from orlicz_lab.models.criterion_result import CriterionResult
from orlicz_lab.schemas.run import CriterionOutcome, RunStatus, VerificationRunCreate
from orlicz_lab.services import ledger
from orlicz_lab.services.verification import CRITERIA, run_suite


def outcomes(*flags):
    return [
        CriterionOutcome(name=f"c{i}", success=ok, runtime=0.1 * i, metrics={"value": float(i)})
        for i, ok in enumerate(flags)
    ]


def test_create_run_starts_running(db):
    run = ledger.create_run(db, VerificationRunCreate(seed=7, settings_snapshot={"kappa": 1.0}))
    assert run.id.startswith("run_")
    assert run.status == RunStatus.RUNNING
    assert run.started_at is not None
    assert run.finished_at is None


def test_record_outcomes_completes_run(db):
    run = ledger.create_run(db, VerificationRunCreate(seed=7))
    stored = ledger.record_outcomes(db, run.id, outcomes(True, True))
    assert stored.status == RunStatus.COMPLETED
    assert stored.passed
    by_name = {r.name: r for r in stored.criterion_results}
    assert sorted(by_name) == ["c0", "c1"]
    assert all(r.id.startswith("cr_") for r in stored.criterion_results)
    assert by_name["c1"].metrics == {"value": 1.0}


def test_any_failure_marks_run_failed(db):
    run = ledger.create_run(db, VerificationRunCreate(seed=7))
    stored = ledger.record_outcomes(db, run.id, outcomes(True, False))
    assert stored.status == RunStatus.FAILED
    assert not stored.passed


def test_unknown_run_is_rejected(db):
    with pytest.raises(PreconditionError):
        ledger.read_run(db, "run_00000000")
    with pytest.raises(PreconditionError):
        ledger.record_outcomes(db, "run_00000000", [])


def test_list_and_summarise_runs(db):
    for seed in (1, 2, 3):
        run = ledger.create_run(db, VerificationRunCreate(seed=seed))
        ledger.record_outcomes(db, run.id, outcomes(True, seed != 2))
    runs = ledger.list_runs(db)
    assert len(runs) == 3
    assert len(ledger.list_runs(db, limit=2)) == 2
    rows = {row["seed"]: row for row in ledger.summary_rows(runs)}
    assert rows[1]["criteria"] == 2 and rows[1]["passed"] == 2
    assert rows[2]["status"] == "failed" and rows[2]["passed"] == 1


def test_delete_cascades_to_results(db):
    run = ledger.create_run(db, VerificationRunCreate(seed=7))
    ledger.record_outcomes(db, run.id, outcomes(True, True))
    ledger.delete_run(db, run.id)
    assert db.query(CriterionResult).count() == 0
    with pytest.raises(PreconditionError):
        ledger.read_run(db, run.id)


def test_run_suite_writes_the_ledger(tmp_path):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    results = run_suite(["bmo"], Settings(), 1, url)
    assert [r.name for r in results] == ["bmo"]
    with session_scope(make_session_factory(url)) as session:
        runs = ledger.list_runs(session)
    assert len(runs) == 1
    assert runs[0].criterion_results[0].name == "bmo"
    assert runs[0].settings_snapshot["seed"] == Settings().seed


def test_run_suite_rejects_unknown_criteria():
    with pytest.raises(ConfigurationError):
        run_suite(["no-such-criterion"])


def test_registry_names():
    assert list(CRITERIA) == [
        "orlicz-limit",
        "small-alpha",
        "closed-form",
        "tail-integrals",
        "concentration",
        "moser-sharpness",
        "max-law",
        "stability",
        "bmo",
        "wave",
        "properties",
    ]
