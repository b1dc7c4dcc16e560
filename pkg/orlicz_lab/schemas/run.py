from datetime import datetime
from typing import Any, Dict, List, Optional, Union
from pydantic import BaseModel, ConfigDict, Field
from enum import Enum

class RunStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"

# Union of the sub-command parameters; the bounds mirror the service preconditions
class CommandParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # norm
    family: Optional[str] = None
    alpha: Optional[float] = Field(None, gt=0.0)
    R: Optional[float] = Field(None, gt=0.0)
    a: Optional[float] = None
    b: Optional[float] = None
    profile: Optional[str] = None
    shift: Optional[float] = Field(None, lt=0.0)
    file: Optional[str] = None
    ds: Optional[float] = Field(None, gt=0.0)
    kappa: Optional[float] = Field(None, gt=0.0)
    # sweep
    probe: Optional[str] = None
    alphas: Optional[List[float]] = None
    betas: Optional[List[float]] = None
    n_list: Optional[List[int]] = None
    alpha_exp: Optional[float] = Field(None, gt=0.0)
    p: Optional[float] = None
    q: Optional[float] = None
    kind: Optional[str] = None
    closed_form: Optional[bool] = None
    require: Optional[bool] = None
    # decompose
    seq: Optional[str] = None
    nmax: Optional[int] = Field(None, ge=1)
    nstep: Optional[int] = Field(None, ge=1)
    count: Optional[int] = Field(None, ge=1)
    l_max: Optional[int] = Field(None, ge=1)
    rem_tol: Optional[float] = Field(None, gt=0.0)
    ortho_threshold: Optional[float] = Field(None, gt=0.0)
    # wave
    data: Optional[str] = None
    c: Optional[float] = Field(None, gt=0.0)
    rho: Optional[float] = Field(None, gt=0.0)
    T: Optional[float] = Field(None, ge=0.0)
    n_r: Optional[int] = Field(None, ge=2)
    dt: Optional[float] = Field(None, gt=0.0)
    cfl: Optional[float] = Field(None, gt=0.0)
    store_every: Optional[int] = Field(None, ge=1)
    # verify and ledger
    only: Optional[str] = None
    ledger: Optional[str] = None
    limit: Optional[int] = Field(None, ge=1)

# Command parameters merged from the config file and the flags
class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: str
    params: CommandParams = Field(default_factory=CommandParams)
    output: Optional[str] = None
    seed: int
    jobs: int = Field(1, ge=1)

# Outcome of one acceptance criterion, before it is persisted
class CriterionOutcome(BaseModel):
    name: str
    success: bool
    runtime: float = Field(..., ge=0.0)
    metrics: Dict[str, Any] = {}
    detail: str = ""

# Base schema with common fields
class VerificationRunBase(BaseModel):
    seed: int
    settings_snapshot: Optional[Dict[str, Union[str, int, float, None]]] = None

# Schema for creating a new run
class VerificationRunCreate(VerificationRunBase):
    pass

# Schema for run response
class VerificationRun(VerificationRunBase):
    model_config = ConfigDict(from_attributes=True)

    id: str = Field(..., pattern="^run_[a-f0-9]{8}$")
    status: RunStatus
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None
    created_at: datetime

# Schema for criterion result response
class CriterionResult(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: str = Field(..., pattern="^cr_[a-f0-9]{8}$")
    run_id: str = Field(..., pattern="^run_[a-f0-9]{8}$")
    name: str
    success: bool
    runtime: float
    metrics: Optional[Dict[str, Any]] = None
    detail: Optional[str] = None
    executed_at: datetime

# Schema for run with criterion results
class VerificationRunWithResults(VerificationRun):
    model_config = ConfigDict(from_attributes=True)

    criterion_results: List[CriterionResult] = []

    @property
    def passed(self) -> bool:
        return all(result.success for result in self.criterion_results)

VerificationRunWithResults.model_rebuild()
