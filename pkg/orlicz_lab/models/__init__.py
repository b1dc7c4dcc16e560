from orlicz_lab.models.run import VerificationRun, RunStatus
from orlicz_lab.models.criterion_result import CriterionResult
