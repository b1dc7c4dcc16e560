from orlicz_lab.db.base_class import Base

# Import all models here so create_all sees them
from orlicz_lab.models.run import VerificationRun
from orlicz_lab.models.criterion_result import CriterionResult
