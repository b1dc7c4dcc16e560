from orlicz_lab.schemas.grid import LogGrid, RadialFunction, NormReport, TailMassReport, Resampled
from orlicz_lab.schemas.orlicz import (
    OrliczConfig,
    MoserProbeReport,
    SandwichReport,
    MomentBoundRow,
)
from orlicz_lab.schemas.profile import Profile, ScaledBubble
from orlicz_lab.schemas.trend import TrendReport, ProfileBoundsReport
from orlicz_lab.schemas.decomposition import (
    ExtractionConfig,
    RadialSequence,
    ScaleDetection,
    OrthogonalityReport,
    CompactnessReport,
    BubbleRecord,
    DecompositionResult,
)
from orlicz_lab.schemas.inequalities import (
    LogIneqReport,
    RadialBoundReport,
    BMOProbeReport,
)
from orlicz_lab.schemas.wave import (
    RGrid,
    WaveState,
    CauchyData,
    EnergyReport,
    WaveConfig,
    Trajectory,
    Regime,
    EvolutionMode,
)
from orlicz_lab.schemas.run import (
    CommandParams,
    RunConfig,
    RunStatus,
    CriterionOutcome,
    VerificationRun,
    VerificationRunWithResults,
    CriterionResult,
)
