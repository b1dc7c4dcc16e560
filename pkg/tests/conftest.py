import logging

import numpy as np
import pytest

from orlicz_lab.core import logging as lab_logging
from orlicz_lab.core.config import get_settings
from orlicz_lab.db.session import make_session_factory, session_scope
from orlicz_lab.schemas.grid import LogGrid
from orlicz_lab.schemas.orlicz import OrliczConfig
from orlicz_lab.schemas.wave import RGrid
from orlicz_lab.services import lions_family
from orlicz_lab.services.radial_core import sample_from_closure


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
    # handlers keep the stream that was current when they were installed
    root = logging.getLogger("orlicz_lab")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    lab_logging._configured = False


@pytest.fixture
def ocfg():
    return OrliczConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(get_settings().seed)


@pytest.fixture
def fine_grid():
    # kinks of f_alpha at s = 0 and s = alpha fall on nodes for integer alpha
    return LogGrid.from_spacing(-2.0, 50.0, 1.0 / 1024.0)


@pytest.fixture
def lions5(fine_grid):
    return sample_from_closure(lions_family.lions_f(5.0), fine_grid)


@pytest.fixture
def wave_grid():
    return RGrid(R=2.5, n_r=1024)


@pytest.fixture
def db():
    factory = make_session_factory("sqlite://")
    with session_scope(factory) as session:
        yield session
