import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bdmorse.instances import make_instance  # noqa: E402

ACCEPTANCE_CASES = [
    ("interval", ("a+", "a-")),
    ("interval", ("a+", "r-")),
    ("interval", ("r+", "a-")),
    ("interval", ("r+", "r-")),
    ("disk", ("a-",)),
    ("disk", ("r-",)),
    ("annulus", ("a+", "r-")),
    ("annulus", ("r+", "a-")),
    ("annulus", ("a+", "a-")),
    ("annulus", ("r+", "r-")),
    ("ball3", ("a+",)),
    ("ball3", ("r+",)),
    ("solid_torus", ("a+",)),
    ("solid_torus", ("r-",)),
]


@functools.lru_cache(maxsize=None)
def instance(name, labels, resolution=None):
    return make_instance(name, list(labels), resolution)


def case_id(case):
    name, labels = case
    return f"{name}[{','.join(labels)}]"


@pytest.fixture(params=ACCEPTANCE_CASES, ids=case_id)
def acceptance_instance(request):
    return instance(*request.param)
