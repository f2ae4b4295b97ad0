import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracle.py importable

from phlandmarks import _reduction


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    # compile (or load cached) kernels once so timed tests measure work,
    # not compilation
    _reduction.warmup()
