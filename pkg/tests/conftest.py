from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def rel_close(x, y, rtol):
    fx, fy = float(x), float(y)
    return abs(fx - fy) <= rtol * max(abs(fx), abs(fy))


@pytest.fixture
def fast_config():
    from hidden_dynamics import IntegratorConfig
    return IntegratorConfig()
