import os
import random

import pytest
from hypothesis import HealthCheck, settings

from lambdatree.valued_field.fields import FuncFieldTadic, QuadExt, RationalPadic, Rank2Composite

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", max_examples=400, deadline=None, suppress_health_check=list(HealthCheck))
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIELD_FACTORIES = {
    "Q3": lambda: RationalPadic(3),
    "Q5": lambda: RationalPadic(5),
    "Qt": lambda: FuncFieldTadic(),
    "F2t": lambda: FuncFieldTadic(2),
    "rank2": lambda: Rank2Composite(3),
    "quad": lambda: QuadExt(RationalPadic(3), 3),
}

# acceptance criteria record their verdicts here; the summary hook prints one line each
ACCEPTANCE_RESULTS = {}


@pytest.fixture(params=sorted(FIELD_FACTORIES))
def any_field(request):
    return FIELD_FACTORIES[request.param]()


@pytest.fixture
def rng():
    return random.Random(20260418)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.split(".")[0]), k)):
        parts = ACCEPTANCE_RESULTS[key]
        ok = all(p[0] for p in parts)
        details = "; ".join(p[1] for p in parts)
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {details}")
