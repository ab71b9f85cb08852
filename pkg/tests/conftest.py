import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> list of (ok, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, list] = {}
ACCEPTANCE_TITLES = {
    1: "exact fixtures",
    2: "inequality suite",
    3: "sharpness limits",
    4: "equality cases",
    5: "four-point hyperbolicity",
    6: "oracle equivalence",
    7: "ball corollaries and intersection",
    8: "non-monotonicity of u",
    9: "conjecture exploration (report only)",
}


@pytest.fixture
def record():
    """``record(criterion, ok, detail)`` adds one line to the acceptance summary."""

    def _record(criterion: int, ok: bool, detail: str = ""):
        ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_TITLES):
        rows = ACCEPTANCE.get(k)
        if not rows:
            tr.write_line(f"criterion {k} ({ACCEPTANCE_TITLES[k]}): NOT RUN")
            continue
        ok = all(r[0] for r in rows)
        details = "; ".join(d for _, d in rows if d)
        tr.write_line(f"criterion {k} ({ACCEPTANCE_TITLES[k]}): {'PASS' if ok else 'FAIL'}  {details}")
