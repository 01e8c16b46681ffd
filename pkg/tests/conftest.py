import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

_VERDICTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(item.function, "criterion", None)
    if label is None or rep.when != "call":
        return
    verdict = "PASS" if rep.passed else "FAIL"
    line = f"{verdict} criterion {label[0]}: {label[1]}"
    _VERDICTS.append(line)
    print(f"\n{line}", flush=True)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
