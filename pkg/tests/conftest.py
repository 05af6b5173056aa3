from __future__ import annotations

import re

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    label = m.group(2).replace("_", " ")
    if report.when != "call" and report.passed:
        return
    # a parametrized criterion fails if any of its cases fails
    failed = report.failed or _results.get(num, ("PASS",))[0] == "FAIL"
    _results[num] = ("FAIL" if failed else "PASS", label)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        status, label = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {label}")
