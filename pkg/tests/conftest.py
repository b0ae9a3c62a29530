"""Collects acceptance-criterion outcomes and prints one line per criterion."""

_results = []


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        detail = props.get("detail", "")
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2]
        _results.append(f"{outcome}  {props['criterion']}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if _results:
        terminalreporter.section("acceptance criteria")
        for line in _results:
            terminalreporter.write_line(line)
