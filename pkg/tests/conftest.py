import re
from collections import defaultdict

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

_ACCEPT = re.compile(r"test_acceptance\.py::test_(A\d)_(\w+)")
_results: dict[str, list[tuple[str, str]]] = defaultdict(list)


def pytest_runtest_logreport(report):
    m = _ACCEPT.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[m.group(1)].append((m.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_results, key=lambda c: int(c[1:])):
        checks = _results[crit]
        failed = [name for name, outcome in checks if outcome != "passed"]
        verdict = "FAIL" if failed else "PASS"
        detail = f"{len(checks) - len(failed)}/{len(checks)} checks passed"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        tr.write_line(f"{crit} {verdict}  ({detail})")
