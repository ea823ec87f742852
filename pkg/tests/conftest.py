import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", ""):
                continue
            if rep.when != "call" and not (outcome == "skipped" and rep.when == "setup"):
                continue
            label = dict(getattr(rep, "user_properties", [])).get(
                "criterion", rep.nodeid.split("::")[-1])
            text = f"{outcome.upper():8s} {label}"
            if outcome == "skipped" and isinstance(rep.longrepr, tuple):
                text += f" ({rep.longrepr[2].removeprefix('Skipped: ')})"
            lines.append((rep.nodeid, text))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, text in sorted(lines):
            terminalreporter.write_line(text)
