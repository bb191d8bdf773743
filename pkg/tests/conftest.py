import re

_AC = re.compile(r"test_ac(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    lines = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call" and status != "error":
                continue
            m = _AC.search(getattr(rep, "nodeid", ""))
            if m:
                n = int(m.group(1))
                prev = lines.get(n, ("passed", m.group(2), 0.0))
                ok = prev[0] == "passed" and status == "passed"
                lines[n] = ("passed" if ok else "failed", m.group(2), prev[2] + getattr(rep, "duration", 0.0))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        status, name, dur = lines[n]
        verdict = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"AC{n:>2} {verdict}  {name.replace('_', ' ')}  ({dur:.2f}s)")
