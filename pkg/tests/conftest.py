"""Collects the per-criterion [Cxx] PASS/FAIL lines emitted by the
acceptance tests and echoes them after the normal pytest summary, so the
one-line verdicts are visible even for passing tests."""


def pytest_configure(config):
    config._criterion_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
