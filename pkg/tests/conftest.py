import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance_log.RESULTS):
        status, title, detail = acceptance_log.RESULTS[number]
        line = f"CRITERION {number} {status}: {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
