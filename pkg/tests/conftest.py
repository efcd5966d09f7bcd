def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, report
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        terminalreporter.write_line(report(RESULTS))
