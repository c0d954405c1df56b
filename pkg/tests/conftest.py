def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
    passed = sum(line.startswith("PASS") for line in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria pass")
