import sys
from pathlib import Path

from hypothesis import settings

# fixed seeds so a saved test log can be reproduced line for line
settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[num])
