import json

import numpy as np
import pytest

from qint.cli import main


@pytest.fixture
def run_cli(tmp_path, capsys):
    """Run the CLI in-process; returns (exit code, parsed JSON report or None, stdout)."""

    def run(*argv, json_out=True):
        args = list(map(str, argv))
        out = tmp_path / f"report{len(list(tmp_path.iterdir()))}.json"
        if json_out:
            args += ["--out", str(out)]
        code = main(args)
        text = capsys.readouterr().out
        report = json.loads(out.read_text()) if json_out and out.exists() else None
        return code, report, text

    return run


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    lines = [RESULTS[k] for k in sorted(RESULTS)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
