import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@dataclass
class CliResult:
    code: int
    out: str
    err: str


def invoke_cli(*argv: str) -> CliResult:
    from scenq.cli import main

    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
    except SystemExit as exc:  # argparse errors
        code = exc.code if isinstance(exc.code, int) else 2
    return CliResult(code, out.getvalue(), err.getvalue())


@pytest.fixture
def run_cli():
    return invoke_cli


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def base_path() -> str:
    return str(FIXTURES / "mexico-base.json")


@pytest.fixture
def gmo_csv_path() -> str:
    return str(FIXTURES / "gmo.intersections.csv")


@pytest.fixture
def gmo_extended_path() -> str:
    return str(FIXTURES / "gmo-extended.json")
