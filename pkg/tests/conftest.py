"""Shared fixtures for tests."""

from pathlib import Path
from typing import List

import pytest

from src.cli import main
from src.finite_field import Prime
from src.sequences import Seq, cantor_tilde, make_seq
from src.wall import Wall
from src.wall_engine import generate_wall

SUITES_DIR = Path(__file__).parent / "suites"


@pytest.fixture
def f3() -> Prime:
    return Prime(3)


@pytest.fixture
def f5() -> Prime:
    return Prime(5)


@pytest.fixture
def short_seq() -> Seq:
    """A short finite sequence over F_5 with an interior zero."""
    return make_seq(5, [1, 2, 0, 1, 3, 4, 0, 2, 1])


@pytest.fixture
def cantor_tilde_wall() -> Wall:
    """Wall of {0}_3 + C_1 + {0}_3 over F_3, rows -2..4."""
    return generate_wall(cantor_tilde(3, 1), 4)


@pytest.fixture
def cantor_tilde_wall_2() -> Wall:
    """Wall of {0}_9 + C_2 + {0}_9 over F_3, rows -2..13."""
    return generate_wall(cantor_tilde(3, 2), 13)


@pytest.fixture
def suites_dir() -> Path:
    return SUITES_DIR


@pytest.fixture
def run_cli(monkeypatch):
    """Run the CLI in-process with file logging off; returns the exit status."""
    monkeypatch.setenv("NWALL_SEED", "20240917")

    def run(*args: str) -> int:
        argv: List[str] = ["--no-log-file", "--log-level", "WARNING", *args]
        return main(argv)

    return run
