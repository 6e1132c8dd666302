from __future__ import annotations

import sys
from pathlib import Path

import pytest

from closurium.spaces import GraphSpace, KripkeFrame, SpaceModel

MODELS = Path(__file__).resolve().parents[1] / "models"

FOUR_GAMMA = {0: [3], 1: [2, 3], 2: [2], 3: [3]}


def chain(n: int) -> GraphSpace:
    return GraphSpace(range(n), [(i, i + 1) for i in range(n - 1)])


def four_frame(closure: str = "pre") -> KripkeFrame:
    return KripkeFrame(range(4), FOUR_GAMMA, closure)


def sub(space, *points):
    return space.algebra.subset(points)


@pytest.fixture
def chain3() -> GraphSpace:
    return chain(3)


@pytest.fixture
def four() -> KripkeFrame:
    return four_frame("pre")


@pytest.fixture
def four_model(four) -> SpaceModel:
    return SpaceModel(four, {"a": sub(four, 2, 3)})


@pytest.fixture
def models_dir() -> Path:
    return MODELS


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
