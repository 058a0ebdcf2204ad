"""Fixtures: a small dataset produced strictly through the toolkit's CLI."""

from __future__ import annotations

import subprocess
import sys

import pytest


def run_toolkit(*args) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "semho.cli", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="session")
def toolkit_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("toolkit")
    data = root / "data.jsonl"
    train = root / "train.jsonl"
    test = root / "test.jsonl"
    schema = root / "schema.json"
    assert run_toolkit("gen", "--seed", "19", "--count", "160", "--out", str(data)).returncode == 0
    assert (
        run_toolkit(
            "split",
            "--in", str(data),
            "--ratio", "0.8",
            "--seed", "19",
            "--train-out", str(train),
            "--test-out", str(test),
        ).returncode
        == 0
    )
    assert run_toolkit("schema", "--out", str(schema)).returncode == 0
    return {"root": root, "data": data, "train": train, "test": test, "schema": schema}
