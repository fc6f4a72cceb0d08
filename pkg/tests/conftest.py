"""Shared fixtures.

The expensive piece is ``acceptance_run``: one full training run on the
synthetic corpus, session scoped so the end-to-end, streaming and server
tests all reuse the same trained model instead of retraining.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from signstream import (
    Architecture,
    ConvSpec,
    GestureNet,
    TrainConfig,
    encode_dataset,
    generate_dataset,
    save_weights,
    train,
)

# Small enough for exhaustive finite-difference sweeps and fast unit tests.
SMALL_ARCH = Architecture(conv=(ConvSpec(4, pool=True), ConvSpec(4)), hidden=8)


@pytest.fixture
def small_arch() -> Architecture:
    return SMALL_ARCH


@pytest.fixture
def small_model() -> GestureNet:
    return GestureNet(SMALL_ARCH, seed=3)


@pytest.fixture(scope="session")
def tiny_weights_path(tmp_path_factory):
    """A valid weight file for an untrained small model (format tests, CLI)."""
    path = tmp_path_factory.mktemp("weights") / "tiny.gstr"
    save_weights(GestureNet(SMALL_ARCH, seed=3), path)
    return path


@pytest.fixture(scope="session")
def acceptance_run(tmp_path_factory):
    """Train the default network on the synthetic corpus once per session.

    Returns the trained model plus everything the acceptance checks need:
    the report, both datasets, the wall-clock training time and a saved
    weight file.
    """
    train_set = encode_dataset(generate_dataset(seed=7, captures_per_class=10))
    heldout = encode_dataset(generate_dataset(seed=8, captures_per_class=3))
    model = GestureNet(seed=7)
    cfg = TrainConfig(learning_rate=1e-4, epochs=150, seed=7)
    started = time.perf_counter()
    model, report = train(model, train_set, heldout, cfg)
    elapsed_s = time.perf_counter() - started
    weights_path = tmp_path_factory.mktemp("trained") / "acceptance.gstr"
    save_weights(model, weights_path)
    return {
        "model": model,
        "report": report,
        "train_set": train_set,
        "heldout": heldout,
        "elapsed_s": elapsed_s,
        "weights_path": weights_path,
    }


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# Filled in by the acceptance tests; echoed after the run so the verdict for
# each top-level criterion is visible even when everything passes.
ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
