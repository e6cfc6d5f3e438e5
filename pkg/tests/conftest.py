"""Session fixtures shared by the acceptance suite.

Everything expensive is computed once per session and only when a test asks
for it: the full source dataset, the trained stress network, and the FE
reference cache.
"""

from __future__ import annotations

import pytest

from ddmech import data_pipeline as dp
from ddmech.nn_training import LabeledSamples, TrainingConfig, train

ACCEPTANCE_SEED = 0


@pytest.fixture(scope="session")
def acceptance_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


@pytest.fixture(scope="session")
def source_dataset():
    """Full noiseless source rows from the fine-mesh bending solve."""
    return dp.generate_source()


@pytest.fixture(scope="session")
def source_file(acceptance_dir, source_dataset):
    path = acceptance_dir / "source.csv"
    dp.write_dataset(source_dataset, path)
    return str(path)


@pytest.fixture(scope="session")
def scenario_cache():
    """Shared FE reference cache so each (problem, mesh) is solved once."""
    return {}


@pytest.fixture(scope="session")
def stress_model_file(acceptance_dir, source_dataset):
    """Stress-trained network, best of 10 restarts on the full dataset.

    Trained with the default budget (200k epochs, patience 5000): shorter
    budgets leave the selected net accurate on the bending states it was
    fit to but visibly off on the punch extrapolation, so the transfer
    test needs the full protocol.  This is the slow fixture (~25 min).
    """
    samples = LabeledSamples.from_strain_stress(
        source_dataset.strain, stress=source_dataset.stress,
        energy=source_dataset.energy,
    )
    params, _ = train(samples, TrainingConfig(
        loss="stress", restarts=10, seed=ACCEPTANCE_SEED,
    ))
    path = acceptance_dir / "stress_model.txt"
    dp.save_model(params, path)
    return str(path)
