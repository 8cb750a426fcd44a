from pathlib import Path

import pytest

from nfactor import fit_cox, load_csv, stset_reconstruct

DATA_DIR = Path(__file__).parent / "data"
HEART_CSV = DATA_DIR / "stan30.csv"
LINEAR_CSV = DATA_DIR / "linear30.csv"

# Covariate order used throughout: the all-zero surgery column sits third.
COVARIATES = ["age", "posttran", "surgery", "year"]


@pytest.fixture(scope="session")
def heart_dataset():
    return load_csv(HEART_CSV, ["id", "t1", "died", *COVARIATES])


@pytest.fixture(scope="session")
def heart_frame(heart_dataset):
    return stset_reconstruct(heart_dataset, "t1", "died", "id", COVARIATES)


@pytest.fixture(scope="session")
def heart_fit(heart_frame):
    return fit_cox(heart_frame, 1)


@pytest.fixture(scope="session")
def wald_dataset():
    return load_csv(LINEAR_CSV, ["y"])
