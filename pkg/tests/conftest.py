import pytest

from naap.dataset import synthetic_naap, write_csv


@pytest.fixture(scope="session")
def naap_data():
    dataset, schemes = synthetic_naap(seed=3)
    return dataset, schemes


@pytest.fixture(scope="session")
def naap_csv(tmp_path_factory, naap_data):
    path = tmp_path_factory.mktemp("data") / "naap440e.csv"
    write_csv(naap_data[0], path)
    return path
