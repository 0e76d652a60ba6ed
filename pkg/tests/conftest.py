import pathlib

import pytest

from ibaka.group import load_curve_file

DATA_DIR = pathlib.Path(__file__).parent / "data"
GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def production_curve():
    """A 256-bit curve loaded through the external-parameter path."""
    return load_curve_file(DATA_DIR / "secp256k1.txt")
