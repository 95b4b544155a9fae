import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from ntg import Rgs, parse_fo, parse_rgs

DATA = pathlib.Path(__file__).parent / "data"


def load_rgs(name: str) -> Rgs:
    return parse_rgs((DATA / name).read_text())


@pytest.fixture(scope="session")
def fix_n():
    return load_rgs("n.rgs")


@pytest.fixture(scope="session")
def fix_triv():
    return load_rgs("triv.rgs")


@pytest.fixture(scope="session")
def fix_r0():
    return load_rgs("r0.rgs")


@pytest.fixture(scope="session")
def fix_r1():
    return load_rgs("r1.rgs")


@pytest.fixture(scope="session")
def sharing_chain():
    """The four sharing-chain fixtures, most shared first."""
    return [load_rgs(f"chain_{x}.rgs") for x in "abcd"]


@pytest.fixture(scope="session")
def n_flattened():
    return parse_fo((DATA / "n_flattened.fo").read_text())


@pytest.fixture(scope="session")
def tree_corpus(fix_n, fix_triv, fix_r0, sharing_chain):
    """Every tree-shaped specification in the corpus (shared ones unfolded)."""
    from ntg import unfold_to_ntg

    return [fix_n, fix_triv, unfold_to_ntg(fix_r0).rgs] + sharing_chain
