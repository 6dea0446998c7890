import shutil

import pytest

from shiftup.artifacts.store import load_bundle
from shiftup.fixtures import snackbar_root


@pytest.fixture(scope="session")
def fixture_root():
    """The packaged snack-bar bundle, read-only."""
    return snackbar_root()


@pytest.fixture(scope="session")
def fixture_bundle(fixture_root):
    return load_bundle(fixture_root)


@pytest.fixture()
def bundle_root(tmp_path, fixture_root):
    """Writable copy of the snack-bar bundle for mutating scenarios."""
    root = tmp_path / "snackbar"
    shutil.copytree(fixture_root, root)
    return root
