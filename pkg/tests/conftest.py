import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

from synthdata import generate_dataset  # noqa: E402


@pytest.fixture(scope="session")
def synth_manifest(tmp_path_factory) -> Path:
    """Manifest path of the bundled 3-song synthetic dataset."""
    root = tmp_path_factory.mktemp("synth-dataset")
    return generate_dataset(root)


@pytest.fixture(scope="session")
def echo_adapter_cmd(synth_manifest) -> str:
    """Subprocess command for the perfect-echo stub adapter."""
    script = TESTS_DIR / "adapters" / "echo_adapter.py"
    return f"{sys.executable} {script} --data {synth_manifest.parent}"
