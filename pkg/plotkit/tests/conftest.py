import pytest

from plot_support import run_qmc


@pytest.fixture(scope="session")
def preset_csvs(tmp_path_factory):
    """fig2a/fig2b CSVs produced through the public CLI, once per session."""
    root = tmp_path_factory.mktemp("sweeps")
    paths = {}
    for preset in ("fig2a", "fig2b"):
        out = str(root / f"{preset}.csv")
        proc = run_qmc("sweep", "--preset", preset, "--out", out)
        assert proc.returncode == 0, proc.stderr
        paths[preset] = out
    return paths
