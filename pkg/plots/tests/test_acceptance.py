"""Acceptance gate for the plots package."""

import pytest

from gilbertlab_plots import FigureSpec, render
from gilbertlab_plots.cli import main as cli_main

from test_figures import spec_for

pytestmark = pytest.mark.acceptance


def test_all_four_kinds_render_from_shipped_outputs(samples, tmp_path):
    """Every figure kind renders the shipped dataset without modification."""
    for kind in ("theta-curves", "lambda-crossing", "pivotal-ratio", "gap"):
        out = tmp_path / f"{kind}.svg"
        render(spec_for(kind, samples, out))
        assert out.stat().st_size > 2000, kind


def test_corrupted_csv_fails_naming_the_column(samples, tmp_path, capsys):
    """A deliberately corrupted sweep fails with the offending column named."""
    lines = (samples / "theta" / "sweep.csv").read_text().splitlines()
    header = lines[0].split(",")
    drop = header.index("se")
    bad = tmp_path / "sweep.csv"
    bad.write_text("\n".join(
        ",".join(tok for k, tok in enumerate(line.split(",")) if k != drop)
        for line in lines) + "\n")
    code = cli_main(["theta-curves", "--input", str(bad),
                     "--out", str(tmp_path / "fig.svg")])
    assert code == 3
    err = capsys.readouterr().err
    assert "'se'" in err
    assert not (tmp_path / "fig.svg").exists()
