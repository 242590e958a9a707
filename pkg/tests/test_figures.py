import numpy as np
import pytest

from topopolariton import io
from topopolariton.figures import FIGURES, reproduce

CHEAP = ["fig1-inset", "fig2", "fig3a", "fig3b", "fig3d", "fig3e", "fig4c", "figS2", "figS4"]


def test_every_panel_has_a_pipeline():
    expected = {"fig1-inset", "fig2", "figS2", "figS3", "figS4"}
    expected |= {f"fig3{c}" for c in "abcdef"} | {f"fig4{c}" for c in "abc"} | {f"fig5{c}" for c in "abc"}
    assert set(FIGURES) == expected


@pytest.mark.parametrize("fig", CHEAP)
def test_cheap_pipelines(tmp_path, fig):
    ctx = reproduce(fig, tmp_path)
    assert ctx.written and all(p.exists() for p in ctx.written)
    for p in ctx.written:
        cols = io.read_csv(p)
        assert all(len(c) for c in cols.values())


def test_fig2_summary(tmp_path):
    ctx = reproduce("fig2", tmp_path)
    plus, minus = ctx.summary["polaritons"]
    assert plus.real > 0 > minus.real
    assert 0.3 < ctx.summary["polariton_decay"] < 0.7


def test_disorder_pipeline_small(tmp_path):
    ctx = reproduce("fig5c", tmp_path, n_realizations=2)
    cols = io.read_csv(tmp_path / "frequencies.csv")
    assert len(cols["mean"]) == 15 and np.all(cols["failed"] == 0)


def test_unknown_figure(tmp_path):
    with pytest.raises(KeyError):
        reproduce("fig9", tmp_path)
