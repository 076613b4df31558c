import numpy as np
import pytest

from sddnet import (
    BoundsError,
    InputError,
    ParseError,
    StructureError,
    TimeSeriesPanel,
    demean,
    load_panel,
    segment,
    write_panel,
)


def _csv(tmp_path, text, name="x.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_rows_are_time(tmp_path):
    x = load_panel(_csv(tmp_path, "1,2\n3,4\n5,6\n"))
    assert (x.n, x.p) == (3, 2)
    np.testing.assert_array_equal(x.data, [[1, 2], [3, 4], [5, 6]])
    assert x.condition_label == "x"


def test_rows_are_channels(tmp_path):
    x = load_panel(_csv(tmp_path, "1,2\n3,4\n5,6\n"), layout="rows_are_channels")
    assert (x.n, x.p) == (2, 3)
    np.testing.assert_array_equal(x.data, [[1, 3, 5], [2, 4, 6]])


def test_non_numeric_row_reports_location(tmp_path):
    with pytest.raises(ParseError) as err:
        load_panel(_csv(tmp_path, "1,2\na,b\n"), header=False)
    assert err.value.row == 2 and err.value.column == 1
    with pytest.raises(ParseError) as err:
        load_panel(_csv(tmp_path, "a,b\n"), header=False)
    assert err.value.row == 1
    assert "row 1" in str(err.value)


def test_header_autodetect(tmp_path):
    x = load_panel(_csv(tmp_path, "Fz,Cz\n1,2\n3,4\n"))
    assert x.channel_names == ("Fz", "Cz")
    assert x.n == 2


def test_ragged_and_nonfinite(tmp_path):
    with pytest.raises(StructureError):
        load_panel(_csv(tmp_path, "1,2\n3\n"))
    with pytest.raises(ParseError):
        load_panel(_csv(tmp_path, "1,2\n3,nan\n"))
    with pytest.raises(StructureError):
        load_panel(_csv(tmp_path, "\n"))
    with pytest.raises(InputError):
        load_panel(_csv(tmp_path, "1,2\n3,4\n"), layout="columns")


def test_panel_validation():
    with pytest.raises(InputError):
        TimeSeriesPanel(np.zeros((1, 3)))
    with pytest.raises(InputError):
        TimeSeriesPanel(np.array([[0.0, np.inf], [1.0, 2.0]]))
    x = TimeSeriesPanel(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        x.data[0, 0] = 1.0


def test_roundtrip(tmp_path, rng):
    x = TimeSeriesPanel(rng.standard_normal((17, 4)), channel_names=("a", "b", "c", "d"))
    write_panel(x, tmp_path / "p.csv")
    y = load_panel(tmp_path / "p.csv")
    np.testing.assert_array_equal(x.data, y.data)
    assert y.channel_names == x.channel_names


def test_demean():
    x = TimeSeriesPanel(np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]))
    np.testing.assert_allclose(demean(x).data, [[-1, 0], [0, 0], [1, 0]])


def test_segment(rng):
    x = TimeSeriesPanel(rng.standard_normal((10, 2)))
    s = segment(x, 0, 5)
    np.testing.assert_array_equal(s.data, x.data[:5])
    assert segment(x, 0, 10) == x
    for a, b in ((5, 5), (-1, 3), (3, 11), (4, 5)):
        with pytest.raises(BoundsError):
            segment(x, a, b)
