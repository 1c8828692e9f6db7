"""CSV loading, column-kind inference, and dataset descriptors."""

import numpy as np
import pytest

from valsweep import tabular
from valsweep.errors import (
    FileUnreadable,
    MissingTargetColumn,
    NonBinaryTarget,
    SingleClassTarget,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


class TestLoadCsv:
    def test_kind_inference(self, tmp_path):
        path = write(tmp_path, "a,b,y\n1,x,0\n2,z,1\n")
        ds = tabular.load_csv(path, "y")
        assert set(ds.numeric) == {"a"}
        assert set(ds.categorical) == {"b"}
        assert ds.target.tolist() == [0, 1]

    def test_non_binary_target(self, tmp_path):
        path = write(tmp_path, "a,y\n1,0\n2,2\n")
        with pytest.raises(NonBinaryTarget):
            tabular.load_csv(path, "y")

    def test_float_target_tokens(self, tmp_path):
        path = write(tmp_path, "a,y\n1,0.0\n2,1.0\n")
        ds = tabular.load_csv(path, "y")
        assert ds.target.tolist() == [0, 1]

    def test_missing_target_column(self, tmp_path):
        path = write(tmp_path, "a,y\n1,0\n2,1\n")
        with pytest.raises(MissingTargetColumn, match="z"):
            tabular.load_csv(path, "z")

    def test_single_class(self, tmp_path):
        path = write(tmp_path, "a,y\n1,0\n2,0\n")
        with pytest.raises(SingleClassTarget):
            tabular.load_csv(path, "y")

    def test_unreadable(self):
        with pytest.raises(FileUnreadable):
            tabular.load_csv("/no/such/file.csv", "y")

    def test_empty_file(self, tmp_path):
        with pytest.raises(FileUnreadable):
            tabular.load_csv(write(tmp_path, ""), "y")

    def test_duplicate_columns(self, tmp_path):
        with pytest.raises(FileUnreadable):
            tabular.load_csv(write(tmp_path, "a,a,y\n1,2,0\n3,4,1\n"), "y")

    def test_missing_tokens(self, tmp_path):
        path = write(tmp_path, "a,b,y\n1,u,0\nNA,,1\n,v,0\n")
        ds = tabular.load_csv(path, "y")
        assert np.isnan(ds.numeric["a"][1]) and np.isnan(ds.numeric["a"][2])
        assert ds.categorical["b"][1] is None

    def test_columns_read_only(self, tmp_path):
        ds = tabular.load_csv(write(tmp_path, "a,y\n1,0\n2,1\n"), "y")
        with pytest.raises(ValueError):
            ds.target[0] = 1
        with pytest.raises(ValueError):
            ds.numeric["a"][0] = 9.0


class TestRoundTrip:
    def test_save_load_identical(self, tmp_path):
        src = write(
            tmp_path,
            "num,cat,y\n1.5,red,0\nNA,blue,1\n-2,,0\n0.25,red,1\n",
        )
        ds = tabular.load_csv(src, "y")
        out = str(tmp_path / "round.csv")
        tabular.save_csv(ds, out)
        ds2 = tabular.load_csv(out, "y")
        assert ds2.feature_names == ds.feature_names
        assert ds2.column_kinds() == ds.column_kinds()
        assert np.array_equal(ds2.target, ds.target)
        assert np.array_equal(ds2.numeric["num"], ds.numeric["num"],
                              equal_nan=True)
        assert list(ds2.categorical["cat"]) == list(ds.categorical["cat"])


class TestDescriptors:
    @pytest.mark.parametrize("targets,expected", [
        ([0, 1], 0.5),
        ([1, 1, 1, 0], 0.75),
        ([0, 0, 0, 0, 0, 0, 0, 1, 1, 1], 0.3),
    ])
    def test_prevalence(self, tmp_path, targets, expected):
        text = "a,y\n" + "".join(f"{i},{t}\n" for i, t in enumerate(targets))
        ds = tabular.load_csv(write(tmp_path, text), "y")
        assert tabular.prevalence(ds) == expected

    def test_class_counts(self, tmp_path):
        ds = tabular.load_csv(write(tmp_path, "a,y\n1,0\n2,1\n3,1\n"), "y")
        assert tabular.class_counts(ds) == (1, 2)

    def test_counts_sum_and_prevalence_consistency(self, tmp_path):
        ds = tabular.load_csv(
            write(tmp_path, "a,y\n" + "".join(
                f"{i},{i % 3 == 0:d}\n" for i in range(30))), "y")
        c0, c1 = tabular.class_counts(ds)
        assert c0 + c1 == ds.row_count
        assert tabular.prevalence(ds) == c1 / ds.row_count
