"""
Tests the sweep table wrapper.
"""

from qthermo.data import SweepTable
import os
import pandas as pd
import tempfile
import unittest

df = pd.DataFrame(
    {
        "nbar": [1e8, 1e9, 1e10, 1e11],
        "dt_sq_asym": [4.0, 1.0, 2.0, 8.0],
        "dt_coh_asym": [9.0, 8.0, 7.0, 6.0],
        "dt_pyro": [5.0, 5.0, 5.0, 5.0],
    }
)


class SweepTableTest(unittest.TestCase):
    def test_columns(self):
        table = SweepTable(df)
        self.assertEqual(table.get_length(), 4)
        self.assertEqual(table.bound_columns(), ["dt_sq_asym", "dt_coh_asym", "dt_pyro"])
        self.assertEqual(list(table.get_column("dt_pyro")), [5.0] * 4)

    def test_missing_column(self):
        with self.assertRaises(ValueError):
            SweepTable(df).get_column("dt_exact")

    def test_needs_nbar(self):
        with self.assertRaises(ValueError):
            SweepTable(df.drop(columns=["nbar"]))

    def test_minimum(self):
        table = SweepTable(df)
        self.assertEqual(table.minimum("dt_sq_asym"), (1e9, 1.0))
        self.assertTrue(table.has_interior_minimum("dt_sq_asym"))
        self.assertFalse(table.has_interior_minimum("dt_coh_asym"))

    def test_crossing(self):
        table = SweepTable(df)
        self.assertTrue(table.crosses_below("dt_sq_asym", "dt_pyro"))
        self.assertFalse(table.crosses_below("dt_coh_asym", "dt_pyro"))

    def test_monotone(self):
        self.assertTrue(SweepTable(df).is_nbar_monotone())
        self.assertFalse(SweepTable(df.iloc[::-1]).is_nbar_monotone())

    def test_csv_keeps_full_precision(self):
        table = SweepTable(pd.DataFrame({"nbar": [1.0 / 3.0], "dt_pyro": [2.0 / 3.0]}))
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sweep.csv")
            table.write_csv(path)
            with open(path, "r") as f:
                lines = f.read().splitlines()
            read_back = SweepTable(path)
        self.assertEqual(lines[0], "nbar,dt_pyro")
        self.assertAlmostEqual(read_back.get_column("dt_pyro").iloc[0], 2.0 / 3.0, places=15)

    def test_bad_source(self):
        with self.assertRaises(ValueError):
            SweepTable(42)


if __name__ == "__main__":
    unittest.main()
