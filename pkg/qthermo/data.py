import os
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

"""
Tabular results of an nbar sweep, read from or written to CSV.
"""

NBAR_COLUMN = "nbar"
# Column of each bound kind, in output order
KIND_COLUMNS = {
    "exact-qfi": "dt_exact",
    "asymptotic-squeezed": "dt_sq_asym",
    "asymptotic-coherent": "dt_coh_asym",
    "pyrometer": "dt_pyro",
}
CSV_FLOAT_FORMAT = "%.17g"


class SweepTable(object):
    """Temperature errors per bound kind over a grid of mean photon numbers

    Parameters
    ----------
    source : str, os.PathLike or pd.DataFrame
        A CSV file written by :meth:`write_csv` or a DataFrame with an ``nbar`` column.
    """

    dataset: pd.DataFrame
    data_path: os.PathLike

    def __init__(self, source: Union[str, os.PathLike, pd.DataFrame]):
        if isinstance(source, (str, os.PathLike)):
            self.data_path = source
            df = pd.read_csv(source)
        elif isinstance(source, pd.DataFrame):
            df = source
            self.data_path = None
        else:
            raise ValueError(f"Cannot build a sweep table from {type(source).__name__}")

        if NBAR_COLUMN not in df.columns:
            raise ValueError(f"A sweep table needs an {NBAR_COLUMN} column. Columns: {list(df.columns)}")
        self.dataset = df

    def get_data(self) -> pd.DataFrame:
        return self.dataset

    def get_column(self, name: str) -> pd.Series:
        cols = self.dataset.columns
        if name in cols:
            return self.dataset[name]
        else:
            raise ValueError(f"Column {name} is not part of the sweep table. Columns: {list(cols)}")

    def get_length(self) -> int:
        return len(self.dataset.index)

    def bound_columns(self) -> List[str]:
        return [c for c in self.dataset.columns if c != NBAR_COLUMN]

    def is_nbar_monotone(self) -> bool:
        return bool(np.all(np.diff(self.get_column(NBAR_COLUMN).to_numpy()) > 0))

    # @returns (nbar, value) at the smallest value of column name
    def minimum(self, name: str) -> Tuple[float, float]:
        values = self.get_column(name).to_numpy()
        i = int(np.argmin(values))
        return float(self.get_column(NBAR_COLUMN).iloc[i]), float(values[i])

    def has_interior_minimum(self, name: str) -> bool:
        """True when the smallest value of column ``name`` is at neither end of the grid."""
        values = self.get_column(name).to_numpy()
        i = int(np.argmin(values))
        return 0 < i < len(values) - 1

    def crosses_below(self, name: str, reference: str) -> bool:
        """True when column ``name`` drops below column ``reference`` somewhere on the grid."""
        return bool(np.any(self.get_column(name).to_numpy() < self.get_column(reference).to_numpy()))

    def write_csv(self, path: Union[str, os.PathLike]):
        # Full double precision, header row, no index
        self.dataset.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
