"""Tabular files."""

from .grids import CdfTable, DensityTable
from .samples import SampleTable, SignalTable
from .tables import (
    ConnectionTable,
    StabilityTable,
    Table1Table,
    TopoCountsTable,
    TopoMomentsTable,
)
