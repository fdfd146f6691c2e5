"""Workflows."""

from .density import DensityWorkflow, EcdfWorkflow
from .estimate import EstimateWorkflow, TopoWorkflow
from .kmd import KmdWorkflow
from .learn import LearnWorkflow
from .simulate import SimulateWorkflow
from .table1 import Table1Workflow
