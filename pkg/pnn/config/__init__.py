"""Pipeline configurations."""

from .dictionary import DictionaryConfig
from .main import PipelineConfig
from .sampling import KmdConfig, StandingWaveConfig
