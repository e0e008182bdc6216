"""Satellite-link simulator for rotary-wing aircraft.

Pipeline: constellation propagation -> elevation/Doppler/link budget
timelines -> rotor-blade blockage -> slot-level 5G NTN frame simulation
with BER and data-rate reporting.
"""

__version__ = "0.1.0"

from .pipeline import run_scenario, sweep_cnr
from .scenarios import builtin_catalog, load_catalog, resolve_scenario

__all__ = [
    "run_scenario",
    "sweep_cnr",
    "builtin_catalog",
    "load_catalog",
    "resolve_scenario",
    "__version__",
]
