from .models import GeneratorKind, PeriodicGenerators, PeriodicityReport, ProjectorPowerDefects
from .service import (
    cyclic_generators,
    make_cyclic_generator,
    periodic_meta_factorize,
    projector_power_defects,
    verify_periodicity,
)

__all__ = [
    "GeneratorKind",
    "PeriodicGenerators",
    "PeriodicityReport",
    "ProjectorPowerDefects",
    "cyclic_generators",
    "make_cyclic_generator",
    "periodic_meta_factorize",
    "projector_power_defects",
    "verify_periodicity",
]
