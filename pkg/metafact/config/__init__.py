from .settings import MetafactSettings, Tolerances, settings

__all__ = ["MetafactSettings", "Tolerances", "settings"]
