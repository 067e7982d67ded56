from .base_controller import EXIT_CHECK_FAILED, EXIT_INTERNAL, EXIT_OK, EXIT_VALIDATION, BaseController
from .controllers import CONTROLLERS, FactorizeController, LowrankController, VerifyController
from .schemas import AggregateStats, CheckRecord, ErrorInfo, ErrorResponse, MethodRecord, RunReport
from .trials import aggregate, run_trials, write_trials_csv

__all__ = [
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_VALIDATION",
    "EXIT_INTERNAL",
    "BaseController",
    "CONTROLLERS",
    "FactorizeController",
    "LowrankController",
    "VerifyController",
    "AggregateStats",
    "CheckRecord",
    "ErrorInfo",
    "ErrorResponse",
    "MethodRecord",
    "RunReport",
    "aggregate",
    "run_trials",
    "write_trials_csv",
]
