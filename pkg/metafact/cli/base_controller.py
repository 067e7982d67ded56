import sys
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ValidationError

from ..shared.utils.exceptions import MetafactError
from ..shared.utils.logger import get_logger
from .schemas import ErrorInfo, ErrorResponse

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 4


def _json_safe(details):
    return {key: value if isinstance(value, (int, float, str, bool, type(None), list)) else str(value) for key, value in details.items()}


class BaseController:
    """Common command handling: run, map typed errors to exit codes, print JSON."""

    def __init__(self, argv: Optional[List[str]] = None, pretty: bool = False):
        self.argv = list(argv or [])
        self.pretty = pretty

    def run(self, args) -> Tuple[BaseModel, int]:
        raise NotImplementedError

    def execute(self, args) -> int:
        return self.handle(lambda: self.run(args))

    def emit(self, document: BaseModel) -> None:
        sys.stdout.write(document.model_dump_json(indent=2 if self.pretty else None))
        sys.stdout.write("\n")

    def fail(self, kind: str, message: str, details=None) -> None:
        sys.stderr.write(f"metafact: error: {kind}: {' '.join(message.split())}\n")
        self.emit(ErrorResponse(error=ErrorInfo(kind=kind, message=message, details=_json_safe(details or {}))))

    def handle(self, func: Callable[[], Tuple[BaseModel, int]]) -> int:
        """Run ``func`` and return the process exit code."""
        try:
            document, code = func()
        except MetafactError as e:
            logger.warning(f"{e.kind}: {e.message}")
            self.fail(**e.to_dict())
            return e.exit_code
        except ValidationError as e:
            logger.warning(f"Invalid input: {e}")
            self.fail("InvalidInput", str(e), {"errors": e.error_count()})
            return EXIT_VALIDATION
        except OSError as e:
            logger.warning(f"I/O error: {e}")
            self.fail("InputOutputError", str(e), {"path": getattr(e, "filename", None)})
            return EXIT_VALIDATION
        except Exception as e:
            logger.exception(f"Unexpected error: {e}")
            self.fail("InternalError", str(e))
            return EXIT_INTERNAL
        self.emit(document)
        return code
