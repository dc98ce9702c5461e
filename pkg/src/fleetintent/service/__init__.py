from .app import create_app
from .core import ConfirmOutcome, MessageOutcome, ServiceCore, SessionBusy, StaleToken, UnknownSession

__all__ = [
    "ConfirmOutcome",
    "MessageOutcome",
    "ServiceCore",
    "SessionBusy",
    "StaleToken",
    "UnknownSession",
    "create_app",
]
