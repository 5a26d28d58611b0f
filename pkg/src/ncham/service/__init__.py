from . import handlers, models

__all__ = ["handlers", "models"]
