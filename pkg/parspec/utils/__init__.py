from parspec.utils.logger import StageLogger, setup_logging

__all__ = ["StageLogger", "setup_logging"]
