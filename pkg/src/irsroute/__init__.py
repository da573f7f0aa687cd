"""Multi-IRS multi-path beam routing simulator."""

__version__ = "0.1.0"
