"""Argument-analysis engine with persuasive-strategy portfolios and feedback service."""

__version__ = "0.1.0"
