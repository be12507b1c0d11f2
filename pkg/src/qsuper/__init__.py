"""Exact engine for multiparameter quantum general linear supergroups."""

__version__ = "0.1.0"
