"""Verification toolkit for the general-type bounds of Kummer-type orthogonal modular varieties."""

__version__ = "0.1.0"
