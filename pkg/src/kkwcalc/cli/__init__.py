"""Command line front end."""

from kkwcalc.cli.app import main

__all__ = ["main"]
