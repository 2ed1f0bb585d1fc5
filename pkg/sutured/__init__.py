"""Combinatorial sutured TQFT: surfaces, dividing sets, contact elements and gluings."""

__version__ = "0.1.0"
