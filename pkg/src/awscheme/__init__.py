"""Askey-Wilson function transform scheme: q-special functions, measures, transforms."""
__version__ = "0.1.0"
