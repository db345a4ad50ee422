"""Laboratório numérico de h-convexidade condicional."""

__version__ = "0.1.0"
