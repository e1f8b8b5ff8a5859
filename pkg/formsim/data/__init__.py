"""Shipped vessel parameter files."""
