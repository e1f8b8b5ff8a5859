"""Shipped scenario presets."""
