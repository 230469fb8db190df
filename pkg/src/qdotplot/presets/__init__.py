"""Preset backend descriptions (JSON)."""
