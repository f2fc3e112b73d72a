"""Bundled scenario catalog."""
