"""Tests for tradeoff-lab."""
