"""Shared helpers: error types and output formatting."""
