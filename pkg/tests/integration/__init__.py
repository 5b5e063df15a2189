"""Integration tests for fastcp."""
