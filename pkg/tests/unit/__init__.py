"""Unit tests for fastcp."""
