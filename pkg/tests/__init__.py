"""Test suite for fastcp."""
