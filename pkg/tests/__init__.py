"""Tests for brmult."""
