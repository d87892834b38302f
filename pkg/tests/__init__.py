"""Test suite for hia-lab."""
