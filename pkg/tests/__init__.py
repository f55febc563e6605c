"""Test package for dmcis."""
