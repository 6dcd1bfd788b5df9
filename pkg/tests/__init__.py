"""Tests for the nullflow package."""
