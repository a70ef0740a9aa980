"""Exact number walls over prime fields."""
