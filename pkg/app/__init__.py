"""Optimal privacy contracts for two consumer types."""
