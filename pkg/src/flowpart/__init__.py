"""Exact and partition-based approximate maximum flow on capacitated networks."""
