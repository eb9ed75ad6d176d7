"""Distributed phase estimation: protocol simulation and cost analysis."""
