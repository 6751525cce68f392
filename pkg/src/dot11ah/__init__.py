"""Capacity model and MAC simulator for IEEE 802.11ah hierarchical TIM signalling."""

__version__ = "0.1.0"
