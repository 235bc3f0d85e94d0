"""Fog of War chess endgames: rules, belief tracking, scripted strategies,
exhaustive verification and belief-game solving."""

__version__ = "0.1.0"
