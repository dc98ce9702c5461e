"""Intent-driven maintenance orchestration for a simulated turbofan fleet.

Operators state goals in natural language; the engine decomposes them
into expectations, conditions, targets, context, and information, runs a
hierarchical tool-calling workflow over the fleet, and produces
consolidated maintenance plans and gated critical stop actions.
"""

__version__ = "0.1.0"
