"""weakcat: a bounded engine for globular PROs and weak omega-categorification."""

__version__ = "0.1.0"
