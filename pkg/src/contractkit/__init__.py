"""Contract-driven test generation, execution, mutation analysis and grading."""

__version__ = "0.1.0"
