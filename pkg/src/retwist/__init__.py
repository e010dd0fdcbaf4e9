"""FRT and reflection-equation algebras over exact Laurent scalars."""

__version__ = "0.1.0"
