"""Mixed braid group actions on K-groups of toric GIT phases."""
__version__ = "0.1.0"
