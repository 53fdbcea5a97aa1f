"""Root-level test package for the smoke suite."""
