"""Configuration settings: field choice, resource limits, default windows and logging."""
