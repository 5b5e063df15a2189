"""
Configuration module for fastcp.
"""

from .settings import Settings

# Create a global settings instance
settings = Settings()

__all__ = ["settings", "Settings"]
