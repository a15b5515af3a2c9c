"""wavecone CLI."""

from wavecone.cli.main import app

__all__ = ["app"]
