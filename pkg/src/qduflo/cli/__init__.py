"""Command-line interface and file readers."""
