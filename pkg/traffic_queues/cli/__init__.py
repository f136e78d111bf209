"""Command-line interface for the traffic queue toolkit."""
