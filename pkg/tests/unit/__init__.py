"""Unit tests for traffic_queues."""
