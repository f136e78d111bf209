"""Tests for traffic_queues."""
