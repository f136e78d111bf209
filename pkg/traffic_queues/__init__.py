"""Traffic light queues - worst-case queue maxima under red/green light schedules."""

__version__ = '0.1.0'
