"""WSN QoS Calculus — deterministic worst-case QoS bounds for wireless sensor networks."""

__version__ = "0.1.0"
