"""X-wave quantization and OPA entanglement toolkit"""

__version__ = "1.0.0"
