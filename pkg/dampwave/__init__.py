"""dampwave - pseudospectral simulator and verification harness for the damped energy-critical wave equation"""

__version__ = "0.1.0"
