"""
cylnogo

Exact-arithmetic toolkit for quantization obstructions on the cylinder
T*S^1: classical Poisson algebra, operator words on the circle, quantization
schemes, constraint solving and the verification registry.
"""

__version__ = "1.0.0"
