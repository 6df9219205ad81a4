"""AR task-guidance engine.

Converts a natural-language task query plus a captured scene (image, depth,
camera intrinsics and pose) into a step-by-step plan whose steps compile to
spatially anchored 3D guidance primitives.
"""

__version__ = "0.1.0"
