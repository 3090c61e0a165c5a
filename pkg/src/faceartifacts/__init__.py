"""Face-artifact detection for polygonized street networks.

Pipeline: street linework -> noded planar edges -> face polygons ->
compactness metrics and face-artifact indices -> per-dataset KDE
threshold -> artifact/block labels, with optional building-footprint
validation.
"""

__version__ = "0.1.0"

from faceartifacts.geometry import active_backend

__all__ = ["active_backend", "__version__"]
