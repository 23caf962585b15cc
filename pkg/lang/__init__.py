"""
The language layer: syntax trees, surface grammar and errors.
"""
