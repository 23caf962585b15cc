"""
Kits, environments and the generic traversal over derivations.
"""
