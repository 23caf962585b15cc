"""
Usage arithmetic: skew semirings and the vector/matrix algebra over them.
"""
