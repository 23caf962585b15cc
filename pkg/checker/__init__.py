"""
Typing derivations for the usage-annotated linear lambda calculus.
"""
