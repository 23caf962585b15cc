"""
Object logics embedded in the calculus: DILL and judgmental modal logic (PD).
"""
