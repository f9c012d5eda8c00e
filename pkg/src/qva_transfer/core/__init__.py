"""
Core simulation, training and transfer components.
"""
