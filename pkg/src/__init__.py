"""
State Separation Analyzer
Decides, constructs and bounds conclusive probabilistic transformations of secretly chosen quantum states
"""

__version__ = "1.0.0"
__author__ = "State Separation Analyzer Team"
