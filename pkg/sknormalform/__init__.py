"""
Exact sl2-normal forms of polynomial maps with nilpotent linear part.
"""

__version__ = '0.1.0'
