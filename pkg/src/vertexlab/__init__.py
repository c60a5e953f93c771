"""
vertexlab: exact OPE arithmetic in free field algebras and the quantum
corrections of classical invariant relations.
"""

__version__ = "0.1.0"
