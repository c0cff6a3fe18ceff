"""Symbolic-numeric toolkit for causal perturbation theory.

Subpackages:

- algebra:       graded field algebra (exact coefficients)
- models:        model-definition files and the vertex expression grammar
- products:      generating-functional calculus (T, anti-T, advanced,
                 retarded, commutator products) and Wick pairings
- distributions: numeric tempered-distribution diagnostics
- splitting:     UV-regular splitting functions and momentum-space splitting
- secondorder:   second-order scalar-model physics
- cli:           command-line interface
"""

__version__ = "0.1.0"
