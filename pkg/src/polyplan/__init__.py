"""Multi-query motion planning for rigid bodies in polytope worlds.

The pipeline: decompose free space into convex polytopes, certify short
object motions between neighbouring boundary patches with small MILPs, then
answer start/goal queries with graph search over the certified links.
"""

__version__ = "0.1.0"
