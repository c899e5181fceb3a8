"""Certified-everlasting encryption schemes on a classically simulated stabilizer substrate.

Submodules: ``gf2`` and ``field`` (algebra), ``qsim`` (stabilizer states),
``base`` (SKE, toy LWE, lazy random oracle), ``cd`` (certified deletion and
the two certified-everlasting variants), ``rnce``, ``garble``, ``fe``,
``serialize`` (envelope files), ``attack`` and ``checks`` (harnesses) and
``cli``.  Nothing here is secure cryptography; it is a correctness model.
"""

__version__ = "0.1.0"
