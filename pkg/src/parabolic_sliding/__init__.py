"""Exact root-system combinatorics and a certificate-producing prover for parabolic sliding arguments."""
from __future__ import annotations

__version__ = "0.1.0"
