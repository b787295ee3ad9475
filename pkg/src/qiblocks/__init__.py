"""Quasi-isolated elements, generic orders and block bounds for exceptional groups."""

from .generic_order import CycloProduct, EllProfile, Valuation, compute_e, ell_valuation, generic_order_of
from .ledger import run_ledger, brauer_count_bound
from .rootsys import RootDatum, build_root_datum
from .torsion import centralizer_of, enumerate_quasi_isolated
from .unipotent import SeriesSizeQuery, count_unipotent, series_size

__version__ = "0.1.0"

__all__ = [
    "CycloProduct",
    "EllProfile",
    "RootDatum",
    "SeriesSizeQuery",
    "Valuation",
    "build_root_datum",
    "centralizer_of",
    "compute_e",
    "count_unipotent",
    "ell_valuation",
    "enumerate_quasi_isolated",
    "generic_order_of",
    "run_ledger",
    "series_size",
    "brauer_count_bound",
]
