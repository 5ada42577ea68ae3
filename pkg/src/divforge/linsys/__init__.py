"""Linear systems: cohomology ledger, positivity certificates and counts."""

from .counting import (bpf_drop_test, castelnuovo_severi_bound, expected_dim_plane,
                       plucker_genus, plurigenus_parity_bound, product_curve_genus,
                       separation_drop_test)
from .ledger import (CohTriple, Interval, Ledger, LedgerContradiction, LedgerError, Rule,
                     SESStep, bound, declare, restrict_coh, serre_dual_surface, ses_propagate,
                     touch)
from .positivity import (Certificate, CertKind, NoObstruction, PeelResult, PositivityError,
                         Witness, big_check, fixed_part_peel, nef_on_effective, reider_search)

__all__ = [
    "bpf_drop_test", "castelnuovo_severi_bound", "expected_dim_plane", "plucker_genus",
    "plurigenus_parity_bound", "product_curve_genus", "separation_drop_test",
    "CohTriple", "Interval", "Ledger", "LedgerContradiction", "LedgerError", "Rule",
    "SESStep", "bound", "declare", "restrict_coh", "serre_dual_surface", "ses_propagate",
    "touch", "Certificate", "CertKind", "NoObstruction", "PeelResult", "PositivityError",
    "Witness", "big_check", "fixed_part_peel", "nef_on_effective", "reider_search",
]
