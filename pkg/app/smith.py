########################
# Smith Normal Form    #
########################

"""
This module computes Smith normal forms of matrix polynomials over Q[λ] and
Q(i)[λ].

Key Features:
1. Invariant Factors:
   - sympy's invariant_factors() on a DomainMatrix over QQ[λ] or QQ_I[λ]
   - zero diagonal entries are dropped, the rest are made monic, so the
     result is d_1 | d_2 | ... | d_r with r the normal rank

2. Guards:
   - float inputs are refused, large inputs hit a configurable size cap
   - a progress callback sees each invariant factor and may cancel
"""

import logging
from typing import Callable, List, Optional

from sympy.polys.matrices.normalforms import invariant_factors

from app.exceptions import ComputationCancelled, FloatBackendUnsupported, SizeCapExceeded
from app.lification_config import DEFAULT_SMITH_SIZE_CAP
from app.matpoly import MatrixPolynomial
from app.polynomial import ScalarPolynomial

Progress = Callable[[int, int], bool]


def smith_form(P: MatrixPolynomial, size_cap: int = DEFAULT_SMITH_SIZE_CAP,
               progress: Optional[Progress] = None) -> List[ScalarPolynomial]:
    """
    Monic invariant factors d_1 | d_2 | ... | d_r of P, r its normal rank.

    Args:
        P: Matrix polynomial over an exact backend.
        size_cap: Largest accepted row or column count.
        progress: Called as progress(step, total) for each nonzero
            invariant factor; returning False cancels the computation.

    Raises:
        FloatBackendUnsupported: On the float backend.
        SizeCapExceeded: If P is larger than size_cap.
        ComputationCancelled: If the progress callback returns False.
    """
    if not P.backend.exact:
        raise FloatBackendUnsupported("Smith forms need an exact backend")
    if max(P.rows, P.cols) > size_cap:
        raise SizeCapExceeded(f"A {P.rows}x{P.cols} polynomial exceeds the Smith size cap {size_cap}")
    total = min(P.rows, P.cols)
    factors: List[ScalarPolynomial] = []
    for d in invariant_factors(P.to_domain_matrix()):
        if not d:
            continue
        factors.append(ScalarPolynomial.from_ring(d.monic(), P.backend))
        if progress is not None and progress(len(factors), total) is False:
            raise ComputationCancelled(f"Smith form cancelled after {len(factors)} of {total} factors")
    logging.debug(f"Smith form of a {P.rows}x{P.cols} polynomial: {len(factors)} invariant factors")
    return factors
