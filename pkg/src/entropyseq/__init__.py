"""Entropy differentials of minimal surfaces from Weierstrass data.

Typical use::

    from entropyseq import WeierstrassData, entropy_sequence, detect_degree
    W = WeierstrassData.from_text("z", "i*z/(z^4-1)")
    P = entropy_sequence(W, 0.1, ell_max=5)
"""

from .approx import (ApproximantReport, HillProblem, adapt_coordinate, approximate,
                     convergence_report, gauss_from_solutions, hill_solve)
from .degree import (AlgebraicType, detect_degree, select_base_points, umbilic_coefficient,
                     verify_relation, weighted_monomials)
from .differentials import (ConnectionChart, Differential, WeierstrassData, connection,
                            entropy_next, entropy_p2, entropy_sequence, hopf,
                            moebius_schwarzian_seq, residue, residue_formula, schwarzian,
                            schwarzian_seq, umbilic_order)
from .expr import Expr, differentiate, evaluate, expand, parse, to_text
from .registry import SURFACES, get_surface
from .series import LaurentSeries
from .surface import (DiskGrid, ImmersionSample, MoebiusMap, RectGrid, export_mesh,
                      goursat_transform, integrate_immersion, metric_and_curvature,
                      scale_and_bonnet)

__version__ = "0.1.0"
