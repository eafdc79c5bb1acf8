"""Universal upper bounds for the next eigenvalue from the first ``m``.

The bounds are roots of scalar gap functions built from a spectrum prefix
and a problem profile ``(c, a, b)``. The package also generates test
spectra and checks the underlying inequalities with slack reports.
"""

from .errors import InputError, NumericalError
from .gapfn import GapFunction, chebyshev_gap, eval_f, eval_f_derivative, eval_f_plus, eval_f_tilde
from .generators import (
    SpectrumSource,
    TridiagonalMatrix,
    box_spectrum,
    consistent_profile,
    fd_laplacian_1d,
    fd_laplacian_2d_kronecker,
    generate,
    inhomogeneous_fd_1d,
    sturm_liouville_fd,
    tridiag_eigenvalues,
)
from .profiles import BoundProfile, parse_profile_spec, profile_from_json
from .solvers import (
    BoundResult,
    Method,
    all_bounds,
    bound_table,
    hp_bound,
    ppw_bound,
    sigma_p,
    sigma_tilde_p,
    yang1_bound,
    yang2_bound,
)
from .special import beta_function
from .spectra import Spectrum, load_spectrum, make_spectrum, moment
from .verify import (
    CheckReport,
    MonotoneFunctionTable,
    aizenman_lieb_identity,
    check_family_inequality,
    check_h1,
    check_theorem31,
    chebyshev_report,
    monotonicity_report,
    run_suite,
)

__version__ = "0.1.0"
