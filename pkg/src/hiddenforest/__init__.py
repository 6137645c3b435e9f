"""Hidden forests: blocks of lattice points invisible from the origin."""
from ._backend import get_backend, set_backend, use_backend
from .arith import (
    CongruenceSystem,
    CrtSolution,
    FactoredNatural,
    crt_solve,
    factorize,
    first_primes,
    gcd,
    omega_sieve,
    prime_pi,
    primorial,
)
from .errors import (
    DegenerateRowOrColumn,
    HiddenForestError,
    InconsistentSystem,
    NotHidden,
    OverlappingRuns,
    RangeTooLarge,
)
from .forest import (
    Forest,
    PrimeCube,
    distance,
    forest_from_matrix,
    hypercube_forest,
    squared_distance,
    verify_hidden,
)
from .matrixlab import (
    EntryMatrix,
    GcdGrid,
    QuasiprimeMatrix,
    QuasiprimePattern,
    Slot,
    enumerate_pattern,
    gcd_grid_of,
    optimal_gcd_matrix,
    prime_matrix,
    qp_from_matrix,
    recurring_prime_count,
    rotate_ccw,
    rotate_cw,
)
from .search import (
    CampaignResult,
    ScanRegion,
    SearchCheckpoint,
    companion_block_search,
    enumerate_qp_campaign,
    five_by_five_pattern,
    scan_closest_forest,
    strongly_composite_run,
)
from .visibility import (
    DensityReport,
    count_visible_in_box,
    curve_visible_stride,
    ggcd,
    inverse_zeta,
    is_b_visible,
    is_visible,
)

__version__ = "0.1.0"
