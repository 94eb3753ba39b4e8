"""Markovian master equations for collisional decoherence on a periodic
lattice, translation-covariant generator assembly, and a verification suite
for trace preservation, complete positivity, decoherence-rate profiles,
energy flow, stationarity, and covariance."""

from .lattice import (
    MOMENTUM,
    POSITION,
    DensityMatrix,
    GuardError,
    Lattice,
    Superoperator,
    Term,
    cat_state,
    change_basis,
    circulant_from_offsets,
    coherence_at,
    expect_p,
    expect_p2,
    expect_x,
    fourier_matrix,
    gaussian_state,
    make_lattice,
    maximally_mixed,
    min_image_distances,
    momentum_operator,
    position_operator,
    signed_min_image,
    superop_distance,
    thermal_state,
    translate,
)
from .generators import (
    Alicki,
    CaldeiraLeggett,
    Diosi,
    Gallis93,
    GRW,
    GeneratorSpec,
    Hamiltonian,
    JoosZeh,
    KickTable,
    LindbladOps,
    SqTable,
    Vacchini,
    alicki,
    build_generator,
    caldeira_leggett,
    diosi,
    free_hamiltonian,
    gallis93,
    grw,
    joos_zeh,
    lindblad_from_ops,
    linear_ansatz_ops,
    maxwell_sigma,
    maxwell_sq_preset,
    tau_from_scattering,
    transfer_energy,
    vacchini,
)
from .levy import (
    GaussianPart,
    PoissonPart,
    covariance_defect,
    decompose_known,
    gaussian_component,
    levy_generator,
    poisson_component,
)
from .propagate import Trajectory, evolve, exp_step, rk4_step
from .verify import (
    CpReport,
    RateProfile,
    choi_min_eig,
    detailed_balance_defect,
    energy_series,
    rate_profile,
    state_min_eig,
    stationarity_residual,
)

__version__ = "0.1.0"
