"""catgen: optical cat-state generation from squeezed few-photon superpositions.

Engines
-------
states        number-basis states, squeezing, Wigner functions
linear_cv     wavefunction route through a beamsplitter with one detected photon
linear_dv     number-basis route with detector loss and multi-click heralds
superradiant  two-photon emission from an inverted atom pair, heralded prep
optimize      derivative-free parameter search shared by the engines
mps           time-bin matrix-product simulation of a cavity-waveguide chain
cli           command-line entry points writing CSV/JSON artifacts
"""

from .errors import (
    BondExplosion,
    CatgenError,
    DegenerateError,
    DegenerateSpectrum,
    DimensionError,
    DomainError,
    IncompleteEvolution,
    NoRoot,
    NoSolution,
    NonFiniteObjective,
    ResolutionError,
    TruncationError,
    WindowError,
    ZeroProbability,
)
from .states import (
    R_MAX,
    CatTarget,
    FockDensityMatrix,
    FockVector,
    ThetaParams,
    WignerGrid,
    cat_fock,
    db_to_r,
    default_cutoff,
    extremal_mean_photons,
    fidelity,
    hermite_functions,
    mean_photon_number,
    position_wavefunction,
    r_to_db,
    squeeze_fock,
    squeeze_matrix,
    squeezed_theta_fock,
    theta_extrema,
    wigner,
    wrap_theta,
)

__version__ = "0.1.0"
