"""Sum rules for multiphoton coincidence rates in linear interferometers."""
from .characters import CharacterTable, Partition, characters, partitions
from .coset import (
    CosetFactorization,
    factor_input_coset,
    factor_output_coset,
    removed_elements,
)
from .linalg import (
    ModeRotation,
    compose,
    embed_rotation,
    haar_unitary,
    unitarity_defect,
)
from .matfun import (
    determinant,
    immanant,
    is_upper_hessenberg,
    permanent,
    permanent_hessenberg,
    permanent_naive,
    permanent_ryser,
    t_map,
)
from .rates import (
    DelaySpec,
    PhotonConfig,
    RateResult,
    rate,
    rate_indistinguishable,
    rate_oracle,
    rate_three_photon_partial,
    rate_two_photon,
    scattering_submatrix,
)
from .sumrules import (
    SumReport,
    SumSpec,
    enumerate_outputs,
    invariance_scan,
    sum_over_inputs,
    sum_over_outputs,
)

__version__ = "0.1.0"
