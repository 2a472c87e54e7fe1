"""Yang-Lee zeros of imaginary-field Ising models as non-Hermitian DQPTs."""

from .analysis import (
    CriticalPoint2D,
    PeriodFit,
    PeriodSample,
    chain_period_samples,
    critical_field_scan,
    fit_period_model,
    map_critical_back_2d,
    scaling_exponent,
)
from .chain import (
    DQPTResult,
    LoschmidtSeries,
    QuantumIsingChainParams,
    build_h1,
    detect_dqpt,
    loschmidt_chain,
    map_params_2d,
    measure_period,
)
from .classical import (
    ClassicalIsing1DParams,
    ClassicalIsing2DParams,
    YangLeeZeroSet,
    critical_field_1d,
    partition_1d_brute,
    partition_1d_closed,
    partition_1d_transfer,
    partition_2d_brute,
    partition_2d_transfer,
    yang_lee_zeros_1d,
    zero_period_1d,
)
from .errors import (
    BranchCutError,
    ConvergenceError,
    NoZerosError,
    NumericalError,
    ParameterError,
    SingularMatrixError,
    YLDQPTError,
)
from .numerics import Pauli2x2Decomposition, expm, kron_chain, logm_2x2, pauli_decompose
from .quantum_map import (
    BCHCoefficients,
    EPClassification,
    MappedQuantum0D,
    bch_hamiltonian_exact,
    bch_hamiltonian_series,
    classify_regime,
    h_apt,
    loschmidt_apt,
    map_params_continuum,
)

__version__ = "0.1.0"
