"""Quantum reservoir computing with random-circuit reservoirs.

Library surface: exact statevector simulation, the seven circuit families,
the majorization complexity indicator, synthetic and molecular excitation
datasets, the ridge-readout pipeline, the transverse-field Ising baseline,
and the two-qubit Pauli-space study.
"""

__version__ = "0.1.0"

from .sim import (  # noqa: F401
    Circuit,
    Gate,
    PauliString,
    State,
    apply_circuit,
    apply_gate,
    circuit_unitary,
    expectation_pauli,
    lowest_eigenpairs,
    probabilities,
    zero_state,
)
from .families import (  # noqa: F401
    FamilyId,
    SampleSpec,
    circuit_from_json,
    circuit_to_json,
    effective_gate_count,
    haar_unitary,
    matchgate,
    sample_circuit,
)
from .majorization import (  # noqa: F401
    CumulantCurve,
    FluctuationReport,
    cumulants,
    ensemble_fluctuations,
    haar_baseline,
    majorizes,
)
from .hamiltonians import (  # noqa: F401
    Dataset,
    DatasetRecord,
    PauliSum,
    build_dataset,
    build_tfim_dataset,
    load_dataset_archive,
    parse_pauli_sum,
    pauli_sum_matrix,
    save_dataset_archive,
    split_dataset,
    synthetic_family,
)
from .ising import (  # noqa: F401
    IsingParams,
    exact_evolution,
    gate_count,
    sample_ising,
    trotter_circuit,
)
from .pipeline import (  # noqa: F401
    ExperimentConfig,
    ExperimentResult,
    RidgeModel,
    extract_features,
    fit_ridge,
    predict,
    run_experiment,
)
from .pauli_space import (  # noqa: F401
    PauliCoefficients,
    ensemble_cloud,
    haar_cloud,
    pauli_coefficients,
    pca_project,
)
