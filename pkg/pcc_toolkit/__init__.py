from pcc_toolkit.signs import (  # noqa: F401
    SignSequence,
    ComplexSignSequence,
    sign,
    sign_c,
    pack,
    pack_complex,
    from_quadrants,
    extract,
    extract_complex,
    agreement_count,
    sign_corr,
)

from pcc_toolkit.estimator import (  # noqa: F401
    CorrMatrix,
    ComplexPccPair,
    pcc_real,
    pcc_complex,
    pcc_matrix_real,
    pcc_matrix_complex,
    sample_corr_matrix,
    estimate,
)

from pcc_toolkit.psd import (  # noqa: F401
    PsdReport,
    StripModel,
    eigvals_sym,
    eigvals_herm,
    check_psd,
    valid_range_3x3,
    sign_range,
    identity_check,
    canonical_pack,
)

from pcc_toolkit.enumeration import (  # noqa: F401
    EnumerationSummary,
    Witness,
    enumerate_real,
    enumerate_complex,
    table1_real,
    table1_complex,
    augment_real,
    augment_complex,
    counterexample,
)

from pcc_toolkit.sampling import (  # noqa: F401
    McReport,
    sample_bivariate_gaussian,
    sample_circular_complex,
    mc_arcsine_real,
    mc_arcsine_complex,
)

from pcc_toolkit.utils import (  # noqa: F401
    PccError,
    DomainError,
    LengthMismatchError,
    NonHermitianError,
    BudgetExceededError,
    InputFormatError,
    NotPsdError,
)
