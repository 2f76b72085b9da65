"""Numeric tolerance policy.

All tolerances used by the library live in one record so tests can pin the
defaults and experiments can tighten or relax them coherently.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class NumericPolicy:
    # Hermiticity check (relative) before symmetrizing inputs.
    herm_tol: float = 1e-12
    # Eigendecomposition reconstruction / unitarity residuals (relative).
    recon_tol: float = 1e-10
    unitary_tol: float = 1e-11
    # Negative-eigenvalue slack when taking PSD square roots.
    psd_clip: float = 1e-10
    # Trace preservation of constructed channels.
    tp_tol: float = 1e-8
    # Detailed-balance residual accepted for constructed channels.
    db_tol: float = 1e-7
    # Detailed-balance residual required before computing a spectral gap.
    gap_db_tol: float = 1e-8
    # Slack on the symmetrized channel spectrum around [0, 1].
    spectrum_slack: float = 1e-8
    # Gibbs conditioning: refuse sigma^(-1/2) below the floor, warn below warn.
    sigma_min_floor: float = 1e-12
    sigma_min_warn: float = 1e-8
    # Smallest branch probability accepted for post-selection.
    prob_floor: float = 1e-12
    # Smallest spectral gap accepted by mixing-time planning.
    gap_floor: float = 1e-6
    # Variance floor for autocorrelation normalization.
    var_floor: float = 1e-14
    # Term cutoff when summing filter tails numerically.
    tail_term_cutoff: float = 1e-18
    # Largest matrix dimension accepted by the eigensolver front end.
    max_dim: int = 4096
    # Total dimension cap for composite block encodings.
    max_encoding_dim: int = 8192

    def scaled(self, factor):
        """Return a policy with the residual-type tolerances multiplied by factor."""
        return replace(
            self,
            tp_tol=self.tp_tol * factor,
            db_tol=self.db_tol * factor,
            gap_db_tol=self.gap_db_tol * factor,
        )


DEFAULT_POLICY = NumericPolicy()
