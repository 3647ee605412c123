#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "rsfr/frequency_codes.hpp"
#include "rsfr/observation_matrix.hpp"

namespace rsfr::spectral {

/// Cross-Gram block Psi_q1^H * Psi_q2. In Simplified mode the block is
/// circulant and depends on q1, q2 only through dq = q2 - q1.
struct GramBlock {
  Eigen::MatrixXcd block;  ///< M x M
  int dq = 0;              ///< q2 - q1, not wrapped
};

/// Computes Psi_q1^H * Psi_q2 numerically; valid in both modes.
/// Throws std::out_of_range for block indices outside {0, ..., N-1}.
GramBlock gram_block(const ObservationMatrix& matrix, int q1, int q2);

/// Eigenvalues and singular values of the (shifted) cross-Gram block at
/// lag dq under Simplified-mode semantics. eigenvalues[m] is
///
///   lambda_m = (M/N) * sum_{n : codes[n] == m} exp(j*2*pi*dq*n/N),
///
/// the DFT-of-first-row spectrum of the circulant block. singular_values
/// refer to the coherence-relevant block: Gram minus identity at dq == 0,
/// the plain cross block otherwise, so singular_values[m] is
/// |lambda_m - 1| at dq == 0 and |lambda_m| otherwise.
struct BlockSpectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::VectorXd singular_values;
  int dq = 0;  ///< wrapped into {0, ..., N-1}
};

/// dq may be any integer; it is wrapped mod N. n_freqs supplies M, which
/// the code sequence does not carry.
BlockSpectrum block_eigenvalues_closed_form(const FrequencyCodes& codes,
                                            int n_freqs, int dq);

enum class CoherenceMethod { ClosedForm, NumericSvd };

std::string to_string(CoherenceMethod method);
CoherenceMethod coherence_method_from_string(const std::string& name);

/// Worst-case spectral deviation of a velocity block's Gram matrix from
/// identity, max_q ||Psi_q^H Psi_q - I||_s. The closed form is exact under
/// Simplified-mode semantics; the numeric path accepts either mode.
double intra_block_coherence_closed_form(const FrequencyCodes& codes,
                                         int n_freqs);
double intra_block_coherence_numeric(const ObservationMatrix& matrix);

/// Worst-case cross-block spectral norm, max_{q1 != q2} ||Psi_q1^H Psi_q2||_s.
/// The closed form scans the lags 1..floor(N/2); conjugate and mod-N
/// symmetry of the block spectrum make the remaining lags redundant.
/// Returns 0 for N == 1 (no off-diagonal blocks).
double inter_block_coherence_closed_form(const FrequencyCodes& codes,
                                         int n_freqs);
double inter_block_coherence_numeric(const ObservationMatrix& matrix);

/// Largest singular value of the dictionary. In Simplified mode this is
/// sqrt(M) for every code realization and is returned in closed form; in
/// Exact mode it is computed numerically.
double spectral_norm(const ObservationMatrix& matrix);

/// Numeric largest singular value regardless of mode, via the largest
/// eigenvalue of the N x N Gram matrix Psi * Psi^H.
double spectral_norm_numeric(const ObservationMatrix& matrix);

/// All M*N eigenvalues of Psi^H * Psi under Simplified-mode semantics:
/// entry q*M+m is M when codes[(N-q) mod N] == m and 0 otherwise, so
/// exactly N eigenvalues equal M and the rest vanish.
std::vector<double> full_gram_eigenvalues(const FrequencyCodes& codes,
                                          int n_freqs);

struct CoherenceReport {
  double mu_intra = 0.0;
  double mu_inter = 0.0;
  double spectral_norm = 0.0;
  DopplerMode mode = DopplerMode::Simplified;
  CoherenceMethod method = CoherenceMethod::ClosedForm;
};

/// One-shot coherence summary of a dictionary. Requesting ClosedForm for
/// an Exact-mode matrix throws std::invalid_argument; no closed form is
/// offered there.
CoherenceReport coherence_report(const ObservationMatrix& matrix,
                                 CoherenceMethod method);

}  // namespace rsfr::spectral
