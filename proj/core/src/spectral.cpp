#include "rsfr/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rsfr::spectral {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

// e^{j*2*pi*r/N} for r in [0, N). The upper half mirrors the lower and
// the self-conjugate roots are pinned to exact real values, so conjugate
// and mod-N symmetries of the closed-form spectrum hold bit for bit.
std::vector<std::complex<double>> unit_roots(int n) {
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  for (int r = 0; r <= n / 2; ++r)
    w[static_cast<std::size_t>(r)] = std::polar(1.0, kTwoPi * r / n);
  w[0] = {1.0, 0.0};
  if (n % 2 == 0) w[static_cast<std::size_t>(n / 2)] = {-1.0, 0.0};
  for (int r = n / 2 + 1; r < n; ++r)
    w[static_cast<std::size_t>(r)] =
        std::conj(w[static_cast<std::size_t>(n - r)]);
  return w;
}

double largest_singular_value(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

// spectral norm of a Hermitian matrix through its extreme eigenvalues
double hermitian_spectral_norm(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a,
                                                      Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

void check_codes(const FrequencyCodes& codes, int n_freqs) {
  if (codes.codes.empty()) throw std::invalid_argument("empty code sequence");
  if (n_freqs < 1) throw std::invalid_argument("n_freqs must be >= 1");
  for (int c : codes.codes)
    if (c < 0 || c >= n_freqs)
      throw std::invalid_argument("frequency code outside {0, ..., M-1}");
}

}  // namespace

std::string to_string(CoherenceMethod method) {
  return method == CoherenceMethod::ClosedForm ? "closed_form" : "numeric_svd";
}

CoherenceMethod coherence_method_from_string(const std::string& name) {
  if (name == "closed_form") return CoherenceMethod::ClosedForm;
  if (name == "numeric_svd") return CoherenceMethod::NumericSvd;
  throw std::invalid_argument("unknown coherence method: " + name);
}

GramBlock gram_block(const ObservationMatrix& matrix, int q1, int q2) {
  if (q1 < 0 || q1 >= matrix.n_blocks() || q2 < 0 || q2 >= matrix.n_blocks())
    throw std::out_of_range("block index");
  GramBlock out;
  out.dq = q2 - q1;
  out.block = matrix.block(q1).adjoint() * matrix.block(q2);
  return out;
}

BlockSpectrum block_eigenvalues_closed_form(const FrequencyCodes& codes,
                                            int n_freqs, int dq) {
  check_codes(codes, n_freqs);
  const int n = codes.n_pulses();
  const int wrapped = ((dq % n) + n) % n;
  const auto roots = unit_roots(n);
  const double factor = static_cast<double>(n_freqs) / n;

  BlockSpectrum out;
  out.dq = wrapped;
  out.eigenvalues = Eigen::VectorXcd::Zero(n_freqs);
  for (int pulse = 0; pulse < n; ++pulse) {
    const int m = codes.codes[static_cast<std::size_t>(pulse)];
    out.eigenvalues[m] += roots[static_cast<std::size_t>(
        (static_cast<long long>(wrapped) * pulse) % n)];
  }
  out.eigenvalues *= factor;

  out.singular_values = Eigen::VectorXd(n_freqs);
  for (int m = 0; m < n_freqs; ++m) {
    const std::complex<double> shifted =
        wrapped == 0 ? out.eigenvalues[m] - 1.0 : out.eigenvalues[m];
    out.singular_values[m] = std::abs(shifted);
  }
  return out;
}

double intra_block_coherence_closed_form(const FrequencyCodes& codes,
                                         int n_freqs) {
  return block_eigenvalues_closed_form(codes, n_freqs, 0)
      .singular_values.maxCoeff();
}

double inter_block_coherence_closed_form(const FrequencyCodes& codes,
                                         int n_freqs) {
  check_codes(codes, n_freqs);
  const int n = codes.n_pulses();
  double best = 0.0;
  for (int dq = 1; dq <= n / 2; ++dq) {
    best = std::max(best, block_eigenvalues_closed_form(codes, n_freqs, dq)
                              .singular_values.maxCoeff());
  }
  return best;
}

double intra_block_coherence_numeric(const ObservationMatrix& matrix) {
  const int m = matrix.block_size();
  double best = 0.0;
  for (int q = 0; q < matrix.n_blocks(); ++q) {
    const Eigen::MatrixXcd shifted =
        matrix.block(q).adjoint() * matrix.block(q) -
        Eigen::MatrixXcd::Identity(m, m);
    best = std::max(best, hermitian_spectral_norm(shifted));
  }
  return best;
}

double inter_block_coherence_numeric(const ObservationMatrix& matrix) {
  double best = 0.0;
  // ||Psi_q2^H Psi_q1|| equals ||Psi_q1^H Psi_q2||, so q1 < q2 suffices
  for (int q1 = 0; q1 + 1 < matrix.n_blocks(); ++q1) {
    for (int q2 = q1 + 1; q2 < matrix.n_blocks(); ++q2) {
      const Eigen::MatrixXcd cross = matrix.block(q1).adjoint() * matrix.block(q2);
      best = std::max(best, largest_singular_value(cross));
    }
  }
  return best;
}

double spectral_norm(const ObservationMatrix& matrix) {
  if (matrix.mode() == DopplerMode::Simplified)
    return std::sqrt(static_cast<double>(matrix.block_size()));
  return spectral_norm_numeric(matrix);
}

double spectral_norm_numeric(const ObservationMatrix& matrix) {
  const Eigen::MatrixXcd gram = matrix.entries() * matrix.entries().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram,
                                                      Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

std::vector<double> full_gram_eigenvalues(const FrequencyCodes& codes,
                                          int n_freqs) {
  check_codes(codes, n_freqs);
  const int n = codes.n_pulses();
  std::vector<double> out(static_cast<std::size_t>(n) * n_freqs, 0.0);
  for (int q = 0; q < n; ++q) {
    const int m = codes.codes[static_cast<std::size_t>((n - q) % n)];
    out[static_cast<std::size_t>(q) * n_freqs + m] =
        static_cast<double>(n_freqs);
  }
  return out;
}

CoherenceReport coherence_report(const ObservationMatrix& matrix,
                                 CoherenceMethod method) {
  CoherenceReport report;
  report.mode = matrix.mode();
  report.method = method;
  if (method == CoherenceMethod::ClosedForm) {
    if (matrix.mode() != DopplerMode::Simplified)
      throw std::invalid_argument(
          "closed-form coherence is only defined in Simplified mode");
    report.mu_intra =
        intra_block_coherence_closed_form(matrix.codes(), matrix.block_size());
    report.mu_inter =
        inter_block_coherence_closed_form(matrix.codes(), matrix.block_size());
    report.spectral_norm = spectral_norm(matrix);
  } else {
    report.mu_intra = intra_block_coherence_numeric(matrix);
    report.mu_inter = inter_block_coherence_numeric(matrix);
    report.spectral_norm = spectral_norm_numeric(matrix);
  }
  return report;
}

}  // namespace rsfr::spectral
