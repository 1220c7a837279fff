// observables.hpp -- reaction rates, symmetrized spectra, susceptibilities
// and equilibrium reduced density matrices built on the correlation engine.
#pragma once

#include <optional>

#include "ctpi/engine.hpp"

namespace ctpi::obs {

// ---------- reaction rates ----------

// F = (i/hbar)[H, P] for a projector P onto the reactant subspace.
Matrix flux_operator(const Matrix& h0, const Matrix& projector);

struct RateSettings {
  double plateau_fraction = 0.2;  // trailing window as a fraction of t_max
  double plateau_tol = 0.02;      // |dC_fs/dt| * window / |C_fs| threshold
  std::optional<double> plateau_override;
};

struct RateResult {
  std::vector<double> times;
  std::vector<double> c_fs;  // flux-side, Tr(F O_P) / Q
  std::vector<double> c_ff;  // flux-flux, Tr(F O_F) / Q
  double reactant_partition = 0;  // Q = Tr(P O_I)
  std::optional<double> plateau_time;
  double rate_from_plateau = 0;
  double rate_from_integral = 0;
  std::vector<int> max_bond;
  std::vector<std::string> warnings;
};

// The flux-side and flux-flux correlation functions share each time
// point's contour and influence coefficients; both are normalized by the
// reactant partition function Q instead of the full Z.
RateResult compute_rate(const CorrelationRequest& base, const Matrix& projector,
                        const RateSettings& settings = {});

// ---------- spectra ----------

enum class Window { Hann, Rect };

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<Complex> g_omega;       // windowed transform of G(t)
  std::vector<double> s_omega;        // cosh(beta w / 2) G(w)
  std::vector<double> chi_prime;      // dispersive part, Kramers-Kronig
  std::vector<double> chi_double_prime;  // tanh(beta w / 2) S(w)
  Window window = Window::Hann;
  int zero_pad = 4;
  std::vector<std::string> warnings;
};

// Extends a t >= 0 series to negative times through G(-t) = conj(G(t)),
// exact for Hermitian A = B.
CorrelationSeries symmetrize_by_conjugation(const CorrelationSeries& series);

// Windowed discrete transform of a symmetric-in-time series and the
// detailed-balance map to the symmetrized spectral function.
SpectrumResult sscf_spectrum(const CorrelationSeries& symmetric_series,
                             double beta, Window window = Window::Hann,
                             int zero_pad = 4);

// Fills chi' and chi'' from s_omega.  chi'' = tanh(beta w/2) S(w); chi'
// follows from a principal-value Kramers-Kronig sum over the same grid.
void susceptibility(SpectrumResult& spectrum, double beta);

// ---------- equilibrium ----------

struct EquilibriumResult {
  Matrix rho;
  Eigen::VectorXd eigenvalues;
  double purity = 0;
  double entropy = 0;
  int max_bond = 1;
  std::vector<std::string> warnings;
};

// Reduced thermal density matrix from the identity insertion at t = 0.
EquilibriumResult equilibrium_density_matrix(const CorrelationRequest& base);

}  // namespace ctpi::obs
