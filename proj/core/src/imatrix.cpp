#include "ctpi/imatrix.hpp"

#include <cmath>
#include <sstream>

#include "ctpi/parallel.hpp"

namespace ctpi::bath {

namespace {

// Each entry is (1/pi) Int dw J(w)/w^2 * sum_i sign_i cos(w c_i)/sinh(bw/2):
// expanding the trigonometric products into cosines keeps every term
// bounded (|Im c_i| <= beta/2 on the ordered triangle) and makes the
// discrete-mode sums exact.
struct TrigTerm {
  double sign;
  Complex c;
};

Complex entry_integral(const SpectralDensity& sd, const QuadratureSettings& q,
                       double beta, const std::vector<TrigTerm>& terms) {
  // The signs sum to zero, so at small w the cosines cancel almost
  // completely and the direct sum is roundoff noise.  Power sums of the
  // phases give the cancelled series sum_i sign_i (cos(w c_i) - 1)
  // analytically; switch to it once the direct form would lose digits.
  Complex c2{0, 0}, c4{0, 0}, c6{0, 0}, c8{0, 0};
  double osc = 0;
  for (const auto& term : terms) {
    const Complex p2 = term.c * term.c;
    c2 += term.sign * p2;
    c4 += term.sign * p2 * p2;
    c6 += term.sign * p2 * p2 * p2;
    c8 += term.sign * p2 * p2 * p2 * p2;
    osc = std::max(osc, std::abs(term.c));
  }
  const double series_below = osc > 0 ? 0.05 / osc : 0.0;

  auto g = [&](double omega) {
    const double x = 0.5 * beta * omega;
    if (omega < series_below) {
      const double w2 = omega * omega;
      const Complex f = -0.5 * c2 + w2 * (c4 / 24.0) -
                        w2 * w2 * (c6 / 720.0) + w2 * w2 * w2 * (c8 / 40320.0);
      return f / std::sinh(x);
    }
    Complex sum{0, 0};
    for (const auto& term : terms) {
      sum += term.sign * cos_over_sinh(omega * term.c, x);
    }
    return sum / (omega * omega);
  };
  const Complex low_coeff = -c2 / beta;
  return bath_integral(sd, q, g, -1.0, low_coeff, osc) / kPi;
}

}  // namespace

IMatrix build_imatrix(const SpectralDensity& sd, const ContourGrid& grid,
                      const QuadratureSettings& q) {
  validate_density(sd);
  const int n = grid.size();
  IMatrix im;
  im.n_steps = grid.n_steps;
  im.t = grid.t;
  im.beta = grid.beta;
  im.entries = Eigen::MatrixXcd::Zero(n, n);
  if (is_trivial(sd)) return im;

  const std::vector<Complex> b = cell_boundaries(grid);
  const Complex half_ib = kImag * (0.5 * grid.beta);

  // Flatten the ordered triangle k >= k' (0-based row r >= column c).
  std::vector<std::pair<int, int>> tasks;
  tasks.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c <= r; ++c) tasks.emplace_back(r, c);
  }

  std::vector<Complex> values(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const auto [r, c] = tasks[idx];
    std::vector<TrigTerm> terms;
    if (r == c) {
      const Complex w = b[r + 1] - b[r];
      terms = {{+1.0, -half_ib}, {-1.0, w - half_ib}};
    } else {
      terms = {{+1.0, b[r + 1] - b[c + 1] - half_ib},
               {+1.0, b[r] - b[c] - half_ib},
               {-1.0, b[r + 1] - b[c] - half_ib},
               {-1.0, b[r] - b[c + 1] - half_ib}};
    }
    try {
      values[idx] = entry_integral(sd, q, grid.beta, terms);
    } catch (const NumericError& err) {
      std::ostringstream msg;
      msg << "influence coefficient (" << r + 1 << ", " << c + 1
          << "): " << err.what();
      throw NumericError(msg.str());
    }
  });

  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const auto [r, c] = tasks[idx];
    im.entries(r, c) = values[idx];
    im.entries(c, r) = values[idx];
  }
  return im;
}

}  // namespace ctpi::bath
