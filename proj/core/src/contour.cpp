#include "ctpi/contour.hpp"

namespace ctpi {

ContourGrid build_contour(int n_steps, double t, double beta) {
  if (n_steps < 1) throw std::invalid_argument("build_contour: n_steps must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("build_contour: beta must be > 0");

  ContourGrid grid;
  grid.n_steps = n_steps;
  grid.t = t;
  grid.beta = beta;
  const Complex t_c{t, -0.5 * beta};
  grid.dt_c = t_c / static_cast<double>(n_steps);
  grid.points.resize(static_cast<std::size_t>(grid.size()));

  // Forward branch: z_{2N+2} = 0 down to z_{N+2} = t_c.
  for (int j = 0; j <= n_steps; ++j) {
    grid.points[static_cast<std::size_t>(2 * n_steps + 1 - j)] =
        static_cast<double>(j) * grid.dt_c;
  }
  // Backward branch: z_{N+1} = t_c down to z_1 = -i beta.
  for (int j = 0; j <= n_steps; ++j) {
    grid.points[static_cast<std::size_t>(n_steps - j)] =
        t_c - static_cast<double>(j) * std::conj(grid.dt_c);
  }
  return grid;
}

std::vector<Complex> cell_boundaries(const ContourGrid& grid) {
  const std::size_t n = grid.points.size();
  std::vector<Complex> b(n + 1);
  b.front() = grid.points.front();
  for (std::size_t i = 1; i < n; ++i) {
    b[i] = 0.5 * (grid.points[i - 1] + grid.points[i]);
  }
  b.back() = grid.points.back();
  return b;
}

}  // namespace ctpi
