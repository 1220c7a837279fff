#include "ctpi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace ctpi {

namespace {

// 15-point Kronrod abscissae (non-negative half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a = 0;
  double b = 0;
  Complex integral{0, 0};
  double error = 0;
};

Segment evaluate(const std::function<Complex(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex values[15];
  values[7] = f(center);
  Complex kronrod = kWgk[7] * values[7];
  Complex gauss = kWg[3] * values[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    values[i] = f(center - dx);
    values[14 - i] = f(center + dx);
    const Complex pair_sum = values[i] + values[14 - i];
    kronrod += kWgk[i] * pair_sum;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair_sum;
  }
  // Variation scale of the integrand over the panel, used to damp the raw
  // Gauss/Kronrod difference once a panel has converged; the raw difference
  // saturates near roundoff and would otherwise overstate the error.
  const Complex mean = 0.5 * kronrod;
  double resasc = kWgk[7] * std::abs(values[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] *
              (std::abs(values[i] - mean) + std::abs(values[14 - i] - mean));
  resasc *= half;

  Segment seg;
  seg.a = a;
  seg.b = b;
  seg.integral = half * kronrod;
  double err = std::abs(half * (kronrod - gauss));
  if (resasc > 0 && err > 0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  seg.error = err;
  return seg;
}

struct WorstFirst {
  bool operator()(const Segment& lhs, const Segment& rhs) const {
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.a > rhs.a;  // tie-break keeps the ordering deterministic
  }
};

}  // namespace

Complex adaptive_gauss_kronrod(const std::function<Complex(double)>& f,
                               double a, double b, double rel_tol,
                               int subdivision_limit, int initial_segments) {
  if (!(b > a)) {
    if (a == b) return Complex{0, 0};
    throw std::invalid_argument("adaptive_gauss_kronrod: b < a");
  }
  if (initial_segments < 1) initial_segments = 1;
  if (initial_segments > subdivision_limit) initial_segments = subdivision_limit;

  std::priority_queue<Segment, std::vector<Segment>, WorstFirst> queue;
  double total_error = 0;
  Complex total{0, 0};
  double l1_mass = 0;  // cancellation-aware scale for the stopping rule
  const double step = (b - a) / initial_segments;
  for (int i = 0; i < initial_segments; ++i) {
    const double lo = a + i * step;
    const double hi = (i + 1 == initial_segments) ? b : a + (i + 1) * step;
    Segment seg = evaluate(f, lo, hi);
    total += seg.integral;
    total_error += seg.error;
    l1_mass += std::abs(seg.integral);
    queue.push(seg);
  }

  // Oscillatory integrands can cancel almost completely; relative accuracy
  // against |total| is then unreachable in finite precision, so convergence
  // is judged against the larger of |total| and the accumulated segment
  // magnitude.
  int segments = initial_segments;
  while (total_error > rel_tol * std::max(std::abs(total), l1_mass) &&
         total_error > 1e-300 && segments < subdivision_limit) {
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval at roundoff width
    Segment left = evaluate(f, worst.a, mid);
    Segment right = evaluate(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    l1_mass += std::abs(left.integral) + std::abs(right.integral) -
               std::abs(worst.integral);
    queue.push(left);
    queue.push(right);
    ++segments;
  }

  // Re-sum in coordinate order so the result does not depend on the order
  // in which intervals were refined.
  std::vector<Segment> all;
  all.reserve(static_cast<std::size_t>(segments));
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Segment& lhs, const Segment& rhs) { return lhs.a < rhs.a; });
  Complex result{0, 0};
  total_error = 0;
  l1_mass = 0;
  for (const Segment& seg : all) {
    result += seg.integral;
    total_error += seg.error;
    l1_mass += std::abs(seg.integral);
  }

  const double scale = std::max(std::abs(result), l1_mass);
  if (total_error > rel_tol * scale && total_error > 1e-300 && scale > 0) {
    const double achieved = total_error / scale;
    if (achieved > 100 * rel_tol) {
      std::ostringstream msg;
      msg << "adaptive quadrature stalled at relative error " << achieved
          << " (target " << rel_tol << ", " << segments << " segments)";
      throw NumericError(msg.str());
    }
  }
  if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
    throw NumericError("adaptive quadrature produced a non-finite result");
  }
  return result;
}

}  // namespace ctpi
