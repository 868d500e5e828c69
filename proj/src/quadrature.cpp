#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "astar/errors.hpp"
#include "astar/numerics.hpp"

namespace astar::numerics {

namespace {

constexpr int kMaxDepth = 60;

struct SimpsonState {
  const ScalarFn& f;
  bool depth_exceeded = false;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= kMaxDepth) {
    st.depth_exceeded = true;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double integrate_piece(SimpsonState& st, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = st.f(a);
  const double fm = st.f(m);
  const double fb = st.f(b);
  return adapt(st, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 0);
}

}  // namespace

double integrate(const ScalarFn& f, double a, double b, double abs_tol,
                 std::span<const double> breaks) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double x : breaks) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  SimpsonState st{f};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    total += integrate_piece(st, lo, hi, abs_tol * (hi - lo) / (b - a));
  }
  if (st.depth_exceeded) {
    throw NumericError("adaptive Simpson quadrature did not converge on [" + std::to_string(a) +
                       ", " + std::to_string(b) + "]");
  }
  return total;
}

double bisect_boundary(const std::function<bool(double)>& inside, double inside_end,
                       double outside_end, double tol) {
  double in = inside_end;
  double out = outside_end;
  while (std::abs(out - in) > tol) {
    const double mid = 0.5 * (in + out);
    if (mid == in || mid == out) break;
    if (inside(mid)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return in;
}

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

double golden_section_argmin(const ScalarFn& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double golden_section_argmax(const ScalarFn& f, double a, double b, double tol) {
  return golden_section_argmin([&f](double x) { return -f(x); }, a, b, tol);
}

}  // namespace astar::numerics
