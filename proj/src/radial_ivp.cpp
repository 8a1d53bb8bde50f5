#include "bnlab/radial_ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>

#include "bnlab/errors.hpp"
#include "bnlab/numerics.hpp"

namespace bnlab {

namespace {

constexpr double kOverflow = 1e150;
constexpr int kInteriorProbes = 4;

}  // namespace

double critical_power(int N) { return 4.0 / (N - 2); }

double critical_f(int N, double u) {
  switch (N) {
    case 3: { const double u2 = u * u; return u2 * u2 * u; }
    case 4: return u * u * u;
    case 5: return std::copysign(std::pow(std::abs(u), 7.0 / 3.0), u);
    case 6: return std::abs(u) * u;
    default: fail(ErrorKind::InvalidArgument, "dimension must be 3..6");
  }
}

double critical_df(int N, double u) {
  switch (N) {
    case 3: { const double u2 = u * u; return 5.0 * u2 * u2; }
    case 4: return 3.0 * u * u;
    case 5: return (7.0 / 3.0) * std::pow(std::abs(u), 4.0 / 3.0);
    case 6: return 2.0 * std::abs(u);
    default: fail(ErrorKind::InvalidArgument, "dimension must be 3..6");
  }
}

void IvpSpec::validate() const {
  if (N < 3 || N > 6) fail(ErrorKind::InvalidArgument, "N must be in {3,4,5,6}");
  if (!(r_max > 0)) fail(ErrorKind::InvalidArgument, "r_max must be positive");
  if (!(tol_rel > 0) || !(tol_abs > 0)) fail(ErrorKind::InvalidArgument, "tolerances must be positive");
  if (!std::isfinite(a) || !std::isfinite(lambda)) fail(ErrorKind::InvalidArgument, "a and lambda must be finite");
}

double taylor_start_radius(const IvpSpec& spec) {
  const double c = critical_f(spec.N, spec.a) + spec.lambda * spec.a;
  const double k = std::abs(c) * (critical_df(spec.N, spec.a) + std::abs(spec.lambda)) /
                   (8.0 * spec.N * (spec.N + 2));
  if (k == 0.0) return 1e-6;
  return std::min(1e-6, std::pow(spec.tol_abs / k, 0.25));
}

namespace {

// f(b + v) - f(b) without cancellation when |v| << |b|.
double f_increment(int N, double b, double v) {
  if (b != 0.0 && std::abs(v) < 0.5 * std::abs(b))
    return critical_f(N, b) * std::expm1((critical_power(N) + 1) * std::log1p(v / b));
  return critical_f(N, b + v) - critical_f(N, b);
}

}  // namespace

ode::State<2> Trajectory::bubble(double r) const {
  const int N = spec_.N;
  const double q = 1 + bubble_s_ * r * r;
  const double B = spec_.a * std::pow(q, -0.5 * (N - 2));
  return {B, -(N - 2) * bubble_s_ * r * B / q};
}

double Trajectory::r_end() const {
  if (!steps_ || steps_->empty()) return spec_.r_max;
  return steps_->back().r1();
}

ode::State<2> Trajectory::eval(double r) const {
  if (r < 0 || r > r_end() * (1 + 1e-14)) fail(ErrorKind::RangeError, "radius outside trajectory");
  if (!steps_ || steps_->empty()) return {spec_.a, 0.0};
  if (r <= r_start_) {
    const double r2 = r * r;
    return {spec_.a + taylor_b_ * r2 + taylor_k_ * r2 * r2, r * (2 * taylor_b_ + 4 * taylor_k_ * r2)};
  }
  const auto& st = *steps_;
  auto it = std::upper_bound(st.begin(), st.end(), r, [](double x, const auto& s) { return x < s.r0; });
  const auto& step = it == st.begin() ? st.front() : *std::prev(it);
  const double x = std::min(r, step.r1());
  const auto v = step.eval(x);
  const auto B = bubble(x);
  return {B[0] + v[0], B[1] + v[1]};
}

std::vector<double> Trajectory::nodes() const {
  std::vector<double> out;
  if (!steps_ || steps_->empty()) return out;
  out.reserve(steps_->size() + 1);
  out.push_back(r_start_);
  for (const auto& s : *steps_) out.push_back(s.r1());
  return out;
}

double Trajectory::max_abs_u_prime() const {
  double m = 0.0;
  if (!steps_) return m;
  for (const auto& s : *steps_) m = std::max({m, std::abs(eval(s.r0)[1]), std::abs(eval(s.r1())[1])});
  return m;
}

double Trajectory::max_abs_u(double lo, double hi) const {
  double m = 0.0;
  if (lo <= r_start_) m = std::abs(spec_.a);
  if (steps_)
    for (const auto& s : *steps_)
      if (s.r1() >= lo && s.r1() <= hi) m = std::max(m, std::abs(eval(s.r1())[0]));
  for (const auto& c : crits_)
    if (c.r >= lo && c.r <= hi) m = std::max(m, std::abs(c.u));
  return m;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "r,u,u_prime\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", 0.0, spec_.a, 0.0);
  os << buf;
  for (double r : nodes()) {
    const auto y = eval(r);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r, y[0], y[1]);
    os << buf;
  }
}

Trajectory integrate(const IvpSpec& spec, const StopRule& stop) {
  spec.validate();
  Trajectory t;
  t.spec_ = spec;
  auto steps = std::make_shared<std::vector<ode::DenseStep<2>>>();

  if (spec.a == 0.0) {
    t.r_start_ = spec.r_max;
    t.steps_ = steps;
    if (stop.zeros > 0 && stop.require_zeros) fail(ErrorKind::TooFewZeros, "trivial solution has no zeros");
    return t;
  }

  const int N = spec.N;
  const double lam = spec.lambda;
  const double c = critical_f(N, spec.a) + lam * spec.a;
  t.taylor_b_ = -c / (2.0 * N);
  t.taylor_k_ = c * (critical_df(N, spec.a) + lam) / (8.0 * N * (N + 2));
  const double r0 = taylor_start_radius(spec);
  t.r_start_ = r0;
  t.bubble_s_ = std::pow(std::abs(spec.a), critical_power(N)) / (N * (N - 2));
  // Taylor coefficients of v = u - B; the f(a) parts cancel exactly.
  const double a = spec.a;
  const double vb = -lam * a / (2.0 * N);
  const double vk = lam * (a * critical_df(N, a) + critical_f(N, a) + lam * a) / (8.0 * N * (N + 2));
  const double r02 = r0 * r0;
  ode::State<2> y0{vb * r02 + vk * r02 * r02, r0 * (2 * vb + 4 * vk * r02)};

  const Trajectory& tr = t;
  auto rhs = [N, lam, &tr](double r, const ode::State<2>& y) -> ode::State<2> {
    const double B = tr.bubble(r)[0];
    return {y[1], -(N - 1) / r * y[1] - f_increment(N, B, y[0]) - lam * (B + y[0])};
  };

  // Error weights follow the local amplitude max(|u|, r|u'|) so that the
  // small outer tail of a concentrated solution keeps tol_rel accuracy.
  auto scale = [](double r, const ode::State<2>& y) -> ode::State<2> {
    const double amp = std::max(std::abs(y[0]), r * std::abs(y[1]));
    return {amp, amp / r};
  };
  ode::Options opt;
  opt.rtol = spec.tol_rel;
  opt.atol = 1e-300;
  opt.h_init = r0;
  // Steps well below the oscillation length keep the dense output at step accuracy.
  opt.h_max = 0.2 / std::sqrt(std::max(lam, 1.0));

  // For N >= 5 f is not smooth at u = 0 and a step across a zero of u loses
  // its order. Such a step is dropped and the integration lands on the zero.
  const bool kinked = N >= 5;
  double landing = std::numeric_limits<double>::quiet_NaN();
  double landed_at = -1.0;
  bool redo = false;

  bool overflow = false;
  auto observer = [&](const ode::DenseStep<2>& s) {
    steps->push_back(s);
    const auto& step = steps->back();
    auto full = [&](double x) {
      const auto v = step.eval(x);
      const auto B = t.bubble(x);
      return ode::State<2>{B[0] + v[0], B[1] + v[1]};
    };
    // Probe a few interior points so that a pair of sign changes inside one
    // step is not missed.
    double prev_r = step.r0;
    ode::State<2> prev = full(step.r0);
    for (int j = 1; j <= kInteriorProbes + 1; ++j) {
      const double rr = j == kInteriorProbes + 1 ? step.r1() : step.r0 + step.h * j / (kInteriorProbes + 1);
      const ode::State<2> cur = full(rr);
      if (std::abs(cur[0]) > kOverflow || !std::isfinite(cur[0]) || !std::isfinite(cur[1])) {
        overflow = true;
        return false;
      }
      if ((prev[1] < 0) != (cur[1] < 0) && prev[1] != 0) {
        const double rc = num::find_root([&](double x) { return full(x)[1]; }, prev_r, rr, 1e-13);
        t.crits_.push_back({rc, full(rc)[0]});
      }
      if ((prev[0] < 0) != (cur[0] < 0) && prev[0] != 0) {
        const double rz = num::find_root([&](double x) { return full(x)[0]; }, prev_r, rr, 1e-14);
        if (kinked && std::isnan(landing) && step.r0 != landed_at && rz - step.r0 > 1e-9 * step.h) {
          const double start = step.r0;
          std::erase_if(t.crits_, [start](const CritPoint& p) { return p.r > start; });
          steps->pop_back();
          landing = rz;
          redo = true;
          return false;
        }
        t.zeros_.push_back(rz);
        if (stop.zeros > 0 && static_cast<int>(t.zeros_.size()) >= stop.zeros) return false;
      }
      prev_r = rr;
      prev = cur;
    }
    return true;
  };

  double r_cur = r0;
  ode::State<2> y_cur = y0;
  ode::Status status;
  while (true) {
    redo = false;
    const double r_end = std::isnan(landing) ? spec.r_max : landing;
    status = ode::integrate<2>(rhs, r_cur, y_cur, r_end, opt, observer, scale);
    if (!steps->empty()) {
      r_cur = steps->back().r1();
      y_cur = steps->back().eval(r_cur);
      opt.h_init = std::abs(steps->back().h);
    }
    if (redo) continue;
    if (!std::isnan(landing) && status == ode::Status::Finished) {
      landed_at = landing;
      landing = std::numeric_limits<double>::quiet_NaN();
      // An exact hit is invisible to the sign-change test on either side.
      if (t.bubble(r_cur)[0] + y_cur[0] == 0.0 && (t.zeros_.empty() || t.zeros_.back() < r_cur)) {
        t.zeros_.push_back(r_cur);
        if (stop.zeros > 0 && static_cast<int>(t.zeros_.size()) >= stop.zeros) {
          status = ode::Status::Stopped;
          break;
        }
      }
      continue;
    }
    break;
  }
  t.steps_ = steps;
  if (overflow) fail(ErrorKind::NonFinite, "solution exceeded overflow guard");
  if (status == ode::Status::TooManySteps || status == ode::Status::StepTooSmall || status == ode::Status::NonFinite)
    fail(ErrorKind::NonFinite, "integrator failed before the stop rule was met");
  if (status == ode::Status::Stopped && stop.zeros > 0 && static_cast<int>(t.zeros_.size()) >= stop.zeros) {
    t.zeros_.resize(stop.zeros);
    const double last = t.zeros_.back();
    std::erase_if(t.crits_, [last](const CritPoint& p) { return p.r > last; });
  }
  if (stop.zeros > 0 && stop.require_zeros && static_cast<int>(t.zeros_.size()) < stop.zeros)
    fail(ErrorKind::TooFewZeros, "r_max reached before the requested zero count");
  return t;
}

double check_integral_identity(const Trajectory& traj, double r, double b) {
  if (!(r > 0) || r > b || b > traj.r_end()) fail(ErrorKind::RangeError, "need 0 < r <= b <= r_end");
  if (r == b) return 0.0;
  const int N = traj.spec().N;
  const double lam = traj.spec().lambda;
  std::vector<double> panels{r};
  for (double x : traj.nodes())
    if (x > r && x < b) panels.push_back(x);
  panels.push_back(b);
  auto g = [&](double s) {
    const double u = traj.u(s);
    return std::pow(s, N - 1) * (critical_f(N, u) + lam * u);
  };
  // u is a polynomial on each step, so one fixed rule per step suffices.
  double I = 0.0;
  for (std::size_t i = 0; i + 1 < panels.size(); ++i)
    I += boost::math::quadrature::gauss<double, 30>::integrate(g, panels[i], panels[i + 1]);
  return traj.u_prime(r) - (std::pow(b, N - 1) * traj.u_prime(b) + I) / std::pow(r, N - 1);
}

void assert_interlacing(const Trajectory& traj) {
  const auto& z = traj.zeros();
  const auto& c = traj.crits();
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const auto n = std::count_if(c.begin(), c.end(), [&](const CritPoint& p) { return p.r > z[i] && p.r < z[i + 1]; });
    if (n != 1) fail(ErrorKind::StructureViolation, "zeros and critical points do not interlace");
  }
  if (!z.empty()) {
    const auto n = std::count_if(c.begin(), c.end(), [&](const CritPoint& p) { return p.r < z[0]; });
    if (n != 0) fail(ErrorKind::StructureViolation, "critical point inside the first nodal zone");
  }
}

}  // namespace bnlab
