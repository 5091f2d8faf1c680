#include "macflow/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "macflow/dynamics.hpp"
#include "macflow/rng.hpp"
#include "macflow/smallmat.hpp"

namespace macflow {

namespace {

struct Sample {
  double margin;  // lhs - rhs
  double slack;
  std::function<std::string()> describe;
};

CheckResult run_suite(std::string name, std::string statement, double base_slack, std::uint64_t samples,
                      std::uint64_t seed, const std::function<Sample(CounterRng&)>& draw) {
  CheckResult r;
  r.name = std::move(name);
  r.statement = std::move(statement);
  r.samples = samples;
  r.slack = base_slack;
  r.worst_margin = -std::numeric_limits<double>::infinity();
  CounterRng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    Sample s = draw(rng);
    r.worst_margin = std::max(r.worst_margin, s.margin);
    if (!(s.margin <= s.slack)) {
      if (r.violations == 0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "sample " << i << ": " << s.describe() << "; margin lhs - rhs = " << s.margin << " > slack "
            << s.slack;
        r.first_violation = msg.str();
      }
      ++r.violations;
    }
  }
  return r;
}

std::string show(const SmallMat& a) {
  std::ostringstream out;
  out.precision(17);
  out << '[';
  for (int i = 0; i < a.size(); ++i) {
    out << (i ? "; " : "");
    for (int j = 0; j < a.size(); ++j) out << (j ? ", " : "") << a(i, j);
  }
  out << ']';
  return out.str();
}

/// Entries uniform in [-s, s] with s log-uniform in [10^-2, 10].
SmallMat random_matrix(CounterRng& rng, int m) {
  const double scale = std::pow(10.0, rng.uniform(-2.0, 1.0));
  SmallMat a(m);
  for (double& v : a.entries()) v = rng.uniform(-scale, scale);
  return a;
}

/// Half the draws uniform on (0, hi], half log-uniform on [hi 10^-6, hi].
double random_tau(CounterRng& rng, double hi) {
  if (rng.uniform() < 0.5) return rng.uniform_open_closed(hi);
  return hi * std::pow(10.0, -6.0 * rng.uniform());
}

/// A matrix inside the Frobenius ball of radius sqrt(m).
SmallMat random_in_ball(CounterRng& rng, int m) {
  SmallMat a(m);
  for (double& v : a.entries()) v = rng.uniform(-1.0, 1.0);
  const double norm = a.frobenius_norm();
  if (norm > 0.0) a *= rng.uniform() * std::sqrt(static_cast<double>(m)) / norm;
  return a;
}

double sum_sqrt_one_plus(const std::vector<double>& values, double alpha) {
  double s = 0.0;
  for (double v : values) s += std::sqrt(1.0 + alpha * v * v);
  return s;
}

double trace_sqrt(const SmallMat& x) { return sum_sqrt_one_plus(svd(x).singular_values, 1.0); }

}  // namespace

CheckResult check_trace_inequality(std::uint64_t samples, std::uint64_t seed) {
  return run_suite("trace inequality", "Tr (I + a diag^2(U))^{1/2} <= Tr (I + a U U^T)^{1/2}", 1e-10, samples, seed,
                   [](CounterRng& rng) {
                     const int m = rng.uniform_int(1, 5);
                     const double alpha = rng.uniform_open_closed(100.0);
                     const SmallMat u = random_matrix(rng, m);
                     std::vector<double> diag(static_cast<std::size_t>(m));
                     for (int i = 0; i < m; ++i) diag[static_cast<std::size_t>(i)] = u(i, i);
                     const double lhs = sum_sqrt_one_plus(diag, alpha);
                     const double rhs = sum_sqrt_one_plus(svd(u).singular_values, alpha);
                     return Sample{lhs - rhs, 1e-10, [=] {
                                     std::ostringstream o;
                                     o.precision(17);
                                     o << "m=" << m << " a=" << alpha << " U=" << show(u);
                                     return o.str();
                                   }};
                   });
}

CheckResult check_g_lower_bound(std::uint64_t samples, std::uint64_t seed) {
  return run_suite("G lower bound", "Tr G(U) >= -m/4", 1e-10, samples, seed, [](CounterRng& rng) {
    const int m = rng.uniform_int(1, 5);
    const double tau = random_tau(rng, 50.0);
    const SmallMat u = random_matrix(rng, m);
    const double value = g_trace(u, tau);
    return Sample{-0.25 * m - value, 1e-10, [=] {
                    std::ostringstream o;
                    o.precision(17);
                    o << "m=" << m << " tau=" << tau << " U=" << show(u) << " Tr G(U)=" << value;
                    return o.str();
                  }};
  });
}

CheckResult check_g_upper_bound(std::uint64_t samples, std::uint64_t seed) {
  return run_suite(
      "G upper bound", "Tr G(U) <= Tr G(diag U) + ||U - diag U||_F^2 / (2 tau)  (slack 1e-10 relative to max(1, |rhs|))",
      1e-10, samples, seed, [](CounterRng& rng) {
        const int m = rng.uniform_int(1, 5);
        const double tau = random_tau(rng, 50.0);
        const SmallMat u = random_matrix(rng, m);
        const SmallMat d = u.diagonal_part();
        const SmallMat off = u - d;
        const double off2 = frobenius_inner(off, off);
        const double lhs = g_trace(u, tau);
        const double rhs = g_trace(d, tau) + off2 / (2.0 * tau);
        return Sample{lhs - rhs, 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}), [=] {
                        std::ostringstream o;
                        o.precision(17);
                        o << "m=" << m << " tau=" << tau << " U=" << show(u) << " lhs=" << lhs << " rhs=" << rhs;
                        return o.str();
                      }};
      });
}

CheckResult check_flow_lipschitz(std::uint64_t samples, std::uint64_t seed) {
  return run_suite("flow Lipschitz bound",
                   "||S_N(tau) V1 - S_N(tau) V2||_F <= e^{(1+3m) tau} ||V1 - V2||_F for ||V_i||_F <= sqrt(m)", 1e-10,
                   samples, seed, [](CounterRng& rng) {
                     const int m = rng.uniform_int(1, 5);
                     const double tau = rng.uniform_open_closed(2.0);
                     const SmallMat v1 = random_in_ball(rng, m);
                     SmallMat v2 = random_in_ball(rng, m);
                     if (rng.uniform() < 0.5) {
                       // Nearby pairs probe the local constant.
                       const double t = std::pow(10.0, -6.0 * rng.uniform());
                       v2 = v1 + t * (v2 - v1);
                     }
                     const double lhs = (nonlinear_flow(v1, tau) - nonlinear_flow(v2, tau)).frobenius_norm();
                     const double rhs = std::exp((1.0 + 3.0 * m) * tau) * (v1 - v2).frobenius_norm();
                     return Sample{lhs - rhs, 1e-10, [=] {
                                     std::ostringstream o;
                                     o.precision(17);
                                     o << "m=" << m << " tau=" << tau << " V1=" << show(v1) << " V2=" << show(v2);
                                     return o.str();
                                   }};
                   });
}

CheckResult check_g_curvature(std::uint64_t samples, std::uint64_t seed) {
  return run_suite("g curvature bound", "(g(l+h) - 2 g(l) + g(l-h)) / h^2 <= 1, h = 1e-3", 1e-6, samples, seed,
                   [](CounterRng& rng) {
                     const double lambda = rng.uniform(-2.0, 2.0);
                     const double tau = random_tau(rng, 50.0);
                     const GCoefficients c = GCoefficients::make(tau);
                     const double h = 1e-3;
                     const double second =
                         (g_scalar(lambda + h, c) - 2.0 * g_scalar(lambda, c) + g_scalar(lambda - h, c)) / (h * h);
                     return Sample{second - 1.0, 1e-6, [=] {
                                     std::ostringstream o;
                                     o.precision(17);
                                     o << "lambda=" << lambda << " tau=" << tau << " g''~" << second;
                                     return o.str();
                                   }};
                   });
}

CheckResult check_trace_sqrt_convexity(std::uint64_t samples, std::uint64_t seed) {
  return run_suite("trace-sqrt convexity",
                   "Tr (I + M M^T)^{1/2} <= l Tr (I + A A^T)^{1/2} + (1-l) Tr (I + B B^T)^{1/2}, M = l A + (1-l) B",
                   1e-10, samples, seed, [](CounterRng& rng) {
                     const int m = rng.uniform_int(1, 5);
                     const double lambda = rng.uniform_open_closed(1.0) * (1.0 - 1e-12);
                     const SmallMat a = random_matrix(rng, m);
                     const SmallMat b = random_matrix(rng, m);
                     const SmallMat mix = lambda * a + (1.0 - lambda) * b;
                     const double lhs = trace_sqrt(mix);
                     const double rhs = lambda * trace_sqrt(a) + (1.0 - lambda) * trace_sqrt(b);
                     return Sample{lhs - rhs, 1e-10, [=] {
                                     std::ostringstream o;
                                     o.precision(17);
                                     o << "m=" << m << " l=" << lambda << " A=" << show(a) << " B=" << show(b);
                                     return o.str();
                                   }};
                   });
}

std::vector<CheckResult> run_all_checks(std::uint64_t samples, std::uint64_t seed) {
  using Suite = CheckResult (*)(std::uint64_t, std::uint64_t);
  const Suite suites[] = {check_trace_inequality, check_g_lower_bound,  check_g_upper_bound,
                          check_flow_lipschitz,   check_g_curvature,    check_trace_sqrt_convexity};
  std::vector<CheckResult> out;
  std::uint64_t k = 0;
  for (Suite s : suites) out.push_back(s(samples, counter_hash(seed, k++)));
  return out;
}

}  // namespace macflow
