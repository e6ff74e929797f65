#include "archsweep/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "archsweep/error.hpp"

namespace archsweep {

namespace {

void check_binom_domain(int k, int n, double p) {
  if (n < 0 || k < 0 || k > n) {
    raise(errc::domain_error, "binomial needs 0 <= k <= n, got k=" + std::to_string(k) +
                                  " n=" + std::to_string(n));
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    raise(errc::domain_error, "binomial needs p in [0, 1]");
  }
}

// log pmf in long double; callers handle p in {0, 1} beforehand.
long double log_binom_pmf(int k, int n, double p) {
  const auto lp = static_cast<long double>(p);
  return std::lgamma(static_cast<long double>(n) + 1.0L) -
         std::lgamma(static_cast<long double>(k) + 1.0L) -
         std::lgamma(static_cast<long double>(n - k) + 1.0L) +
         static_cast<long double>(k) * std::log(lp) +
         static_cast<long double>(n - k) * std::log1p(-lp);
}

}  // namespace

double binom_pmf(int k, int n, double p) {
  check_binom_domain(k, n, p);
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return static_cast<double>(std::exp(log_binom_pmf(k, n, p)));
}

double binom_two_sided_p(int k, int n, double p) {
  check_binom_domain(k, n, p);
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  // Method of small p-values: everything no more probable than the
  // observation counts toward the tail. The slack absorbs rounding ties.
  const long double cutoff = log_binom_pmf(k, n, p) + 1e-9L;
  long double total = 0.0L;
  for (int j = 0; j <= n; ++j) {
    const long double lj = log_binom_pmf(j, n, p);
    if (lj <= cutoff) total += std::exp(lj);
  }
  return static_cast<double>(std::min(1.0L, total));
}

std::vector<ProportionTestRow> proportion_table(std::span<const int> sample,
                                                std::span<const int> population) {
  if (population.empty()) raise(errc::empty_input, "empty population");
  std::map<int, int> pop_counts;
  for (int v : population) ++pop_counts[v];
  std::map<int, int> sample_counts;
  for (int v : sample) {
    if (!pop_counts.contains(v)) {
      raise(errc::domain_error,
            "sample value " + std::to_string(v) + " does not occur in the population");
    }
    ++sample_counts[v];
  }
  const auto n_sample = static_cast<int>(sample.size());
  const auto n_pop = static_cast<double>(population.size());

  std::vector<ProportionTestRow> rows;
  rows.reserve(pop_counts.size());
  for (const auto& [value, count] : pop_counts) {
    ProportionTestRow row;
    row.value = value;
    const auto it = sample_counts.find(value);
    row.sample_count = it == sample_counts.end() ? 0 : it->second;
    row.sample_prop = n_sample == 0 ? 0.0 : row.sample_count / static_cast<double>(n_sample);
    row.pop_prop = count / n_pop;
    row.probability = binom_pmf(row.sample_count, n_sample, row.pop_prop);
    row.two_sided_tail_p = binom_two_sided_p(row.sample_count, n_sample, row.pop_prop);
    rows.push_back(row);
  }
  return rows;
}

ZTestResult z_test(double sample_mean, double pop_mean, double pop_std, int n) {
  if (!(pop_std > 0.0)) raise(errc::domain_error, "pop_std must be > 0");
  if (n < 1) raise(errc::domain_error, "n must be >= 1");
  ZTestResult result;
  result.z = (sample_mean - pop_mean) / (pop_std / std::sqrt(static_cast<double>(n)));
  result.p_two_sided = 2.0 * (1.0 - normal_cdf(std::fabs(result.z)));
  return result;
}

double CorrelationMatrix::at(std::string_view a, std::string_view b) const {
  auto index_of = [this](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    raise(errc::domain_error, "no variable named \"" + std::string(name) + "\"");
  };
  return r[index_of(a)][index_of(b)];
}

CorrelationMatrix corr_matrix(std::span<const Column> columns) {
  if (columns.size() < 2) raise(errc::empty_input, "need at least 2 columns");
  const std::size_t n = columns[0].values.size();
  if (n < 2) raise(errc::insufficient_data, "need at least 2 rows");
  for (const auto& col : columns) {
    if (col.values.size() != n) {
      raise(errc::dimension_mismatch, "column \"" + col.name + "\" has mismatched length");
    }
  }

  const std::size_t m = columns.size();
  std::vector<std::vector<double>> centered(m, std::vector<double>(n));
  std::vector<double> norm(m);
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (double v : columns[j].values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = columns[j].values[i] - mean;
      centered[j][i] = d;
      ss += d * d;
    }
    if (ss == 0.0) {
      raise(errc::zero_variance, "column \"" + columns[j].name + "\" has zero variance");
    }
    norm[j] = std::sqrt(ss);
  }

  CorrelationMatrix out;
  out.names.reserve(m);
  for (const auto& col : columns) out.names.push_back(col.name);
  out.r.assign(m, std::vector<double>(m, 1.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += centered[a][i] * centered[b][i];
      const double r = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
      out.r[a][b] = r;
      out.r[b][a] = r;
    }
  }
  return out;
}

RegressionReport ols(std::span<const Column> design, std::span<const double> y,
                     bool with_intercept) {
  if (design.empty()) raise(errc::empty_input, "empty design");
  const std::size_t n = y.size();
  if (n == 0) raise(errc::empty_input, "empty response");
  for (const auto& col : design) {
    if (col.values.size() != n) {
      raise(errc::dimension_mismatch, "column \"" + col.name + "\" has mismatched length");
    }
  }
  const std::size_t n_vars = design.size();
  const std::size_t p = n_vars + (with_intercept ? 1 : 0);
  if (n <= p) {
    raise(errc::insufficient_data,
          "need more than " + std::to_string(p) + " observations, got " + std::to_string(n));
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < n_vars; ++j) {
    x.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(
        design[j].values.data(), static_cast<Eigen::Index>(n));
  }
  if (with_intercept) x.col(static_cast<Eigen::Index>(p - 1)).setOnes();
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    raise(errc::singular_design, "design matrix is rank-deficient (rank " +
                                     std::to_string(qr.rank()) + " of " + std::to_string(p) + ")");
  }
  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd resid = yv - x * beta;
  const double sse = resid.squaredNorm();
  const double df = static_cast<double>(n - p);
  const double sigma2 = sse / df;

  // X·P = Q·R, so (XᵀX)⁻¹ = P·R⁻¹·R⁻ᵀ·Pᵀ.
  const Eigen::MatrixXd r_inv =
      qr.matrixR()
          .topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
          .triangularView<Eigen::Upper>()
          .solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                           static_cast<Eigen::Index>(p)));
  const Eigen::MatrixXd xtx_inv =
      qr.colsPermutation() * (r_inv * r_inv.transpose()) * qr.colsPermutation().transpose();

  double sst = 0.0;
  if (with_intercept) {
    const double ybar = yv.mean();
    sst = (yv.array() - ybar).square().sum();
  } else {
    sst = yv.squaredNorm();
  }
  if (sst == 0.0) raise(errc::zero_variance, "dependent variable has zero variance");

  RegressionReport report;
  report.n_obs = static_cast<int>(n);
  report.r2 = 1.0 - sse / sst;
  report.r2_adjusted = 1.0 - (1.0 - report.r2) * (static_cast<double>(n) - 1.0) / df;

  const double tq = student_t_quantile(0.975, df);
  report.rows.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    RegressionRow row;
    row.name = j < n_vars ? design[j].name : "intercept";
    row.coefficient = beta(static_cast<Eigen::Index>(j));
    const double var_j =
        sigma2 * xtx_inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
    row.std_error = std::sqrt(std::max(0.0, var_j));
    if (row.std_error > 0.0) {
      row.t_stat = row.coefficient / row.std_error;
      row.p_value = 2.0 * student_t_cdf(-std::fabs(row.t_stat), df);
    } else {
      // Exact fit: the conventional limits keep the report finite.
      row.t_stat = row.coefficient == 0.0
                       ? 0.0
                       : std::copysign(std::numeric_limits<double>::infinity(), row.coefficient);
      row.p_value = row.coefficient == 0.0 ? 1.0 : 0.0;
    }
    row.ci95_low = row.coefficient - tq * row.std_error;
    row.ci95_high = row.coefficient + tq * row.std_error;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<Column> add_quadratic(std::span<const Column> design, std::string_view name) {
  const Column* source = nullptr;
  for (const auto& col : design) {
    if (col.name == name) source = &col;
  }
  if (source == nullptr) {
    raise(errc::domain_error, "no column named \"" + std::string(name) + "\"");
  }
  Column squared;
  squared.name = std::string(name) + "_2";
  for (const auto& col : design) {
    if (col.name == squared.name) {
      raise(errc::name_collision, "column \"" + squared.name + "\" already exists");
    }
  }
  squared.values.reserve(source->values.size());
  for (double v : source->values) squared.values.push_back(v * v);

  std::vector<Column> out(design.begin(), design.end());
  out.push_back(std::move(squared));
  return out;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {

// Continued fraction for the incomplete beta, evaluated by the modified
// Lentz method.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  raise(errc::domain_error, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) raise(errc::domain_error, "incomplete_beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) raise(errc::domain_error, "incomplete_beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) + std::lgamma(a + b) -
                           std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(log_front);
  // The continued fraction converges fast only below the distribution mean;
  // above it, use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) raise(errc::domain_error, "df must be > 0");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double prob, double df) {
  if (!(df > 0.0)) raise(errc::domain_error, "df must be > 0");
  if (!(prob > 0.0 && prob < 1.0)) raise(errc::domain_error, "prob must lie in (0, 1)");
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; student_t_cdf(lo, df) > prob; ++i) {
    if (i > 2000) raise(errc::domain_error, "quantile bracket failed");
    lo *= 2.0;
  }
  for (int i = 0; student_t_cdf(hi, df) < prob; ++i) {
    if (i > 2000) raise(errc::domain_error, "quantile bracket failed");
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace archsweep
