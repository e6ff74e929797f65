#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace archsweep {

// C(n,k) p^k (1-p)^(n-k), computed in log space; 1e-12 relative for n <= 1e4.
double binom_pmf(int k, int n, double p);

// Exact two-sided tail: sum of pmf(j) over every j whose pmf does not exceed
// pmf(k) (method of small p-values).
double binom_two_sided_p(int k, int n, double p);

struct ProportionTestRow {
  int value = 0;  // the characteristic value this row tests
  int sample_count = 0;
  double sample_prop = 0.0;
  double pop_prop = 0.0;
  // Point probability of seeing exactly sample_count under pop_prop.
  double probability = 0.0;
  // Exact two-sided tail under the same null; pmf and tail answer different
  // questions, both are reported.
  double two_sided_tail_p = 0.0;
};

// One row per distinct value in the population, ascending.
std::vector<ProportionTestRow> proportion_table(std::span<const int> sample,
                                                std::span<const int> population);

struct ZTestResult {
  double z = 0.0;
  double p_two_sided = 0.0;
};

ZTestResult z_test(double sample_mean, double pop_mean, double pop_std, int n);

struct Column {
  std::string name;
  std::vector<double> values;
};

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;  // symmetric, unit diagonal

  double at(std::string_view a, std::string_view b) const;
};

CorrelationMatrix corr_matrix(std::span<const Column> columns);

struct RegressionRow {
  std::string name;
  double coefficient = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

struct RegressionReport {
  std::vector<RegressionRow> rows;  // design order; intercept last if present
  double r2 = 0.0;
  double r2_adjusted = 0.0;
  int n_obs = 0;
};

RegressionReport ols(std::span<const Column> design, std::span<const double> y,
                     bool with_intercept);

// Appends the elementwise square of `name` as a new column "<name>_2".
std::vector<Column> add_quadratic(std::span<const Column> design,
                                  std::string_view name);

double normal_cdf(double z);

// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

// Inverse of student_t_cdf in t for fixed df; prob in (0, 1).
double student_t_quantile(double prob, double df);

}  // namespace archsweep
