#include "dualinspect/numeric.hpp"

#include <string>

#include "dualinspect/errors.hpp"

namespace dualinspect {

LogFactorialTable::LogFactorialTable(std::size_t cap) : table_(cap + 1) {
  table_[0] = 0.0;
  for (std::size_t n = 1; n <= cap; ++n) {
    table_[n] = std::lgamma(static_cast<double>(n) + 1.0);
  }
}

const LogFactorialTable& default_log_factorials() {
  static const LogFactorialTable table;
  return table;
}

double log_poisson_pmf(std::uint64_t k, double mean) {
  if (mean == 0.0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
}

double log_sum_exp(std::span<const double> xs) {
  LogSumExp acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 32;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorKind::Domain,
                "normal_quantile: probability must lie in (0,1), got " + std::to_string(prob));
  }
  const double q = prob - 0.5;
  double val;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    val = q *
          (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                67265.770927008700853) * r + 45921.953931549871457) * r +
              13731.693765509461125) * r + 1971.5909503065514427) * r +
            133.14166789178437745) * r + 3.387132872796366608) /
          (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                39307.89580009271061) * r + 21213.794301586595867) * r +
              5394.1960214247511077) * r + 687.1870074920579083) * r +
            42.313330701600911252) * r + 1.0);
    return val;
  }
  double r = q < 0.0 ? prob : 1.0 - prob;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + .0227238449892691845833) * r +
                .24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                .0151986665636164571966) * r + .14810397642748007459) * r +
              .68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                .0012426609473880784386) * r + .026532189526576123093) * r +
              .29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              .0148753612908506148525) * r + .13692988092273580531) * r +
            .59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

std::uint64_t poisson_upper_quantile(double mean, double tail_eps) {
  if (!(mean >= 0.0) || !(tail_eps > 0.0 && tail_eps < 1.0)) {
    throw Error(ErrorKind::Domain, "poisson_upper_quantile: invalid mean or tail probability");
  }
  if (mean == 0.0) return 0;
  // P(X > k) <= pmf(k+1) / (1 - mean/(k+2)) once k + 2 > mean.
  std::uint64_t k = static_cast<std::uint64_t>(std::floor(mean));
  for (;; ++k) {
    const double ratio = mean / (static_cast<double>(k) + 2.0);
    if (ratio >= 1.0) continue;
    const double bound = std::exp(log_poisson_pmf(k + 1, mean)) / (1.0 - ratio);
    if (bound < tail_eps) return k;
  }
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::SampleSize: return "sample_size";
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::UndefinedEstimator: return "undefined_estimator";
    case ErrorKind::CovarianceNonpositive: return "covariance_nonpositive";
    case ErrorKind::NoInteriorMaximum: return "no_interior_maximum";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Singular: return "singular";
  }
  return "unknown";
}

bool is_estimation_pathology(ErrorKind kind) {
  return kind == ErrorKind::UndefinedEstimator || kind == ErrorKind::CovarianceNonpositive ||
         kind == ErrorKind::NoInteriorMaximum;
}

}  // namespace dualinspect
