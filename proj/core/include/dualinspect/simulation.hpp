#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualinspect/errors.hpp"
#include "dualinspect/fisher.hpp"
#include "dualinspect/mle.hpp"
#include "dualinspect/model.hpp"
#include "dualinspect/report.hpp"
#include "dualinspect/rng.hpp"

namespace dualinspect {

class MethodSet {
 public:
  MethodSet() = default;
  MethodSet(std::initializer_list<Method> methods) {
    for (Method m : methods) insert(m);
  }

  void insert(Method m) { bits_ |= bit(m); }
  bool contains(Method m) const { return (bits_ & bit(m)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<Method> list() const;

 private:
  static unsigned bit(Method m) { return 1u << static_cast<unsigned>(m); }
  unsigned bits_ = 0;
};

struct StudyConfig {
  ModelParams params{10.0, 0.4, 0.7};
  std::size_t m = 100;
  std::size_t replicates = 1000;
  RngSeed seed{};
  MethodSet methods{Method::Moment};
  /// Worker threads; the report does not depend on it.
  unsigned threads = 1;
  SolverOptions solver{};
};

struct MethodSummary {
  Method method = Method::Moment;
  std::size_t successes = 0;
  std::map<ErrorKind, std::size_t> failures;
  /// Successful moment estimates with a detection rate outside [0,1].
  std::size_t flagged = 0;
  ParamValues mean;
  ParamValues std;
  ParamValues bias;

  std::size_t failure_total() const;
};

struct HeadToHead {
  std::size_t compared = 0;
  std::size_t mle_better = 0;
  double fraction = 0.0;
};

struct StudyReport {
  StudyConfig config;
  std::size_t replicates = 0;
  std::vector<MethodSummary> methods;
  /// Replicates where both estimators succeeded and the likelihood estimate
  /// of lambda was strictly closer to the truth.
  std::optional<HeadToHead> head_to_head;

  const MethodSummary* find(Method method) const;
};

/// Replicate i draws its data from derive_seed(config.seed, i); the latent
/// triples feed capture-recapture and their collapse feeds the other two
/// methods. Estimator failures are counted, never substituted.
StudyReport run_study(const StudyConfig& config);

struct RatioPoint {
  double p1 = 0.0;
  double p2 = 0.0;
  double lambda = 0.0;
  double ratio = 0.0;
};

/// Asymptotic std(lambda*) / std(lambda-hat); the common 1/sqrt(M) cancels.
double std_ratio(const ModelParams& params, double tail_eps = kDefaultFisherTailEps);

std::vector<RatioPoint> std_ratio_curve(double lambda, double p1, const std::vector<double>& p2_grid,
                                        double tail_eps = kDefaultFisherTailEps);

/// p2 = 0.05, 0.10, ..., 0.95.
std::vector<double> default_p2_grid();

enum class TableId { T1, T2, T3 };

struct TableReport {
  TableId id = TableId::T1;
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::size_t replicates = 0;
  RngSeed seed{};
};

inline constexpr std::size_t kTable1Replicates = 100'000;
inline constexpr std::size_t kTable23Replicates = 5'000;

/// Runs the table grids at lambda = 10, p1 = 0.4, p2 = 0.7 and
/// M in {100, 200, 500}, simulated and asymptotic columns side by side.
TableReport reproduce_table(TableId which, std::optional<std::size_t> replicates_override,
                            RngSeed seed, unsigned threads = 1);

}  // namespace dualinspect
