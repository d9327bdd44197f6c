#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamlearn {

enum class GradientMethod { ParameterShift, AnalyticShift, FiniteDifference };

std::string gradient_method_name(GradientMethod m);
GradientMethod gradient_method_from_name(const std::string& name);

/// Thrown by the training loops when the cost blows past the divergence
/// guard (1e6 x the initial cost).
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceEntry {
  int epoch = 0;
  double cost = std::numeric_limits<double>::quiet_NaN();
  double trace_distance = std::numeric_limits<double>::quiet_NaN();
  double validation_error = std::numeric_limits<double>::quiet_NaN();
};

/// Per-epoch optimization record plus the converged result.
struct TrainingTrace {
  std::vector<TraceEntry> entries;
  std::vector<std::pair<int, std::vector<double>>> snapshots;
  std::vector<double> final_params;
  double final_cost = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string stop_reason;
  // Filled by the caller after held-out evaluation: (observable label, mse).
  std::vector<std::pair<std::string, double>> validation;
};

}  // namespace hamlearn
