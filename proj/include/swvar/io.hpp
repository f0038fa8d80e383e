#pragma once

#include "swvar/common.hpp"
#include "swvar/dependence.hpp"
#include "swvar/model.hpp"
#include "swvar/penalties.hpp"
#include "swvar/pipeline.hpp"
#include "swvar/solvers.hpp"

#include <optional>
#include <string>

namespace swvar {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Header t,z1..zp (plus u1..uq for exogenous columns); one row per time point.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

/// Headerless numeric CSV, shortest round-trip formatting.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(const std::string& text);

/// Keys: type (l1 | group | owl | ksupport | nuclear | own_other), weights,
/// groups, k, rows, cols, p, d_a, d_b, exo_scale.
PenaltySpec penalty_from_json(const std::string& json_text);

/// JSON object with coeffs (row-major nested arrays), iters, converged,
/// lambda_used, optional low_rank/sparse and, when asked, objective_trace.
std::string fit_to_json(const FitResult& fit, bool include_trace = false,
                        const std::optional<ErrorMetrics>& metrics = std::nullopt);
std::string metrics_to_json(const ErrorMetrics& m);
std::string dependence_report_to_json(const DependenceReport& r);

}  // namespace swvar
