#pragma once

// Projection-free solvers over the supported constraint sets.
//
//   fw            classic conditional gradient with line search
//   kfw           k-best linear optimization + multi-direction search
//   kfw_adaptive  kfw with the doubling schedule on k while the relative
//                 objective decrease keeps improving
//   lfw           1-best oracle + memory of recent oracle vertices, searched
//                 jointly (k-direction search with k-1 remembered atoms)
//   lkfw          k-best oracle + memory of recent best atoms ((2k-1)-DS)
//   away_fw       away-step variant (vertex polytopes only)
//   pairwise_fw   pairwise variant (vertex polytopes only)
//
// Every iteration appends one record; record t describes iterate x_t (its
// objective, duality gap, support) plus the oracle/search times spent
// producing it. Record 0 is the start point. Descent is enforced: a search
// step that would increase the objective is rejected (the iterate stays).

#include <string>
#include <vector>

#include "kfw/certificates.hpp"
#include "kfw/problem.hpp"
#include "kfw/subsolver.hpp"

namespace kfw {

enum class Algorithm { fw, kfw, kfw_adaptive, lfw, lkfw, away_fw, pairwise_fw };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::kfw;
  std::size_t k = 1;
  std::size_t max_iter = 1000;
  double rel_change_tol = 1e-6;
  double fw_gap_tol = 0.0;  // 0 disables the gap-based stop
  // adaptive-k: growth factor applied while the relative decrease improves;
  // k_max 0 means "the set's own limit".
  double adapt_sigma = 2.0;
  std::size_t k_max = 0;
  // memory atom count for lfw/lkfw; default (size_t)-1 means k-1
  std::size_t memory = static_cast<std::size_t>(-1);
  LineSearchMode line_search = LineSearchMode::automatic;
  ApgConfig apg;

  bool operator==(const SolverConfig&) const = default;
};

struct IterationRecord {
  std::size_t iter = 0;
  double elapsed_s = 0.0;
  double objective = 0.0;
  double fw_gap = 0.0;
  double rel_change = 0.0;
  std::size_t k_used = 0;
  std::size_t support_size = 0;
  double kloo_s = 0.0;
  double kds_s = 0.0;
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  Vector solution;
  double objective = 0.0;
  bool converged = false;     // stopped by a tolerance, not the budget
  std::string stop_reason;    // "rel_change" | "fw_gap" | "max_iter"
  double total_seconds = 0.0;
  double kloo_seconds = 0.0;
  double kds_seconds = 0.0;
};

SolveTrace solve(const Problem& prob, const SolverConfig& cfg);

}  // namespace kfw
