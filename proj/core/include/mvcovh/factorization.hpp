#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mvcovh/mvdata.hpp"
#include "mvcovh/random.hpp"

namespace mvcovh {

/// Added to every multiplicative-update denominator. Zero entries stay zero.
inline constexpr double kDivisionGuard = 1e-12;

struct SolverOptions {
  double epsilon = 1e-6;  ///< stop when the relative objective change drops below this
  int max_iter = 200;
};

/// |current - previous| / max(|previous|, 1e-12)
double relative_change(double previous, double current) noexcept;

/// X ~= W H with W (m x r) and H (r x N) non-negative.
struct NmfFactors {
  Matrix W;
  Matrix H;
  std::vector<double> objective_trace;  ///< ||X - WH||_F^2, entry 0 is the initialization
  int iterations = 0;
  bool converged = false;
};

/// Shared hidden view H (r x N), per-view maps W^k (m_k x r), view weights q.
struct HiddenSpaceModel {
  Matrix H;
  std::vector<Matrix> W;
  Vector q;
  double lambda = 1.0;
  std::vector<double> objective_trace;  ///< weighted loss + entropy term, entry 0 is the init
  int iterations = 0;
  bool converged = false;

  int rank() const noexcept { return static_cast<int>(H.rows()); }
};

double reconstruction_error(const Matrix& X, const Matrix& W, const Matrix& H);

Matrix nmf_update_h(const Matrix& X, const Matrix& W, const Matrix& H);
Matrix nmf_update_w(const Matrix& X, const Matrix& W, const Matrix& H);

/// Alternates the W and H multiplicative updates (W first, matching the
/// per-iteration order of shd_nmf) from a seeded uniform (0.01, 1] start.
NmfFactors nmf_factorize(const Matrix& X, int rank, SolverOptions options, Seed seed);

/// Softmin of `costs` at the given temperature, computed after subtracting the
/// smallest cost so that the largest exponent is exactly 0.
Vector softmin_weights(std::span<const double> costs, double temperature);

/// Per-view squared Frobenius reconstruction errors e_k = ||X^k - W^k H||^2.
std::vector<double> view_errors(const MultiViewDataset& data, const HiddenSpaceModel& model);

/// sum_k q_k e_k + lambda sum_k q_k ln q_k, with 0 ln 0 = 0.
double shd_objective(const MultiViewDataset& data, const HiddenSpaceModel& model);

/// Same rule as nmf_update_w applied to one view; q_k cancels out.
Matrix shd_update_wk(const Matrix& Xk, const Matrix& Wk, const Matrix& H);
Matrix shd_update_h(const MultiViewDataset& data, const HiddenSpaceModel& model);
Vector shd_update_q(const MultiViewDataset& data, const HiddenSpaceModel& model);

/// Called after the initialization (iteration 0) and after every full sweep.
using ShdObserver = std::function<void(int iteration, const HiddenSpaceModel&)>;

/// Joint factorization of all views onto a shared hidden matrix. Each sweep
/// updates every W^k, then H, then q, and appends the objective. `data` is
/// expected to be normalized already.
HiddenSpaceModel shd_nmf(const MultiViewDataset& data, int rank, double lambda,
                         SolverOptions options, Seed seed, const ShdObserver& observer = {});

}  // namespace mvcovh
