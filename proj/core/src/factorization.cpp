#include "mvcovh/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvcovh/error.hpp"

namespace mvcovh {
namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_factor_shapes(const Matrix& X, const Matrix& W, const Matrix& H) {
  if (X.rows() != W.rows() || X.cols() != H.cols() || W.cols() != H.rows()) {
    fail(ErrorKind::shape_mismatch,
         "X " + shape(X) + " does not match W " + shape(W) + " times H " + shape(H));
  }
}

void check_model_shapes(const MultiViewDataset& data, const HiddenSpaceModel& model) {
  const auto k = static_cast<std::size_t>(data.num_views());
  require(model.W.size() == k, ErrorKind::shape_mismatch,
          "model has " + std::to_string(model.W.size()) + " mapping matrices for " +
              std::to_string(k) + " views");
  require(model.q.size() == static_cast<Eigen::Index>(k), ErrorKind::shape_mismatch,
          "model weight vector length does not match view count");
  for (std::size_t v = 0; v < k; ++v) check_factor_shapes(data.views()[v].data, model.W[v], model.H);
}

void check_non_negative(const Matrix& X, const char* what) {
  require(X.allFinite() && (X.array() >= 0.0).all(), ErrorKind::invalid_value,
          std::string(what) + " must be finite and non-negative");
}

Matrix random_factor(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform_open_closed(rng, 0.01, 1.0);
  return m;
}

double entropy_term(const Vector& q) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < q.size(); ++k)
    if (q[k] > 0.0) s += q[k] * std::log(q[k]);
  return s;
}

void check_finite_objective(double value, int iteration) {
  require(std::isfinite(value), ErrorKind::numerical_failure,
          "objective became non-finite at iteration " + std::to_string(iteration));
}

}  // namespace

double relative_change(double previous, double current) noexcept {
  return std::abs(current - previous) / std::max(std::abs(previous), 1e-12);
}

double reconstruction_error(const Matrix& X, const Matrix& W, const Matrix& H) {
  check_factor_shapes(X, W, H);
  return (X - W * H).squaredNorm();
}

Matrix nmf_update_h(const Matrix& X, const Matrix& W, const Matrix& H) {
  check_factor_shapes(X, W, H);
  const Matrix numer = W.transpose() * X;
  const Matrix denom = (W.transpose() * W) * H;
  return H.array() * numer.array() / (denom.array() + kDivisionGuard);
}

Matrix nmf_update_w(const Matrix& X, const Matrix& W, const Matrix& H) {
  check_factor_shapes(X, W, H);
  const Matrix numer = X * H.transpose();
  const Matrix denom = W * (H * H.transpose());
  return W.array() * numer.array() / (denom.array() + kDivisionGuard);
}

NmfFactors nmf_factorize(const Matrix& X, int rank, SolverOptions options, Seed seed) {
  check_non_negative(X, "NMF input");
  const auto limit = std::min(X.rows(), X.cols());
  require(rank >= 1 && rank <= limit, ErrorKind::invalid_parameter,
          "rank must lie in [1, " + std::to_string(limit) + "], got " + std::to_string(rank));
  require(options.max_iter >= 0, ErrorKind::invalid_parameter, "max_iter must be >= 0");

  auto rng = make_rng(seed);
  NmfFactors f;
  f.W = random_factor(rng, X.rows(), rank);
  f.H = random_factor(rng, rank, X.cols());
  f.objective_trace.push_back(reconstruction_error(X, f.W, f.H));
  check_finite_objective(f.objective_trace.back(), 0);

  for (int t = 1; t <= options.max_iter; ++t) {
    f.W = nmf_update_w(X, f.W, f.H);
    f.H = nmf_update_h(X, f.W, f.H);
    const double obj = reconstruction_error(X, f.W, f.H);
    check_finite_objective(obj, t);
    const double prev = f.objective_trace.back();
    f.objective_trace.push_back(obj);
    f.iterations = t;
    if (relative_change(prev, obj) < options.epsilon) {
      f.converged = true;
      break;
    }
  }
  return f;
}

Vector softmin_weights(std::span<const double> costs, double temperature) {
  require(temperature > 0.0 && std::isfinite(temperature), ErrorKind::invalid_parameter,
          "softmin temperature must be positive and finite");
  require(!costs.empty(), ErrorKind::invalid_parameter, "softmin needs at least one cost");
  for (double c : costs)
    require(std::isfinite(c), ErrorKind::numerical_failure, "softmin cost is not finite");

  const double lowest = *std::min_element(costs.begin(), costs.end());
  Vector w(static_cast<Eigen::Index>(costs.size()));
  for (std::size_t k = 0; k < costs.size(); ++k)
    w[static_cast<Eigen::Index>(k)] = std::exp(-(costs[k] - lowest) / temperature);
  return w / w.sum();
}

std::vector<double> view_errors(const MultiViewDataset& data, const HiddenSpaceModel& model) {
  check_model_shapes(data, model);
  std::vector<double> e;
  e.reserve(model.W.size());
  for (std::size_t k = 0; k < model.W.size(); ++k)
    e.push_back((data.views()[k].data - model.W[k] * model.H).squaredNorm());
  return e;
}

double shd_objective(const MultiViewDataset& data, const HiddenSpaceModel& model) {
  const auto e = view_errors(data, model);
  double loss = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) loss += model.q[static_cast<Eigen::Index>(k)] * e[k];
  return loss + model.lambda * entropy_term(model.q);
}

Matrix shd_update_wk(const Matrix& Xk, const Matrix& Wk, const Matrix& H) {
  return nmf_update_w(Xk, Wk, H);
}

Matrix shd_update_h(const MultiViewDataset& data, const HiddenSpaceModel& model) {
  check_model_shapes(data, model);
  const auto r = model.H.rows();
  Matrix numer = Matrix::Zero(r, model.H.cols());
  Matrix gram = Matrix::Zero(r, r);
  for (std::size_t k = 0; k < model.W.size(); ++k) {
    const double qk = model.q[static_cast<Eigen::Index>(k)];
    numer.noalias() += qk * (model.W[k].transpose() * data.views()[k].data);
    gram.noalias() += qk * (model.W[k].transpose() * model.W[k]);
  }
  const Matrix denom = gram * model.H;
  return model.H.array() * numer.array() / (denom.array() + kDivisionGuard);
}

Vector shd_update_q(const MultiViewDataset& data, const HiddenSpaceModel& model) {
  require(model.lambda > 0.0, ErrorKind::invalid_parameter,
          "view-weight update needs lambda > 0");
  const auto e = view_errors(data, model);
  return softmin_weights(e, model.lambda);
}

HiddenSpaceModel shd_nmf(const MultiViewDataset& data, int rank, double lambda,
                         SolverOptions options, Seed seed, const ShdObserver& observer) {
  for (const auto& v : data.views()) check_non_negative(v.data, "view data");
  const int limit = data.min_features();
  require(rank >= 1 && rank <= limit, ErrorKind::invalid_parameter,
          "hidden dimension must lie in [1, " + std::to_string(limit) + "], got " +
              std::to_string(rank));
  require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::invalid_parameter,
          "lambda must be positive and finite");
  require(options.max_iter >= 0, ErrorKind::invalid_parameter, "max_iter must be >= 0");

  const int views = data.num_views();
  auto rng = make_rng(seed);
  HiddenSpaceModel m;
  m.lambda = lambda;
  for (int k = 0; k < views; ++k) m.W.push_back(random_factor(rng, data.view(k).data.rows(), rank));
  m.H = random_factor(rng, rank, data.num_samples());
  m.q = Vector::Constant(views, 1.0 / views);
  m.objective_trace.push_back(shd_objective(data, m));
  check_finite_objective(m.objective_trace.back(), 0);
  if (observer) observer(0, m);

  for (int t = 1; t <= options.max_iter; ++t) {
    for (int k = 0; k < views; ++k)
      m.W[static_cast<std::size_t>(k)] = shd_update_wk(data.view(k).data, m.W[static_cast<std::size_t>(k)], m.H);
    m.H = shd_update_h(data, m);
    m.q = shd_update_q(data, m);

    const double obj = shd_objective(data, m);
    check_finite_objective(obj, t);
    const double prev = m.objective_trace.back();
    m.objective_trace.push_back(obj);
    m.iterations = t;
    if (observer) observer(t, m);
    if (relative_change(prev, obj) < options.epsilon) {
      m.converged = true;
      break;
    }
  }
  return m;
}

}  // namespace mvcovh
