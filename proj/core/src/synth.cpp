#include "mvcovh/synth.hpp"

#include <cmath>

#include "mvcovh/error.hpp"

namespace mvcovh {

MultiViewDataset synth_multiview(const SynthSpec& spec) {
  const int views = static_cast<int>(spec.dims.size());
  require(spec.clusters >= 1, ErrorKind::invalid_parameter, "clusters must be >= 1");
  require(spec.samples >= spec.clusters, ErrorKind::invalid_parameter,
          "need at least one sample per cluster");
  require(views >= 1, ErrorKind::invalid_parameter, "need at least one view");
  for (int m : spec.dims) require(m >= 1, ErrorKind::invalid_parameter, "view dimensions must be >= 1");
  require(std::isfinite(spec.separation) && spec.separation > 0.0, ErrorKind::invalid_parameter,
          "separation must be > 0");
  require(spec.noise.size() == 1 || spec.noise.size() == spec.dims.size(),
          ErrorKind::invalid_parameter, "noise needs one entry or one per view");
  for (double s : spec.noise)
    require(std::isfinite(s) && s >= 0.0, ErrorKind::invalid_parameter, "noise must be >= 0");

  auto rng = make_rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int latent = spec.clusters;
  const int n = spec.samples;

  std::vector<int> labels(static_cast<std::size_t>(n));
  Matrix Z(latent, n);
  for (int j = 0; j < n; ++j) {
    const int c = j % spec.clusters;
    labels[static_cast<std::size_t>(j)] = c;
    for (int d = 0; d < latent; ++d) Z(d, j) = gauss(rng) + (d == c ? spec.separation : 0.0);
  }

  std::vector<ViewMatrix> out;
  for (int k = 0; k < views; ++k) {
    const int m = spec.dims[static_cast<std::size_t>(k)];
    const double sd = spec.noise.size() == 1 ? spec.noise[0] : spec.noise[static_cast<std::size_t>(k)];
    Matrix A(m, latent);
    for (int d = 0; d < latent; ++d)
      for (int i = 0; i < m; ++i) A(i, d) = uniform01(rng);
    Matrix X = A * Z;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) X(i, j) += sd * gauss(rng);
    out.push_back(normalize_view(X, "view" + std::to_string(k)));
  }
  return MultiViewDataset("synthetic", std::move(out), std::move(labels));
}

}  // namespace mvcovh
