#pragma once

#include <vector>

#include "mvcovh/mvdata.hpp"
#include "mvcovh/random.hpp"

namespace mvcovh {

struct SynthSpec {
  int clusters = 3;
  int samples = 300;
  std::vector<int> dims{10, 8};  ///< features per view; the view count is dims.size()
  double separation = 6.0;       ///< distance scale between latent cluster centers
  /// Gaussian noise SD added to each view; a single entry applies to all views.
  std::vector<double> noise{0.3};
  Seed seed = 0;
};

/// Planted multi-view mixture. Latent points are unit Gaussians around
/// `separation * e_c` for class c (latent dimension = cluster count), each
/// view is a seeded non-negative random linear image of the latent points plus
/// noise, and every view is min-max normalized. Labels are j mod clusters.
MultiViewDataset synth_multiview(const SynthSpec& spec);

}  // namespace mvcovh
