#include "mvcovh/random.hpp"

#include <numeric>

#include "mvcovh/error.hpp"

namespace mvcovh {

Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(parent);
  for (auto tag : path) push(tag);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Rng make_rng(Seed seed) { return Rng(seed); }

double uniform_open_closed(Rng& rng, double low, double high) {
  // 53 random mantissa bits give u in [0, 1); flip to (0, 1].
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return low + (high - low) * (1.0 - u);
}

std::vector<int> sample_without_replacement(Rng& rng, int n, int count) {
  require(count >= 0 && count <= n, ErrorKind::invalid_parameter,
          "cannot draw " + std::to_string(count) + " distinct indices from " +
              std::to_string(n));
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace mvcovh
