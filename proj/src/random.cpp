#include "zplat/random.hpp"

namespace zplat {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

Scramble random_unimodular(Eigen::Index n, Rng& rng, int steps) {
  Scramble s{IntMatrix::Identity(n, n), IntMatrix::Identity(n, n)};
  if (n == 0) return s;
  if (steps < 0) steps = static_cast<int>(3 * n);
  for (int k = 0; k < steps; ++k) {
    const auto i = static_cast<Eigen::Index>(rng.uniform(0, n - 1));
    auto j = static_cast<Eigen::Index>(rng.uniform(0, n - 1));
    const int kind = static_cast<int>(rng.uniform(0, 5));
    if (kind == 0) {
      // S <- E S with E a row swap; S^{-1} <- S^{-1} E
      s.S.row(i).swap(s.S.row(j));
      s.S_inverse.col(i).swap(s.S_inverse.col(j));
    } else if (kind == 1) {
      s.S.row(i) = -s.S.row(i);
      s.S_inverse.col(i) = -s.S_inverse.col(i);
    } else {
      if (n == 1) continue;
      if (j == i) j = (i + 1) % n;
      const Integer q = rng.uniform(-2, 2);
      if (q.is_zero()) continue;
      // row_i += q row_j ; inverse: col_j -= q col_i
      s.S.row(i) += q * s.S.row(j);
      s.S_inverse.col(j) -= q * s.S_inverse.col(i);
    }
  }
  return s;
}

}  // namespace zplat
