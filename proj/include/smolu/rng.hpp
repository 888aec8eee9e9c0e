// Copyright 2026 The smolu Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace smolu {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// What a random stream is used for. Part of the counter, so streams with
/// different roles never overlap.
enum class StreamRole : std::uint32_t {
  kInitMass = 1,
  kInitPosition = 2,
  kMolecular = 3,
  kCommon = 4,
  kCoagulation = 5,
  kAuxiliary = 6,
};

/// Counter-based stream keyed by (seed, role, id, step). Two streams with the
/// same key produce the same sequence regardless of construction order or
/// which thread builds them.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamRole role, std::uint64_t id,
               std::uint64_t step);

  std::uint32_t next_u32();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace smolu
