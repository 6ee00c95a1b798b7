#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "prenelab/core/rng.hpp"
#include "prenelab/replicator/genome.hpp"

namespace prenelab::replicator {

struct Antibody {
  std::string constant_region;
  std::string variable_region;
};

/// n antibodies sharing `constant_region` verbatim, with pairwise distinct
/// variable regions of `variable_length` bases.
inline std::vector<Antibody> vdj_generate(const std::string& constant_region, std::size_t n,
                                          std::size_t variable_length, Rng& rng) {
  for (char c : constant_region) {
    if (!is_base(c)) throw Error(Errc::InvalidArgument, "constant region must be over {A,C,G,U}");
  }
  // 4^len, saturated once it exceeds any request we could hold.
  constexpr std::size_t kSaturated = std::size_t{1} << 62;
  std::size_t space = 1;
  for (std::size_t i = 0; i < variable_length && space < kSaturated; ++i) space *= 4;
  if (n > space) {
    throw Error(Errc::SpaceExhausted, std::to_string(n) + " antibodies requested but only " + std::to_string(space) +
                                          " distinct variable regions of length " + std::to_string(variable_length));
  }

  auto decode = [variable_length](std::uint64_t code) {
    std::string v(variable_length, 'A');
    for (std::size_t i = 0; i < variable_length; ++i) {
      v[variable_length - 1 - i] = kAlphabet[code & 3U];
      code >>= 2;
    }
    return v;
  };

  std::vector<Antibody> out;
  out.reserve(n);
  if (space < kSaturated && n * 2 >= space) {
    // Dense request: partial shuffle of the whole code space.
    std::vector<std::uint64_t> codes(space);
    for (std::size_t i = 0; i < space; ++i) codes[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(codes[i], codes[i + uniform_below(rng, space - i)]);
      out.push_back(Antibody{constant_region, decode(codes[i])});
    }
    return out;
  }

  std::unordered_set<std::string> seen;
  while (out.size() < n) {
    std::string v(variable_length, 'A');
    for (auto& c : v) c = kAlphabet[static_cast<std::size_t>(uniform_below(rng, 4))];
    if (seen.insert(v).second) out.push_back(Antibody{constant_region, std::move(v)});
  }
  return out;
}

}  // namespace prenelab::replicator
