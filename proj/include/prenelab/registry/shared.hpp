#pragma once

// Substrings common to every object's content, via a suffix automaton of the
// shortest content matched against each of the others.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prenelab/core/error.hpp"

namespace prenelab::registry {

class SuffixAutomaton {
 public:
  struct State {
    std::size_t len = 0;
    int link = -1;
    std::size_t first_end = 0;  // end position (inclusive) of the first occurrence
    std::vector<std::pair<unsigned char, int>> next;

    [[nodiscard]] int go(unsigned char c) const noexcept {
      for (const auto& [k, v] : next) {
        if (k == c) return v;
      }
      return -1;
    }
    void set(unsigned char c, int to) {
      for (auto& [k, v] : next) {
        if (k == c) {
          v = to;
          return;
        }
      }
      next.emplace_back(c, to);
    }
  };

  explicit SuffixAutomaton(std::string_view text) : text_(text) {
    states_.reserve(2 * text.size() + 1);
    states_.push_back(State{});
    int last = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const auto c = static_cast<unsigned char>(text[i]);
      const int cur = static_cast<int>(states_.size());
      states_.push_back(State{states_[static_cast<std::size_t>(last)].len + 1, -1, i, {}});
      int p = last;
      while (p != -1 && at(p).go(c) == -1) {
        at(p).set(c, cur);
        p = at(p).link;
      }
      if (p == -1) {
        at(cur).link = 0;
      } else {
        const int q = at(p).go(c);
        if (at(p).len + 1 == at(q).len) {
          at(cur).link = q;
        } else {
          const int clone = static_cast<int>(states_.size());
          State copy = at(q);
          copy.len = at(p).len + 1;
          states_.push_back(std::move(copy));
          while (p != -1 && at(p).go(c) == q) {
            at(p).set(c, clone);
            p = at(p).link;
          }
          at(q).link = clone;
          at(cur).link = clone;
        }
      }
      last = cur;
    }
  }

  [[nodiscard]] const std::vector<State>& states() const noexcept { return states_; }
  [[nodiscard]] std::string_view text() const noexcept { return text_; }

  /// States ordered by decreasing len (children before their suffix links).
  [[nodiscard]] std::vector<int> by_decreasing_length() const {
    std::vector<int> order(states_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return at(a).len > at(b).len; });
    return order;
  }

  /// For every state, the longest substring of that state which also occurs
  /// in `other`.
  [[nodiscard]] std::vector<std::size_t> match_lengths(std::string_view other) const {
    std::vector<std::size_t> best(states_.size(), 0);
    int v = 0;
    std::size_t l = 0;
    for (char ch : other) {
      const auto c = static_cast<unsigned char>(ch);
      while (v != 0 && at(v).go(c) == -1) {
        v = at(v).link;
        l = at(v).len;
      }
      if (const int to = at(v).go(c); to != -1) {
        v = to;
        ++l;
      }
      best[static_cast<std::size_t>(v)] = std::max(best[static_cast<std::size_t>(v)], l);
    }
    // A match ending in a state also matches every suffix-link ancestor.
    for (int s : by_decreasing_length()) {
      const int link = at(s).link;
      if (link >= 0) {
        auto& up = best[static_cast<std::size_t>(link)];
        up = std::max(up, std::min(best[static_cast<std::size_t>(s)], at(link).len));
      }
    }
    return best;
  }

 private:
  State& at(int i) { return states_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const State& at(int i) const { return states_[static_cast<std::size_t>(i)]; }

  std::string text_;
  std::vector<State> states_;
};

namespace detail {

struct CommonStates {
  SuffixAutomaton automaton;
  std::vector<std::size_t> common;  // per state: longest length common to all
};

inline CommonStates common_states(std::span<const std::string> contents) {
  if (contents.empty()) throw Error(Errc::InvalidArgument, "need at least one object");
  const auto shortest = std::min_element(contents.begin(), contents.end(),
                                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
  CommonStates out{SuffixAutomaton(*shortest), {}};
  const auto& states = out.automaton.states();
  out.common.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out.common[i] = states[i].len;
  for (auto it = contents.begin(); it != contents.end(); ++it) {
    if (it == shortest) continue;
    const auto m = out.automaton.match_lengths(*it);
    for (std::size_t i = 0; i < states.size(); ++i) out.common[i] = std::min(out.common[i], m[i]);
  }
  return out;
}

}  // namespace detail

/// A longest substring of every content; ties go to the lexicographically
/// smallest. Empty when the contents share nothing.
inline std::string longest_shared(std::span<const std::string> contents) {
  const auto cs = detail::common_states(contents);
  const auto& states = cs.automaton.states();
  std::size_t best_len = 0;
  for (std::size_t i = 1; i < states.size(); ++i) best_len = std::max(best_len, cs.common[i]);
  if (best_len == 0) return {};
  std::string best;
  bool have = false;
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (cs.common[i] != best_len) continue;
    const auto& s = states[i];
    std::string candidate(cs.automaton.text().substr(s.first_end + 1 - best_len, best_len));
    if (!have || candidate < best) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

/// Every substring of length >= min_length common to all contents.
inline std::set<std::string> shared_prenes(std::span<const std::string> contents, std::size_t min_length = 1) {
  const auto cs = detail::common_states(contents);
  const auto& states = cs.automaton.states();
  std::set<std::string> out;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const auto& s = states[i];
    const std::size_t shortest = states[static_cast<std::size_t>(s.link)].len + 1;
    for (std::size_t len = std::max(shortest, min_length); len <= cs.common[i]; ++len) {
      out.emplace(cs.automaton.text().substr(s.first_end + 1 - len, len));
    }
  }
  return out;
}

}  // namespace prenelab::registry
