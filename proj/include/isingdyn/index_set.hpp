/*
 * Copyright (C) 2026 The isingdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ISINGDYN_INDEX_SET_HPP
#define ISINGDYN_INDEX_SET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace isingdyn {

using Vertex = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Fixed-universe bitset over 0..size()-1. Tag keeps vertex sets and edge
/// subsets from being mixed up.
template <typename Tag> class IndexSet {
public:
  IndexSet() = default;
  explicit IndexSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}
  IndexSet(std::size_t universe, std::initializer_list<std::uint32_t> items)
      : IndexSet(universe) {
    for (auto i : items) {
      insert(i);
    }
  }

  static IndexSet full(std::size_t universe) {
    IndexSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) {
      s.insert(static_cast<std::uint32_t>(i));
    }
    return s;
  }

  std::size_t universe() const { return universe_; }

  bool contains(std::uint32_t i) const {
    return i < universe_ && ((words_[i >> 6] >> (i & 63)) & 1U);
  }
  void insert(std::uint32_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void erase(std::uint32_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) {
      c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
  }
  bool empty() const { return count() == 0; }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  bool is_subset_of(const IndexSet &other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
      if ((words_[w] & ~theirs) != 0) {
        return false;
      }
    }
    return true;
  }

  IndexSet operator&(const IndexSet &o) const {
    IndexSet r(universe_);
    for (std::size_t w = 0; w < words_.size() && w < o.words_.size(); ++w) {
      r.words_[w] = words_[w] & o.words_[w];
    }
    return r;
  }
  IndexSet operator|(const IndexSet &o) const {
    IndexSet r(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      r.words_[w] = words_[w] | (w < o.words_.size() ? o.words_[w] : 0);
    }
    return r;
  }
  /// Set difference.
  IndexSet operator-(const IndexSet &o) const {
    IndexSet r(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      r.words_[w] = words_[w] & ~(w < o.words_.size() ? o.words_[w] : 0);
    }
    return r;
  }

  friend bool operator==(const IndexSet &, const IndexSet &) = default;

private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct VertexTag {};
struct EdgeTag {};

using VertexSet = IndexSet<VertexTag>;
using EdgeSubset = IndexSet<EdgeTag>;

} // namespace isingdyn

#endif // ISINGDYN_INDEX_SET_HPP
