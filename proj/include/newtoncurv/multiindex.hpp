#pragma once

// Exact combinatorics for antisymmetrized contractions: permutation signs,
// strictly increasing index tuples, and the generalized Kronecker symbol
// delta^{i_1...i_r}_{j_1...j_r}.  All indices in the public API are 1-based.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "newtoncurv/errors.hpp"

namespace newtoncurv {

/// Ordered list of 1-based indices.
using IndexTuple = std::vector<int>;

/// Bijection of {1..r}; image[k-1] is the image of k.
struct Permutation {
  std::vector<int> image;
};

/// Sign of a sequence of distinct values relative to its sorted order:
/// +1 for an even number of inversions, -1 for odd.  No validation.
inline int inversion_sign(const std::vector<int>& seq) {
  int inversions = 0;
  const std::size_t r = seq.size();
  for (std::size_t a = 0; a + 1 < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b)
      if (seq[a] > seq[b]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

inline bool is_strictly_increasing(const IndexTuple& t) {
  return std::is_sorted(t.begin(), t.end(),
                        [](int a, int b) { return a <= b; });
}

/// Sign of a permutation of {1..r}.  Throws ValidationError if image is not
/// a bijection of {1..r}.
inline int perm_sign(const Permutation& p) {
  const int r = static_cast<int>(p.image.size());
  std::vector<bool> seen(static_cast<std::size_t>(r), false);
  for (int v : p.image) {
    if (v < 1 || v > r || seen[static_cast<std::size_t>(v - 1)])
      throw ValidationError("perm_sign: image is not a bijection of {1.." +
                            std::to_string(r) + "}");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
  return inversion_sign(p.image);
}

/// Generalized Kronecker symbol.  +1/-1 when `upper` has distinct entries and
/// `lower` is an even/odd rearrangement of it, 0 otherwise.  Both tuples must
/// have the same length (ValidationError otherwise); length 0 gives +1.
inline int generalized_kronecker(const IndexTuple& upper,
                                 const IndexTuple& lower) {
  if (upper.size() != lower.size())
    throw ValidationError("generalized_kronecker: tuple lengths differ");
  if (upper.empty()) return 1;
  IndexTuple us = upper, ls = lower;
  std::sort(us.begin(), us.end());
  std::sort(ls.begin(), ls.end());
  for (std::size_t a = 0; a + 1 < us.size(); ++a)
    if (us[a] == us[a + 1]) return 0;
  if (us != ls) return 0;
  return inversion_sign(upper) * inversion_sign(lower);
}

/// Lazily enumerates all strictly increasing r-tuples drawn from {1..n} in
/// lexicographic order.  r > n yields an empty range; r = 0 yields the single
/// empty tuple.  Negative n or r throws ValidationError.
class IncreasingTuples {
 public:
  IncreasingTuples(int n, int r) : n_(n), r_(r) {
    if (n < 0 || r < 0)
      throw ValidationError("IncreasingTuples: n and r must be nonnegative");
  }

  class iterator {
   public:
    iterator() = default;
    iterator(int n, int r) : n_(n), r_(r), done_(r > n) {
      current_.resize(static_cast<std::size_t>(r));
      for (int k = 0; k < r; ++k) current_[static_cast<std::size_t>(k)] = k + 1;
    }
    const IndexTuple& operator*() const { return current_; }
    iterator& operator++() {
      int k = r_ - 1;
      while (k >= 0 &&
             current_[static_cast<std::size_t>(k)] == n_ - (r_ - 1 - k))
        --k;
      if (k < 0) {
        done_ = true;
        return *this;
      }
      ++current_[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < r_; ++j)
        current_[static_cast<std::size_t>(j)] =
            current_[static_cast<std::size_t>(j - 1)] + 1;
      return *this;
    }
    bool operator!=(std::nullptr_t) const { return !done_; }

   private:
    int n_ = 0, r_ = 0;
    bool done_ = true;
    IndexTuple current_;
  };

  iterator begin() const { return iterator(n_, r_); }
  std::nullptr_t end() const { return nullptr; }

  /// Materializes the whole range.
  std::vector<IndexTuple> all() const {
    std::vector<IndexTuple> out;
    for (const IndexTuple& t : *this) out.push_back(t);
    return out;
  }

 private:
  int n_, r_;
};

/// Exact binomial coefficient; 0 when k < 0 or k > n.
inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long num = 1;
  for (int i = 1; i <= k; ++i) num = num * (n - k + i) / i;
  return num;
}

/// Exact factorial for small arguments.
inline long long factorial(int r) {
  if (r < 0) throw ValidationError("factorial: negative argument");
  long long f = 1;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

}  // namespace newtoncurv
