#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "entcert/density.hpp"

namespace entcert {

// Ordered partition of qubits {0..N-1} into k disjoint non-empty parts.
// Parts are stored as bitmasks (bit q = qubit q) sorted by smallest member,
// which is the canonical form used for equality and ordering.
struct Split {
  int n_qubits = 0;
  std::vector<std::uint32_t> parts;

  Split() = default;
  Split(int n, std::vector<std::uint32_t> p) : n_qubits(n), parts(std::move(p)) {
    canonicalize();
  }

  static Split of(int n, const std::vector<std::vector<int>>& groups) {
    std::vector<std::uint32_t> masks;
    for (const auto& g : groups) {
      std::uint32_t m = 0;
      for (int q : g) {
        if (q < 0 || q >= n)
          throw std::invalid_argument("split: qubit index out of range");
        m |= std::uint32_t{1} << q;
      }
      masks.push_back(m);
    }
    return Split(n, std::move(masks));
  }

  int k() const { return static_cast<int>(parts.size()); }

  void canonicalize() {
    std::uint32_t all = 0;
    for (auto m : parts) {
      if (m == 0) throw std::invalid_argument("split: empty part");
      if (m & all) throw std::invalid_argument("split: parts overlap");
      all |= m;
    }
    if (all != ((std::uint32_t{1} << n_qubits) - 1))
      throw std::invalid_argument("split: parts do not cover all qubits");
    std::sort(parts.begin(), parts.end(),
              [](std::uint32_t a, std::uint32_t b) {
                return (a & -a) < (b & -b);
              });
  }

  bool operator==(const Split& o) const {
    return n_qubits == o.n_qubits && parts == o.parts;
  }
  bool operator<(const Split& o) const { return parts < o.parts; }

  // "a-(bc)" style label for N <= 26.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += '-';
      std::string names;
      for (int q = 0; q < n_qubits; ++q)
        if (parts[i] & (std::uint32_t{1} << q)) names += char('a' + q);
      s += names.size() == 1 ? names : "(" + names + ")";
    }
    return s;
  }
};

// All set-partitions of {0..N-1} into exactly k parts, in canonical order.
// Uses restricted growth strings: a[i] = block of element i, a[i] <= max(a)+1.
inline std::vector<Split> enumerate_splits(int n_qubits, int k) {
  if (k < 1 || k > n_qubits)
    throw std::invalid_argument("enumerate_splits: k out of range");
  std::vector<Split> out;
  std::vector<int> a(n_qubits, 0);
  auto emit = [&] {
    std::vector<std::uint32_t> masks(k, 0);
    for (int i = 0; i < n_qubits; ++i) masks[a[i]] |= std::uint32_t{1} << i;
    out.emplace_back(n_qubits, std::move(masks));
  };
  // Depth-first over growth strings with pruning on achievable block count.
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == n_qubits) {
      if (used == k) emit();
      return;
    }
    if (used + (n_qubits - i) < k) return;  // cannot reach k blocks
    for (int b = 0; b < std::min(used + 1, k); ++b) {
      a[i] = b;
      self(self, i + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Stirling number of the second kind, for test cross-checks.
inline std::uint64_t stirling2(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<std::uint64_t>> s(n + 1,
                                            std::vector<std::uint64_t>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j)
      s[i][j] = s[i - 1][j - 1] + std::uint64_t(j) * s[i - 1][j];
  return s[n][k];
}

// fine < coarse in the containment order: every part of `fine` lies inside
// a part of `coarse` (coarse is obtained by joining parts of fine).
inline bool contains(const Split& fine, const Split& coarse) {
  if (fine.n_qubits != coarse.n_qubits)
    throw std::invalid_argument("contains: qubit count mismatch");
  for (auto f : fine.parts) {
    bool inside = false;
    for (auto c : coarse.parts)
      if ((f & c) == f) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

// Bipartite split label: bit n (n = 0..N-2) is 0 iff qubit n shares a part
// with the last qubit. Returned most-significant-first, e.g. "10" for
// a-(bc) on three qubits.
inline std::string bipartite_label(const Split& split) {
  if (split.k() != 2)
    throw std::invalid_argument("bipartite_label: split is not bipartite");
  const int n = split.n_qubits;
  const std::uint32_t last = std::uint32_t{1} << (n - 1);
  std::uint32_t with_last = 0;
  for (auto p : split.parts)
    if (p & last) with_last = p;
  std::string s;
  for (int q = 0; q < n - 1; ++q)
    s += (with_last & (std::uint32_t{1} << q)) ? '0' : '1';
  return s;
}

inline std::uint32_t bipartite_label_value(const Split& split) {
  const std::string s = bipartite_label(split);
  std::uint32_t v = 0;
  for (char c : s) v = (v << 1) | std::uint32_t(c - '0');
  return v;
}

// x <-> anti-diagonal bitstring map generated by the operator recursion:
// b(1,0) = 0; b(N,2m) = 0||b(N-1,m); b(N,2m+1) = 0||complement(b(N-1,m)).
// Bitstrings are basis indices (qubit 0 = most significant bit).
inline std::uint32_t antidiag_bits(int n_qubits, int x) {
  if (x < 0 || x >= (1 << (n_qubits - 1)))
    throw std::invalid_argument("antidiag_bits: x out of range");
  if (n_qubits == 1) return 0;
  const std::uint32_t m = antidiag_bits(n_qubits - 1, x >> 1);
  if ((x & 1) == 0) return m;
  return ((std::uint32_t{1} << (n_qubits - 1)) - 1) ^ m;
}

struct AntidiagIndex {
  int x = 0;
  std::uint32_t bits = 0;   // leading bit is always 0
  std::size_t row = 0;      // 1-based: row = bits + 1
  std::size_t col = 0;      // 1-based: col = 2^N + 1 - row
};

inline AntidiagIndex antidiag_index(int n_qubits, int x) {
  AntidiagIndex idx;
  idx.x = x;
  idx.bits = antidiag_bits(n_qubits, x);
  idx.row = std::size_t(idx.bits) + 1;
  idx.col = (std::size_t{1} << n_qubits) + 1 - idx.row;
  return idx;
}

// Inverse map bits -> x for all leading-zero bitstrings.
inline std::vector<int> antidiag_x_of_bits(int n_qubits) {
  const int half = 1 << (n_qubits - 1);
  std::vector<int> inv(half, -1);
  for (int x = 0; x < half; ++x) inv[antidiag_bits(n_qubits, x)] = x;
  return inv;
}

// Solution sets z_i for a split: orbits of anti-diagonal bitstrings under
// flipping all bits of one part, quotiented by global complement (the
// canonical representative keeps its leading bit 0).
inline std::vector<std::vector<int>> solution_sets(const Split& split) {
  if (split.k() < 2)
    throw std::invalid_argument(
        "solution_sets: no constraint sets below level 2");
  const int n = split.n_qubits;
  const int half = 1 << (n - 1);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  const std::uint32_t top = std::uint32_t{1} << (n - 1);
  std::vector<std::uint32_t> flips;
  for (auto p : split.parts) {
    std::uint32_t f = 0;
    for (int q = 0; q < n; ++q)
      if (p & (std::uint32_t{1} << q)) f |= qubit_bit(n, q);
    flips.push_back(f);
  }
  const auto inv = antidiag_x_of_bits(n);

  std::vector<char> seen(half, 0);
  std::vector<std::vector<int>> sets;
  for (int x0 = 0; x0 < half; ++x0) {
    if (seen[x0]) continue;
    std::vector<int> orbit;
    std::vector<std::uint32_t> stack{antidiag_bits(n, x0)};
    while (!stack.empty()) {
      std::uint32_t b = stack.back();
      stack.pop_back();
      if (b & top) b ^= full;
      const int x = inv[b];
      if (seen[x]) continue;
      seen[x] = 1;
      orbit.push_back(x);
      for (auto f : flips) stack.push_back(b ^ f);
    }
    std::sort(orbit.begin(), orbit.end());
    sets.push_back(std::move(orbit));
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

// Containment recursion: the solution sets of a k-partite split
// are the transitive merge of the solution sets of every (k-1)-partite
// split that contains it, grounded in the bipartite sets. Serves as the
// independent cross-check of the orbit rule.
inline std::vector<std::vector<int>> solution_sets_by_refinement(
    const Split& split) {
  const int k = split.k();
  if (k < 2)
    throw std::invalid_argument(
        "solution_sets_by_refinement: no constraint sets below level 2");
  if (k == 2) return solution_sets(split);

  const int n = split.n_qubits;
  const int half = 1 << (n - 1);
  // Union-find over x labels.
  std::vector<int> parent(half);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  // Every (k-1)-partite split containing `split` joins one pair of parts.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::vector<std::uint32_t> merged;
      merged.push_back(split.parts[i] | split.parts[j]);
      for (int r = 0; r < k; ++r)
        if (r != i && r != j) merged.push_back(split.parts[r]);
      const Split coarser(n, std::move(merged));
      for (const auto& set : solution_sets_by_refinement(coarser))
        for (std::size_t t = 1; t < set.size(); ++t) unite(set[0], set[t]);
    }

  std::map<int, std::vector<int>> groups;
  for (int x = 0; x < half; ++x) groups[find(x)].push_back(x);
  std::vector<std::vector<int>> sets;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    sets.push_back(members);
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

}  // namespace entcert
