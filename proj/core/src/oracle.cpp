#include "indflag/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace indflag::oracle {

namespace {

constexpr int kCapA = 8;
constexpr int kCapPairs = 5;

std::vector<int> identity_arr(int n) {
  std::vector<int> a(n);
  std::iota(a.begin(), a.end(), 0);
  return a;
}

// a after g: out[i] = a[g[i]].
std::vector<int> app(const std::vector<int>& a, const std::vector<int>& g) {
  std::vector<int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[(size_t)g[i]];
  return out;
}

std::vector<int> swap_positions(std::vector<int> a, int i, int j) {
  std::swap(a[(size_t)i], a[(size_t)j]);
  return a;
}

}  // namespace

FiniteWeylGroup enumerate_group(const OrderSpec& border, std::vector<Address> truncation,
                                GroupKind kind, bool even_sign) {
  FiniteWeylGroup g;
  g.kind = kind;
  g.even_sign = even_sign && kind == GroupKind::BC;
  g.border = border;
  g.domain = std::move(truncation);

  int n = (int)g.domain.size();
  if (n == 0) fail(Errc::invalid_address, "empty truncation");
  for (int i = 0; i + 1 < n; ++i)
    if (!(to_pos(border, g.domain[(size_t)i]) < to_pos(border, g.domain[(size_t)i + 1])))
      fail(Errc::not_ordered, "truncation must be sorted by the border order");

  if (kind == GroupKind::A) {
    if (n > kCapA) fail(Errc::cap_exceeded, "type A cap is 8 elements");
    std::vector<int> arr = identity_arr(n);
    do g.elements.push_back(arr);
    while (std::next_permutation(arr.begin(), arr.end()));
    for (int i = 0; i + 1 < n; ++i)
      g.generators.push_back(swap_positions(identity_arr(n), i, i + 1));
  } else {
    int m = n / 2;
    if (m > kCapPairs) fail(Errc::cap_exceeded, "type BC cap is 5 mirror pairs");
    if (m == 0) fail(Errc::invalid_address, "no free mirror pair in truncation");
    std::vector<int> p = identity_arr(m);
    do {
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (g.even_sign && (__builtin_popcount(mask) & 1)) continue;
        std::vector<int> arr = identity_arr(n);
        for (int j = 0; j < m; ++j) {
          int img = (mask >> j) & 1 ? n - 1 - p[(size_t)j] : p[(size_t)j];
          arr[(size_t)j] = img;
          arr[(size_t)(n - 1 - j)] = n - 1 - img;
        }
        g.elements.push_back(arr);
      }
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(g.elements.begin(), g.elements.end());

    // Coordinate j counts from the center outward: coordinate 1 is position
    // m-1, coordinate m is position 0. s_j swaps coordinates j, j+1 on both
    // sides; s_0 flips the innermost coordinate across the mirror.
    for (int j = 1; j < m; ++j) {
      std::vector<int> s = swap_positions(identity_arr(n), m - j - 1, m - j);
      s = swap_positions(std::move(s), n - 1 - (m - j - 1), n - 1 - (m - j));
      g.generators.push_back(std::move(s));
    }
    std::vector<int> s0 = swap_positions(identity_arr(n), m - 1, n - m);
    if (!g.even_sign) {
      g.generators.push_back(std::move(s0));
    } else if (m >= 2) {
      g.generators.push_back(app(s0, app(g.generators[0], s0)));
    }
  }

  for (int i = 0; i < (int)g.elements.size(); ++i) g.index.emplace(g.elements[i], i);

  g.lengths.assign(g.elements.size(), -1);
  std::deque<int> queue;
  int start = g.index.at(identity_arr(n));
  g.lengths[(size_t)start] = 0;
  queue.push_back(start);
  size_t seen = 1;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (const auto& s : g.generators) {
      auto it = g.index.find(app(g.elements[(size_t)cur], s));
      if (it == g.index.end())
        fail(Errc::internal, "generator steps outside the enumerated set");
      int nxt = it->second;
      if (g.lengths[(size_t)nxt] >= 0) continue;
      g.lengths[(size_t)nxt] = g.lengths[(size_t)cur] + 1;
      queue.push_back(nxt);
      ++seen;
    }
  }
  if (seen != g.elements.size())
    fail(Errc::internal, "generator closure does not reproduce the enumeration");
  return g;
}

int element_index(const FiniteWeylGroup& g, const std::vector<int>& arr) {
  auto it = g.index.find(arr);
  if (it == g.index.end()) fail(Errc::not_member, "array is not a group element");
  return it->second;
}

FinPerm to_fin_perm(const FiniteWeylGroup& g, const std::vector<int>& arr) {
  (void)element_index(g, arr);
  std::map<Address, Address> moves;
  for (size_t i = 0; i < arr.size(); ++i)
    if ((int)i != arr[i]) moves[g.domain[i]] = g.domain[(size_t)arr[i]];
  return make_fin_perm(g.border, moves);
}

std::vector<int> to_array(const FiniteWeylGroup& g, const FinPerm& w) {
  std::map<Address, int> where;
  for (int i = 0; i < (int)g.domain.size(); ++i) where[g.domain[(size_t)i]] = i;
  for (const Address& e : support(w))
    if (!where.count(e)) fail(Errc::not_member, "support escapes the truncation");
  std::vector<int> arr(g.domain.size());
  for (size_t i = 0; i < g.domain.size(); ++i) arr[i] = where.at(apply(w, g.domain[i]));
  return arr;
}

int bfs_length(const FiniteWeylGroup& g, const std::vector<int>& w) {
  return g.lengths[(size_t)element_index(g, w)];
}

int bfs_length(const FiniteWeylGroup& g, const FinPerm& w) {
  return bfs_length(g, to_array(g, w));
}

bool classical_bruhat_leq(const FiniteWeylGroup& g, const std::vector<int>& u,
                          const std::vector<int>& v) {
  if (g.even_sign)
    fail(Errc::unsupported_type, "rank dominance does not induce the type D order");
  (void)element_index(g, u);
  (void)element_index(g, v);
  int n = (int)u.size();
  // R[i][j] = |{k <= i : arr[k] <= j}|; u <= v iff R_u >= R_v everywhere.
  auto table = [n](const std::vector<int>& arr) {
    std::vector<std::vector<int>> r((size_t)n, std::vector<int>((size_t)n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r[(size_t)i][(size_t)j] =
            (i ? r[(size_t)i - 1][(size_t)j] : 0) + (arr[(size_t)i] <= j ? 1 : 0);
    return r;
  };
  auto ru = table(u), rv = table(v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (ru[(size_t)i][(size_t)j] < rv[(size_t)i][(size_t)j]) return false;
  return true;
}

std::vector<Address> cell_labeling(const SurjectionSpec& spec, const std::vector<Address>& trunc,
                                   const FinPerm& w) {
  std::set<Address> in_trunc(trunc.begin(), trunc.end());
  for (const Address& e : support(w))
    if (!in_trunc.count(e))
      fail(Errc::support_exceeds_truncation, "permutation moves addresses outside the truncation");
  FinPerm winv = inverse(w);
  std::vector<Address> lab;
  lab.reserve(trunc.size());
  for (const Address& e : trunc) lab.push_back(sigma0_eval(spec, apply(winv, e)));
  return lab;
}

long long finite_cell_dimension(const SurjectionSpec& spec, const std::vector<Address>& trunc,
                                const FinPerm& w) {
  std::vector<Address> lab = cell_labeling(spec, trunc, w);
  int n = (int)lab.size();
  long long count = 0;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (to_pos(spec.target.order, lab[(size_t)l]) < to_pos(spec.target.order, lab[(size_t)k]))
        ++count;
  return count;
}

long long finite_omega_cell_dimension(const SurjectionSpec& spec,
                                      const std::vector<Address>& trunc, const FinPerm& w) {
  std::vector<Address> lab = cell_labeling(spec, trunc, w);
  int n = (int)lab.size();
  long long count = 0;
  for (int k = 0; k < n; ++k) {
    if (2 * k >= n - 1) continue;  // lower coordinate strictly left
    for (int l = k + 1; l < n; ++l) {
      if (2 * l >= n - 1 && l < n - 1 - k) continue;  // mirror-class double count
      if (to_pos(spec.target.order, lab[(size_t)l]) < to_pos(spec.target.order, lab[(size_t)k]))
        ++count;
    }
  }
  return count;
}

namespace {

long long labeling_inversions(const TargetOrder& target, const std::vector<Address>& lab,
                              bool omega) {
  int n = (int)lab.size();
  long long count = 0;
  for (int k = 0; k < n; ++k) {
    if (omega && 2 * k >= n - 1) continue;
    for (int l = k + 1; l < n; ++l) {
      if (omega && 2 * l >= n - 1 && l < n - 1 - k) continue;
      if (to_pos(target.order, lab[(size_t)l]) < to_pos(target.order, lab[(size_t)k])) ++count;
    }
  }
  return count;
}

}  // namespace

bool bfs_cell_leq(const TargetOrder& target, const std::vector<Address>& from,
                  const std::vector<Address>& to, bool omega) {
  if (from.size() != to.size()) return false;
  {
    std::vector<Address> a = from, b = to;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
  }
  int n = (int)from.size();
  int center = (n % 2) ? (n - 1) / 2 : -1;
  long long target_inv = labeling_inversions(target, to, omega);

  std::set<std::vector<Address>> visited{from};
  std::deque<std::vector<Address>> queue{from};
  while (!queue.empty()) {
    std::vector<Address> cur = std::move(queue.front());
    queue.pop_front();
    if (cur == to) return true;
    long long cur_inv = labeling_inversions(target, cur, omega);
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        if (cur[(size_t)k] == cur[(size_t)l]) continue;
        if (omega && (k == center || l == center)) continue;
        std::vector<Address> nxt = cur;
        std::swap(nxt[(size_t)k], nxt[(size_t)l]);
        if (omega) {
          int mk = n - 1 - k, ml = n - 1 - l;
          if (l != mk) std::swap(nxt[(size_t)ml], nxt[(size_t)mk]);
        }
        long long ninv = labeling_inversions(target, nxt, omega);
        if (ninv <= cur_inv || ninv > target_inv) continue;
        if (visited.insert(nxt).second) queue.push_back(std::move(nxt));
      }
  }
  return false;
}

std::vector<std::vector<Address>> torus_fixed_points(const SurjectionSpec& spec,
                                                     const std::vector<Address>& trunc,
                                                     const FiniteWeylGroup& g) {
  std::vector<std::vector<Address>> out;
  std::set<std::vector<Address>> seen;
  for (const auto& arr : g.elements) {
    std::vector<Address> lab = cell_labeling(spec, trunc, to_fin_perm(g, arr));
    if (seen.insert(lab).second) out.push_back(std::move(lab));
  }
  return out;
}

long long tangent_space_dimension(const FiniteWeylGroup& g, const std::vector<int>& w,
                                  const std::vector<int>& u) {
  if (g.kind != GroupKind::A)
    fail(Errc::unsupported_type, "tangent oracle covers type A full flags only");
  if (g.domain.size() > 6) fail(Errc::cap_exceeded, "tangent oracle cap is 6 elements");
  (void)element_index(g, w);
  (void)element_index(g, u);
  int n = (int)u.size();
  long long count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (classical_bruhat_leq(g, swap_positions(u, i, j), w)) ++count;
  return count;
}

}  // namespace indflag::oracle
