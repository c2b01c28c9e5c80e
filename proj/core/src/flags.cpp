#include <algorithm>
#include <map>
#include <set>

#include "indflag/oracle.hpp"

namespace indflag::oracle {

namespace {

// Fraction-free elimination over the integers (Bareiss). Row swaps only
// affect the determinant sign, never the rank.
int rank_int(std::vector<std::vector<Int>> m) {
  if (m.empty() || m[0].empty()) return 0;
  int rows = (int)m.size(), cols = (int)m[0].size();
  Int prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[(size_t)i][(size_t)c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[(size_t)r], m[(size_t)piv]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j)
        m[(size_t)i][(size_t)j] = (m[(size_t)r][(size_t)c] * m[(size_t)i][(size_t)j] -
                                   m[(size_t)i][(size_t)c] * m[(size_t)r][(size_t)j]) /
                                  prev;
      m[(size_t)i][(size_t)c] = 0;
    }
    prev = m[(size_t)r][(size_t)c];
    ++r;
  }
  return r;
}

std::vector<std::vector<Int>> clear_denominators(const Mat& m) {
  std::vector<std::vector<Int>> out;
  out.reserve(m.size());
  for (const auto& row : m) {
    Int lcm = 1;
    for (const Rat& x : row) {
      Int d = boost::multiprecision::denominator(x);
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    std::vector<Int> irow;
    irow.reserve(row.size());
    for (const Rat& x : row)
      irow.push_back(boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x)));
    out.push_back(std::move(irow));
  }
  return out;
}

// dim of the intersection with the span of the first k coordinates.
int prefix_intersection_dim(const Mat& basis, int basis_rank, int k) {
  if (basis.empty()) return 0;
  int cols = (int)basis[0].size();
  Mat tail;
  tail.reserve(basis.size());
  for (const auto& row : basis)
    tail.emplace_back(row.begin() + k, row.begin() + cols);
  return basis_rank - rank(tail);
}

Mat stacked(const Mat& a, const Mat& b) {
  Mat out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

int rank(const Mat& m) { return rank_int(clear_denominators(m)); }

RationalFlag coordinate_flag(const TargetOrder& target, const std::vector<Address>& labeling) {
  int n = (int)labeling.size();
  std::set<Pos> present;
  std::map<Pos, Address> name;
  for (const Address& a : labeling) {
    Pos p = to_pos(target.order, a);
    present.insert(p);
    name.emplace(p, a);
  }
  RationalFlag flag;
  Mat rows;
  for (Pos p : present) {
    for (int i = 0; i < n; ++i)
      if (to_pos(target.order, labeling[(size_t)i]) == p) {
        std::vector<Rat> unit((size_t)n, Rat(0));
        unit[(size_t)i] = 1;
        rows.push_back(std::move(unit));
      }
    flag.labels.push_back(name.at(p));
    flag.bases.push_back(rows);
  }
  return flag;
}

RationalFlag apply_group_element(const Mat& b, const RationalFlag& flag) {
  int n = (int)b.size();
  for (const auto& row : b)
    if ((int)row.size() != n) fail(Errc::size_mismatch, "group element must be square");
  RationalFlag out;
  out.labels = flag.labels;
  for (const Mat& basis : flag.bases) {
    Mat nb;
    nb.reserve(basis.size());
    for (const auto& v : basis) {
      if ((int)v.size() != n) fail(Errc::size_mismatch, "flag width differs from the element");
      std::vector<Rat> nv((size_t)n, Rat(0));
      for (int x = 0; x < n; ++x)
        for (int k = 0; k < n; ++k) nv[(size_t)x] += b[(size_t)x][(size_t)k] * v[(size_t)k];
      nb.push_back(std::move(nv));
    }
    out.bases.push_back(std::move(nb));
  }
  return out;
}

std::vector<Address> sigma_of_flag(const TargetOrder& target, const RationalFlag& flag) {
  if (flag.bases.empty() || flag.bases.back().empty())
    fail(Errc::degenerate_flag, "flag has no subspaces");
  if (flag.labels.size() != flag.bases.size())
    fail(Errc::degenerate_flag, "one label per subspace required");
  int n = (int)flag.bases.back()[0].size();
  int t_count = (int)flag.bases.size();

  std::vector<int> ranks(flag.bases.size());
  for (int t = 0; t < t_count; ++t) ranks[(size_t)t] = rank(flag.bases[(size_t)t]);
  for (int t = 0; t + 1 < t_count; ++t) {
    if (ranks[(size_t)t] >= ranks[(size_t)t + 1])
      fail(Errc::degenerate_flag, "ranks must strictly increase");
    if (!(to_pos(target.order, flag.labels[(size_t)t]) <
          to_pos(target.order, flag.labels[(size_t)t + 1])))
      fail(Errc::degenerate_flag, "labels must strictly increase");
    if (rank(stacked(flag.bases[(size_t)t], flag.bases[(size_t)t + 1])) != ranks[(size_t)t + 1])
      fail(Errc::degenerate_flag, "subspaces must be nested");
  }
  if (ranks.back() != n) fail(Errc::degenerate_flag, "top subspace must be the full space");

  std::vector<Address> out;
  out.reserve((size_t)n);
  for (int e = 0; e < n; ++e) {
    int found = -1;
    for (int t = 0; t < t_count && found < 0; ++t) {
      int with = prefix_intersection_dim(flag.bases[(size_t)t], ranks[(size_t)t], e + 1);
      int without = prefix_intersection_dim(flag.bases[(size_t)t], ranks[(size_t)t], e);
      if (with != without) found = t;
    }
    if (found < 0) fail(Errc::degenerate_flag, "no label fits a coordinate");
    out.push_back(flag.labels[(size_t)found]);
  }
  return out;
}

RationalFlag embed_flag(const SurjectionSpec& spec, const RationalFlag& flag,
                        const std::vector<Address>& I, const std::vector<Address>& J) {
  std::map<Address, int> j_pos;
  for (int j = 0; j < (int)J.size(); ++j) j_pos[J[(size_t)j]] = j;
  std::vector<int> inject;
  inject.reserve(I.size());
  for (const Address& e : I) {
    auto it = j_pos.find(e);
    if (it == j_pos.end()) fail(Errc::not_nested, "smaller truncation escapes the larger one");
    inject.push_back(it->second);
  }
  int nI = (int)I.size(), nJ = (int)J.size();

  std::set<Address> in_I(I.begin(), I.end());
  auto apos = [&spec](const Address& a) { return to_pos(spec.target.order, a); };

  // Label set of the extension: the flag's labels plus whatever the base
  // labeling uses on the new coordinates.
  std::map<Pos, Address> labels;
  for (const Address& a : flag.labels) labels.emplace(apos(a), a);
  for (const Address& e : J)
    if (!in_I.count(e)) {
      Address a = sigma0_eval(spec, e);
      labels.emplace(apos(a), a);
    }

  RationalFlag out;
  for (const auto& [pos, label] : labels) {
    Mat rows;
    int best = -1;
    for (int t = 0; t < (int)flag.labels.size(); ++t)
      if (apos(flag.labels[(size_t)t]) <= pos) best = t;
    if (best >= 0 && (int)flag.bases.size() > best)
      for (const auto& v : flag.bases[(size_t)best]) {
        if ((int)v.size() != nI) fail(Errc::size_mismatch, "flag width differs from I");
        std::vector<Rat> nv((size_t)nJ, Rat(0));
        for (int k = 0; k < nI; ++k) nv[(size_t)inject[(size_t)k]] = v[(size_t)k];
        rows.push_back(std::move(nv));
      }
    for (const Address& e : J)
      if (!in_I.count(e) && apos(sigma0_eval(spec, e)) <= pos) {
        std::vector<Rat> unit((size_t)nJ, Rat(0));
        unit[(size_t)j_pos.at(e)] = 1;
        rows.push_back(std::move(unit));
      }
    out.labels.push_back(label);
    out.bases.push_back(std::move(rows));
  }
  return out;
}

Mat random_unitriangular(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-3, 3);
  Mat b((size_t)n, std::vector<Rat>((size_t)n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    b[(size_t)i][(size_t)i] = 1;
    for (int j = i + 1; j < n; ++j) b[(size_t)i][(size_t)j] = entry(rng);
  }
  return b;
}

}  // namespace indflag::oracle
