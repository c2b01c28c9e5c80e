#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "indflag/oracle.hpp"
#include "indflag/smoothness.hpp"

using namespace indflag;
using namespace indflag::oracle;

namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

TwoOrderCarrier natural_flag(int n) {
  TwoOrderCarrier two;
  two.order_B = {{fin_chain(n)}, "B"};
  two.order_F = {{fin_chain(n)}, "F"};
  two.f_map = {{0, false, 0}};
  return two;
}

TwoOrderCarrier reversed_flag(int n) {
  TwoOrderCarrier two = natural_flag(n);
  two.f_map = {{0, true, n - 1}};
  return two;
}

FinPerm perm_of_line(const OrderSpec& spec, const std::vector<int>& line) {
  std::map<Address, Address> moves;
  for (int i = 0; i < static_cast<int>(line.size()); ++i)
    moves[Address{0, i}] = Address{0, line[i]};
  return make_fin_perm(spec, moves);
}

// Finite-support bijection sending src[k] to tgt[k]; leftover targets are
// sent back onto leftover sources in order.
FinPerm matching_perm(const OrderSpec& spec, std::vector<Address> src,
                      std::vector<Address> tgt) {
  std::map<Address, Address> moves;
  for (size_t k = 0; k < src.size(); ++k) moves[src[k]] = tgt[k];
  std::vector<Address> back_from, back_to;
  for (const Address& t : tgt)
    if (std::find(src.begin(), src.end(), t) == src.end()) back_from.push_back(t);
  for (const Address& s : src)
    if (std::find(tgt.begin(), tgt.end(), s) == tgt.end()) back_to.push_back(s);
  for (size_t k = 0; k < back_from.size(); ++k) moves[back_from[k]] = back_to[k];
  return make_fin_perm(spec, moves);
}

bool oracle_smooth(const FiniteWeylGroup& g, const std::vector<int>& w) {
  const long long len = bfs_length(g, w);
  for (const std::vector<int>& u : g.elements) {
    if (!classical_bruhat_leq(g, u, w)) continue;
    if (tangent_space_dimension(g, w, u) != len) return false;
  }
  return true;
}

// Independent re-check that a reported quadruple realizes its pattern.
void check_witness(const TwoOrderCarrier& two, const FinPerm& sigma,
                   const SmoothnessReport& rep) {
  REQUIRE(rep.witness.size() == 4);
  std::vector<Pos> b, f;
  for (const Address& e : rep.witness) {
    b.push_back(to_pos(two.order_B, e));
    f.push_back(f_pos(two, apply(sigma, e)));
  }
  CHECK(std::is_sorted(b.begin(), b.end()));
  if (rep.pattern == "3412") {
    CHECK(f[2] < f[3]);
    CHECK(f[3] < f[0]);
    CHECK(f[0] < f[1]);
  } else {
    REQUIRE(rep.pattern == "4231");
    CHECK(f[3] < f[1]);
    CHECK(f[1] < f[2]);
    CHECK(f[2] < f[0]);
  }
}

// Two-label base over omega: the bottom two carrier elements are selected.
SurjectionSpec grass2_spec() {
  SurjectionSpec s;
  s.carrier = {{fin_chain(2), omega_up()}, "E"};
  s.target.order = {{fin_chain(2)}, "A"};
  s.rules = {ConstRule{{0, 0}}, ConstRule{{0, 1}}};
  return s;
}

Address nth_of_ray(long long idx) {
  return idx < 2 ? Address{0, idx} : Address{1, idx - 2};
}

}  // namespace

TEST_CASE("two order carriers validate exact tilings") {
  CHECK(validate(natural_flag(4)));
  CHECK(validate(reversed_flag(4)));

  TwoOrderCarrier bad = natural_flag(4);
  bad.f_map.clear();
  CHECK_FALSE(validate(bad));

  TwoOrderCarrier split;
  split.order_B = {{fin_chain(2), fin_chain(2)}, "B"};
  split.order_F = {{fin_chain(4)}, "F"};
  split.f_map = {{0, false, 0}, {0, false, 2}};
  CHECK(validate(split));
  split.f_map = {{0, false, 0}, {0, false, 1}};
  std::vector<std::string> reasons;
  CHECK_FALSE(validate(split, &reasons));
  CHECK_FALSE(reasons.empty());
  split.f_map = {{0, false, 0}, {0, false, 3}};
  CHECK_FALSE(validate(split));  // image [3,4] leaves fin(4)

  TwoOrderCarrier uncovered;
  uncovered.order_B = {{fin_chain(2)}, "B"};
  uncovered.order_F = {{fin_chain(2), fin_chain(1)}, "F"};
  uncovered.f_map = {{0, false, 0}};
  CHECK_FALSE(validate(uncovered));

  TwoOrderCarrier rays;
  rays.order_B = {{omega_up(), omega_down()}, "B"};
  rays.order_F = {{z_line()}, "F"};
  rays.f_map = {{0, false, 0}, {0, false, -1}};
  CHECK(validate(rays));
  CHECK(f_pos(rays, Address{0, 3}) == Pos{0, 3});
  CHECK(f_pos(rays, Address{1, 5}) == Pos{0, -6});

  TwoOrderCarrier folded;
  folded.order_B = {{omega_up(), omega_up()}, "B"};
  folded.order_F = {{z_line()}, "F"};
  folded.f_map = {{0, true, -1}, {0, false, 0}};
  CHECK(validate(folded));
  CHECK(f_pos(folded, Address{0, 4}) == Pos{0, -5});
}

TEST_CASE("pattern verdicts match the tangent oracle across S4") {
  const OrderSpec border = {{fin_chain(4)}, "B"};
  std::vector<Address> dom;
  for (long long i = 0; i < 4; ++i) dom.push_back({0, i});
  const FiniteWeylGroup g = enumerate_group(border, dom, GroupKind::A);
  const TwoOrderCarrier nat = natural_flag(4);
  int singular_count = 0;
  for (const std::vector<int>& arr : g.elements) {
    const FinPerm w = to_fin_perm(g, arr);
    const SmoothnessReport rep = maximal_flag_smooth(nat, w);
    REQUIRE(rep.verdict != SmoothVerdict::inconclusive);
    const bool want = oracle_smooth(g, arr);
    CHECK((rep.verdict == SmoothVerdict::smooth) == want);
    if (rep.verdict == SmoothVerdict::singular) {
      ++singular_count;
      check_witness(nat, w, rep);
    }
  }
  CHECK(singular_count == 2);  // the two classical patterns themselves
}

TEST_CASE("frozen pattern values in S4") {
  const TwoOrderCarrier nat = natural_flag(4);
  const OrderSpec border = nat.order_B;

  const SmoothnessReport r4231 = maximal_flag_smooth(nat, perm_of_line(border, {3, 1, 2, 0}));
  CHECK(r4231.verdict == SmoothVerdict::singular);
  CHECK(r4231.pattern == "4231");

  const SmoothnessReport r3412 = maximal_flag_smooth(nat, perm_of_line(border, {2, 3, 0, 1}));
  CHECK(r3412.verdict == SmoothVerdict::singular);
  CHECK(r3412.pattern == "3412");

  const SmoothnessReport rw0 = maximal_flag_smooth(nat, perm_of_line(border, {3, 2, 1, 0}));
  CHECK(rw0.verdict == SmoothVerdict::smooth);

  std::vector<Address> dom;
  for (long long i = 0; i < 4; ++i) dom.push_back({0, i});
  const FiniteWeylGroup g = enumerate_group(border, dom, GroupKind::A);
  const std::vector<int> id = {0, 1, 2, 3};
  CHECK(bfs_length(g, std::vector<int>{3, 1, 2, 0}) == 5);
  CHECK(tangent_space_dimension(g, {3, 1, 2, 0}, id) == 6);
  CHECK(bfs_length(g, std::vector<int>{3, 2, 1, 0}) == 6);
  CHECK(tangent_space_dimension(g, {3, 2, 1, 0}, id) == 6);
}

TEST_CASE("a reversed target order conjugates by the longest element") {
  const int n = 4;
  const TwoOrderCarrier nat = natural_flag(n);
  const TwoOrderCarrier rev = reversed_flag(n);
  std::vector<int> line(n);
  std::iota(line.begin(), line.end(), 0);
  do {
    std::vector<int> hat(n);
    for (int i = 0; i < n; ++i) hat[i] = n - 1 - line[i];
    const SmoothnessReport a = maximal_flag_smooth(rev, perm_of_line(rev.order_B, line));
    const SmoothnessReport b = maximal_flag_smooth(nat, perm_of_line(nat.order_B, hat));
    CHECK(a.verdict == b.verdict);
  } while (std::next_permutation(line.begin(), line.end()));
}

TEST_CASE("the two row rule on finite and infinite borders") {
  const OrderSpec fin5 = {{fin_chain(5)}, "B"};
  CHECK(gr2_smooth(fin5, {{0, 3}, {0, 4}}).verdict == SmoothVerdict::smooth);
  CHECK(gr2_smooth(fin5, {{0, 1}, {0, 3}}).verdict == SmoothVerdict::singular);
  CHECK(gr2_smooth(fin5, {{0, 0}, {0, 2}}).verdict == SmoothVerdict::smooth);
  CHECK(gr2_smooth(fin5, {{0, 4}, {0, 1}}).verdict ==
        gr2_smooth(fin5, {{0, 1}, {0, 4}}).verdict);

  const OrderSpec ray = {{omega_up()}, "B"};
  CHECK(gr2_smooth(ray, {{0, 1}, {0, 5}}).verdict == SmoothVerdict::singular);
  CHECK(gr2_smooth(ray, {{0, 0}, {0, 5}}).verdict == SmoothVerdict::smooth);
  CHECK(gr2_smooth(ray, {{0, 4}, {0, 5}}).verdict == SmoothVerdict::smooth);

  const OrderSpec coray = {{omega_down()}, "B"};
  CHECK(gr2_smooth(coray, {{0, 5}, {0, 4}}).verdict == SmoothVerdict::smooth);
  CHECK(gr2_smooth(coray, {{0, 5}, {0, 3}}).verdict == SmoothVerdict::singular);

  const OrderSpec zed = {{z_line()}, "B"};
  CHECK(gr2_smooth(zed, {{0, -3}, {0, -2}}).verdict == SmoothVerdict::smooth);
  CHECK(gr2_smooth(zed, {{0, -3}, {0, -1}}).verdict == SmoothVerdict::singular);

  CHECK(code_of([&] { gr2_smooth(fin5, {{0, 1}}); }) == Errc::not_two_elements);
  CHECK(code_of([&] { gr2_smooth(fin5, {{0, 1}, {0, 1}}); }) == Errc::not_two_elements);
  CHECK(code_of([&] {
          gr2_smooth(fin5, {{0, 1}, {0, 2}, {0, 3}});
        }) == Errc::not_two_elements);
}

TEST_CASE("the truncation scan agrees with the two row rule on the ray") {
  const SurjectionSpec spec = grass2_spec();
  const std::vector<Address> src = {{0, 0}, {0, 1}};
  for (long long i = 0; i < 8; ++i)
    for (long long j = i + 1; j < 8; ++j) {
      const std::vector<Address> tgt = {nth_of_ray(i), nth_of_ray(j)};
      const CellDescriptor cell = make_cell(spec, matching_perm(spec.carrier, src, tgt));
      const SmoothnessReport scan = truncation_scan(cell, 16);
      const SmoothnessReport rule = gr2_smooth(spec.carrier, tgt);
      REQUIRE(scan.verdict != SmoothVerdict::inconclusive);
      CHECK(scan.verdict == rule.verdict);
      const bool want_smooth = i == 0 || j == i + 1;
      CHECK((scan.verdict == SmoothVerdict::smooth) == want_smooth);
      if (scan.verdict == SmoothVerdict::singular) CHECK(scan.radius >= 1);
    }
}

TEST_CASE("run certificates cover infinite selected sets") {
  SurjectionSpec line;
  line.carrier = {{fin_chain(1), omega_up()}, "E"};
  line.target.order = {{fin_chain(2)}, "A"};
  line.rules = {ListRule{{{0, 0}}}, ConstRule{{0, 1}}};
  const CellDescriptor bottom = make_cell(line, identity_perm(line.carrier));
  const SmoothnessReport one = truncation_scan(bottom, 10);
  CHECK(one.verdict == SmoothVerdict::smooth);
  CHECK(one.radius == 10);

  SurjectionSpec tailsel;
  tailsel.carrier = {{fin_chain(5), omega_up()}, "E"};
  tailsel.target.order = {{fin_chain(2)}, "A"};
  tailsel.rules = {ConstRule{{0, 1}}, ConstRule{{0, 0}}};
  const CellDescriptor tail = make_cell(tailsel, identity_perm(tailsel.carrier));
  CHECK(truncation_scan(tail, 10).verdict == SmoothVerdict::smooth);

  // An infinite downward-closed selected set plus one later run: the first
  // run touches the bottom through the unbounded end.
  SurjectionSpec pinned;
  pinned.carrier = {{omega_down(), fin_chain(3)}, "E"};
  pinned.target.order = {{fin_chain(2)}, "A"};
  pinned.rules = {ConstRule{{0, 0}}, ListRule{{{0, 1}, {0, 0}, {0, 1}}}};
  const CellDescriptor two_runs = make_cell(pinned, identity_perm(pinned.carrier));
  CHECK(truncation_scan(two_runs, 10).verdict == SmoothVerdict::smooth);

  // The same shape above a carrier that does not embed into the integers
  // stays behind the hypothesis.
  SurjectionSpec tall;
  tall.carrier = {{fin_chain(2), omega_up(), fin_chain(3)}, "E"};
  tall.target.order = {{fin_chain(2)}, "A"};
  tall.rules = {ConstRule{{0, 0}}, ConstRule{{0, 1}},
                ListRule{{{0, 0}, {0, 1}, {0, 1}}}};
  const CellDescriptor gated = make_cell(tall, identity_perm(tall.carrier));
  CHECK(truncation_scan(gated, 10).verdict == SmoothVerdict::inconclusive);
}

TEST_CASE("point edits split and extend infinite runs") {
  SurjectionSpec line;
  line.carrier = {{fin_chain(1), omega_up()}, "E"};
  line.target.order = {{fin_chain(2)}, "A"};
  line.rules = {ListRule{{{0, 1}}}, ConstRule{{0, 0}}};

  // Swapping the unselected bottom with a selected tail element keeps an
  // initial segment plus one run.
  const FinPerm w1 = transposition(line.carrier, {0, 0}, {1, 3});
  CHECK(truncation_scan(make_cell(line, w1), 12).verdict == SmoothVerdict::smooth);

  SurjectionSpec three;
  three.carrier = {{fin_chain(3), omega_up()}, "E"};
  three.target.order = {{fin_chain(2)}, "A"};
  three.rules = {ConstRule{{0, 1}}, ConstRule{{0, 0}}};
  const FinPerm w2 = transposition(three.carrier, {0, 1}, {1, 2});
  const SmoothnessReport rep = truncation_scan(make_cell(three, w2), 12);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.radius == 1);
}

TEST_CASE("a mixed periodic labeling is caught by the sweep") {
  SurjectionSpec par;
  par.carrier = {{z_line()}, "E"};
  par.target.order = {{fin_chain(2)}, "A"};
  par.rules = {PeriodicRule{{{0, 0}, {0, 1}}}};
  const SmoothnessReport rep =
      truncation_scan(make_cell(par, identity_perm(par.carrier)), 8);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.radius == 2);
}

TEST_CASE("flag scans certify affine backgrounds") {
  SurjectionSpec ray;
  ray.carrier = {{omega_up()}, "E"};
  ray.target.order = {{omega_up()}, "A"};
  ray.rules = {MonoRule{0, 1, 0}};

  CHECK(truncation_scan(make_cell(ray, identity_perm(ray.carrier)), 10).verdict ==
        SmoothVerdict::smooth);

  const FinPerm w = perm_of_line(ray.carrier, {2, 3, 0, 1});
  const SmoothnessReport rep = truncation_scan(make_cell(ray, w), 10);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.pattern == "3412");
  CHECK(rep.radius == 4);
  REQUIRE(rep.witness.size() == 4);
  for (long long i = 0; i < 4; ++i) CHECK(rep.witness[i] == Address{0, i});
}

TEST_CASE("flag scans on a doubly infinite carrier") {
  SurjectionSpec split;
  split.carrier = {{omega_down(), omega_up()}, "E"};
  split.target.order = {{z_line()}, "A"};
  split.rules = {MonoRule{0, 1, 0}, MonoRule{0, 1, 1}};

  const FinPerm swap_adj = transposition(split.carrier, {0, 0}, {1, 0});
  CHECK(truncation_scan(make_cell(split, swap_adj), 10).verdict ==
        SmoothVerdict::smooth);

  const FinPerm reach = transposition(split.carrier, {0, 1}, {1, 1});
  const SmoothnessReport rep = truncation_scan(make_cell(split, reach), 10);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.pattern == "4231");
  CHECK(rep.radius == 2);
}

TEST_CASE("non unit strides fall back to the radius sweep") {
  SurjectionSpec evens;
  evens.carrier = {{omega_up(), omega_up()}, "E"};
  evens.target.order = {{omega_up()}, "A"};
  evens.rules = {MonoRule{0, 2, 0}, MonoRule{0, 2, 1}};

  const FinPerm w = transposition(evens.carrier, {0, 0}, {0, 3});
  const SmoothnessReport rep = truncation_scan(make_cell(evens, w), 8);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.pattern == "4231");
  CHECK(rep.radius == 3);

  // Even the base labeling interleaves the parity blocks, so the identity
  // cell already carries the pattern.
  const SmoothnessReport idrep =
      truncation_scan(make_cell(evens, identity_perm(evens.carrier)), 6);
  CHECK(idrep.verdict == SmoothVerdict::singular);
  CHECK(idrep.pattern == "3412");
  CHECK(idrep.radius == 4);
}

TEST_CASE("smoothness claims stay behind the embedding hypothesis") {
  SurjectionSpec wide;
  wide.carrier = {{omega_up(), omega_up()}, "E"};
  wide.target.order = {{omega_up(), omega_up()}, "A"};
  wide.rules = {MonoRule{0, 1, 0}, MonoRule{1, 1, 0}};

  const SmoothnessReport idrep =
      truncation_scan(make_cell(wide, identity_perm(wide.carrier)), 6);
  CHECK(idrep.verdict == SmoothVerdict::inconclusive);

  const FinPerm w = transposition(wide.carrier, {0, 0}, {0, 3});
  const SmoothnessReport rep = truncation_scan(make_cell(wide, w), 8);
  CHECK(rep.verdict == SmoothVerdict::singular);

  TwoOrderCarrier two;
  two.order_B = {{omega_up(), omega_up()}, "B"};
  two.order_F = {{omega_up(), omega_up()}, "F"};
  two.f_map = {{0, false, 0}, {1, false, 0}};
  const SmoothnessReport flat = maximal_flag_smooth(two, identity_perm(two.order_B));
  CHECK(flat.verdict == SmoothVerdict::inconclusive);
  const SmoothnessReport hit =
      maximal_flag_smooth(two, perm_of_line(two.order_B, {3, 1, 2, 0}));
  CHECK(hit.verdict == SmoothVerdict::singular);
}

TEST_CASE("family detection rejects what the scan cannot see") {
  SurjectionSpec overlap;
  overlap.carrier = {{omega_up(), omega_up()}, "E"};
  overlap.target.order = {{omega_up()}, "A"};
  overlap.rules = {MonoRule{0, 1, 0}, MonoRule{0, 2, 0}};
  CHECK(code_of([&] {
          truncation_scan(make_cell(overlap, identity_perm(overlap.carrier)), 4);
        }) == Errc::unsupported_family);

  SurjectionSpec fiber;
  fiber.carrier = {{fin_chain(4)}, "E"};
  fiber.target.order = {{fin_chain(3)}, "A"};
  fiber.rules = {ListRule{{{0, 0}, {0, 0}, {0, 1}, {0, 2}}}};
  CHECK(code_of([&] {
          truncation_scan(make_cell(fiber, identity_perm(fiber.carrier)), 4);
        }) == Errc::unsupported_family);
}

TEST_CASE("injective flag family with disjoint strides stays supported") {
  SurjectionSpec comb;
  comb.carrier = {{omega_up(), omega_up(), fin_chain(1)}, "E"};
  comb.target.order = {{omega_up()}, "A"};
  comb.rules = {MonoRule{0, 2, 1}, MonoRule{0, 2, 2}, ListRule{{{0, 0}}}};
  // Odd labels, even labels from two up, and the singleton zero: injective
  // and surjective, so the scan runs; the zero at the top is a pattern.
  const SmoothnessReport rep =
      truncation_scan(make_cell(comb, identity_perm(comb.carrier)), 5);
  CHECK(rep.verdict == SmoothVerdict::singular);
  CHECK(rep.pattern == "4231");
  CHECK(rep.radius == 3);
}
