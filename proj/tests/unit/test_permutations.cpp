#include <array>

#include "doctest.h"
#include "indflag/permutations.hpp"

using namespace indflag;

namespace {

OrderSpec zline() { return {{z_line()}, "z"}; }
OrderSpec chain(long long n) { return {{fin_chain(n)}, "chain"}; }

InvolutionSpec reversal(long long shift = 0, char tag = 'C') {
  InvolutionSpec iv;
  iv.pairing = {{0, 0, shift}};
  iv.type_tag = tag;
  return iv;
}

}  // namespace

TEST_CASE("apply, transposition and composition order") {
  OrderSpec s = chain(4);
  Address a{0, 0}, b{0, 1}, c{0, 2};
  FinPerm tab = transposition(s, a, b);
  CHECK(apply(tab, a) == b);
  CHECK(apply(tab, b) == a);
  CHECK(apply(tab, c) == c);
  CHECK(inverse(tab) == tab);
  CHECK(compose(tab, inverse(tab)) == identity_perm(s));
  // u first, then v
  FinPerm tbc = transposition(s, b, c);
  CHECK(apply(compose(tab, tbc), c) == b);
  CHECK_THROWS_AS((void)transposition(s, a, a), Error);
  CHECK_THROWS_AS((void)compose(tab, transposition(zline(), {0, 0}, {0, 1})), Error);
}

TEST_CASE("compose matches the permutation matrix product") {
  OrderSpec s = chain(5);
  FinPerm u = make_fin_perm(s, {{{0, 0}, {0, 2}}, {{0, 2}, {0, 4}}, {{0, 4}, {0, 0}}});
  FinPerm v = make_fin_perm(s, {{{0, 1}, {0, 3}}, {{0, 3}, {0, 2}}, {{0, 2}, {0, 1}}});
  auto matrix = [&](const FinPerm& w) {
    std::array<std::array<int, 5>, 5> m{};
    for (long long j = 0; j < 5; ++j) m[(size_t)apply(w, {0, j}).offset][(size_t)j] = 1;
    return m;
  };
  auto mu = matrix(u), mv = matrix(v), mc = matrix(compose(u, v));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      int prod = 0;
      for (int k = 0; k < 5; ++k) prod += mv[(size_t)i][(size_t)k] * mu[(size_t)k][(size_t)j];
      CHECK(prod == mc[(size_t)i][(size_t)j]);
    }
}

TEST_CASE("make_fin_perm rejects non-bijections") {
  OrderSpec s = chain(3);
  CHECK_THROWS_AS((void)make_fin_perm(s, {{{0, 0}, {0, 1}}, {{0, 2}, {0, 1}}}), Error);
  CHECK_THROWS_AS((void)make_fin_perm(s, {{{0, 0}, {0, 1}}}), Error);
  FinPerm w = make_fin_perm(s, {{{0, 0}, {0, 0}}});
  CHECK(w == identity_perm(s));
}

TEST_CASE("length of plain permutations") {
  OrderSpec z = zline();
  CHECK(length(identity_perm(z)) == ExtendedCount::finite(0));
  FinPerm t05 = transposition(z, {0, 0}, {0, 5});
  CHECK(length(t05) == ExtendedCount::finite(9));
  CHECK(length(inverse(t05)) == ExtendedCount::finite(9));

  OrderSpec two{{omega_up(), omega_up()}, "ww"};
  CHECK(length(transposition(two, {0, 0}, {1, 0})) == ExtendedCount::infinite());

  OrderSpec mixed{{omega_down(), fin_chain(2), omega_up()}, "m"};
  CHECK(length(transposition(mixed, {0, 3}, {2, 4})) == ExtendedCount::finite(19));

  FinPerm cyc = make_fin_perm(z, {{{0, 0}, {0, 2}}, {{0, 2}, {0, 3}}, {{0, 3}, {0, 0}}});
  CHECK(length(cyc) == length(inverse(cyc)));
}

TEST_CASE("equivariant permutations and their lengths") {
  OrderSpec f3 = chain(3);
  InvolutionSpec ib = reversal(0, 'B');
  OmegaPerm s0 = omega_transposition(f3, ib, {0, 0}, {0, 2});
  CHECK(s0.underlying.moves.size() == 2);
  CHECK(length(s0) == ExtendedCount::finite(1));
  CHECK_THROWS_AS((void)omega_transposition(f3, ib, {0, 0}, {0, 1}), Error);

  OrderSpec f4 = chain(4);
  InvolutionSpec ic = reversal(0, 'C');
  OmegaPerm u0 = omega_transposition(f4, ic, {0, 1}, {0, 2});
  OmegaPerm u1 = omega_transposition(f4, ic, {0, 0}, {0, 1});
  CHECK(u0.underlying.moves.size() == 2);
  CHECK(u1.underlying.moves.size() == 4);
  CHECK(length(u0) == ExtendedCount::finite(1));
  CHECK(length(u1) == ExtendedCount::finite(1));
  OmegaPerm w0 = make_omega_perm(
      f4, ic,
      make_fin_perm(f4, {{{0, 0}, {0, 3}}, {{0, 3}, {0, 0}}, {{0, 1}, {0, 2}}, {{0, 2}, {0, 1}}}));
  CHECK(length(w0) == ExtendedCount::finite(4));

  CHECK_THROWS_AS(
      (void)make_omega_perm(f4, ic, transposition(f4, {0, 0}, {0, 1})), Error);
}

TEST_CASE("equivariant lengths on an infinite carrier") {
  OrderSpec s{{omega_down(), omega_up()}, "dz"};
  InvolutionSpec iv;
  iv.pairing = {{0, 1, 0}};
  iv.type_tag = 'C';

  OmegaPerm t = omega_transposition(s, iv, {0, 5}, {0, 3});
  CHECK(t.underlying.moves.size() == 4);
  CHECK(length(t) == ExtendedCount::finite(3));
  CHECK(length(inverse(t)) == ExtendedCount::finite(3));

  OrderSpec back{{omega_up(), omega_down()}, "ud"};
  InvolutionSpec jv;
  jv.pairing = {{0, 1, 0}};
  jv.type_tag = 'C';
  OmegaPerm far = omega_transposition(back, jv, {0, 0}, {1, 0});
  CHECK(far.underlying.moves.size() == 2);  // partner pair coincides
  CHECK(length(far) == ExtendedCount::infinite());
}

TEST_CASE("truncated lengths") {
  OrderSpec f3 = chain(3);
  FinPerm cyc = make_fin_perm(f3, {{{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}, {{0, 2}, {0, 0}}});
  CHECK(length_truncated(cyc, 1) == 2);
  CHECK(length_truncated(identity_perm(f3), 1) == 0);

  OrderSpec z = zline();
  FinPerm t05 = transposition(z, {0, 0}, {0, 5});
  CHECK_THROWS_AS((void)length_truncated(t05, 3), Error);
  CHECK(length_truncated(t05, 5) == 9);
  CHECK(length_truncated(t05, 9) == 9);

  OrderSpec s{{omega_down(), omega_up()}, "dz"};
  InvolutionSpec iv;
  iv.pairing = {{0, 1, 0}};
  iv.type_tag = 'C';
  OmegaPerm t = omega_transposition(s, iv, {0, 5}, {0, 3});
  CHECK(length_truncated(t, 6) == 3);
  CHECK(length_truncated(t, 10) == 3);

  OrderSpec two{{omega_up(), omega_up()}, "ww"};
  FinPerm grow = transposition(two, {0, 0}, {1, 0});
  long long prev = -1;
  for (long long r = 1; r <= 12; r += 3) {
    long long cur = length_truncated(grow, r);
    CHECK(cur > prev);
    prev = cur;
  }
}
