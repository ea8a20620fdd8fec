#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "mvk/equivariant.hpp"

using namespace mvk;

TEST_CASE("lcm of multiplicities") {
  Context ctx;
  auto mk = [&](std::vector<std::pair<std::string, int>> comps) {
    EquivModel m;
    m.components = std::move(comps);
    return m;
  };
  CHECK(lcm_mult(mk({{"A", 1}, {"B", 1}})) == 1);
  CHECK(lcm_mult(mk({{"A", 2}, {"B", 3}})) == 6);
  CHECK(lcm_mult(mk({{"A", 4}, {"B", 6}})) == 12);
  CHECK_THROWS_MATCHES(lcm_mult(mk({})), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::NoComponents; }));
}

TEST_CASE("model validation") {
  SECTION("covers required over every component") {
    Context ctx;
    CHECK_THROWS_MATCHES(build_model(ctx, 2, {{"E", 1}}, {}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::MissingCover;
                         }));
  }
  SECTION("orders must divide the multiplicity lcm") {
    Context ctx;
    CHECK_THROWS_MATCHES(
        build_model(ctx, 2, {{"E", 2}}, {{{"E"}, {{"Et", 3}}}}), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == Errc::LabelConflict; }));
  }
  SECTION("reduced isolated component carries the trivial cover") {
    Context ctx;
    CHECK_THROWS_AS(build_model(ctx, 2, {{"E", 1}}, {{{"E"}, {{"Et", 1}, {"Et2", 1}}}}),
                    Error);
  }
  SECTION("nerve downward closure") {
    Context ctx;
    CHECK_THROWS_MATCHES(
        build_model(ctx, 2, {{"A", 1}, {"B", 2}},
                    {{{"A"}, {{"At", 1}}},
                     {{"B"}, {{"Bt", 2}}},
                     {{"A", "B", "A"}, {{"bad", 1}}}}),
        Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
          return e.code() == Errc::NerveInconsistent;
        }));
  }
}

TEST_CASE("equivariant volume on small models") {
  SECTION("reduced smooth model is its fiber with the trivial action") {
    Context ctx;
    EquivModel m = build_model(ctx, 3, {{"E", 1}}, {{{"E"}, {{"Et", 1}}}});
    EquivClass v = vol_equivariant(ctx, m, 3);
    REQUIRE(v.term_count() == 1);
    auto [mono, c] = *v.terms().begin();
    CHECK(c == 1);
    REQUIRE(mono.atoms.size() == 1);
    CHECK(mono.atoms[0].order == 1);
    CHECK(render_text(ctx.atoms, v) == "Et°");
  }
  SECTION("double component gives one order-two term") {
    Context ctx;
    EquivModel m = build_model(ctx, 2, {{"E", 2}}, {{{"E"}, {{"Et", 2}}}});
    for (int e = 2; e <= 4; ++e) {
      EquivClass v = vol_equivariant(ctx, m, e);
      REQUIRE(v.term_count() == 1);
      auto [mono, c] = *v.terms().begin();
      CHECK(c == 1);
      CHECK(mono.tau == e - 2);
      REQUIRE(mono.atoms.size() == 1);
      CHECK(mono.atoms[0].order == 2);
    }
    CHECK(render_text(ctx.atoms, vol_equivariant(ctx, m, 2)) == "Et°[2]");
  }
  SECTION("two reduced components match the plain volume") {
    Context ctx;
    EquivModel m = build_model(ctx, 3, {{"E1", 1}, {"E2", 1}},
                               {{{"E1"}, {{"F1", 1}}},
                                {{"E2"}, {{"F2", 1}}},
                                {{"E1", "E2"}, {{"F12", 1}}}});
    EquivClass v = vol_equivariant(ctx, m, 3);
    // same nerve as a plain strata complex, on separate atoms
    StrataComplex x = from_snc_nerve(ctx, 3, {{"E1"}, {"E2"}},
                                     {{{"E1", "E2"}, {{"D"}}}});
    ctx.labels.freeze();
    CommuteReport rep = check_commute(ctx, m, x,
                                      {{"F1", "E1"}, {"F2", "E2"}, {"F12", "D"}});
    INFO(rep.mismatch);
    CHECK(rep.ok);
    CHECK(forget_action(v).term_count() == v.term_count());
  }
}

TEST_CASE("forget and restrict") {
  Context ctx;
  AtomId a = ctx.atoms.define("A", 2);
  EquivClass x = EquivClass::atom(EquivAtom{a, 6}) * EquivClass::lef_power(1) +
                 EquivClass::tau_power(3) * Int(2);

  SECTION("forget drops labels and keeps coefficients") {
    GradedClass f = forget_action(x);
    GradedClass expect = GradedClass::atom(a) * GradedClass::lef_power(1) +
                         GradedClass::tau_power(3) * Int(2);
    CHECK(f == expect);
  }
  SECTION("restriction order arithmetic") {
    auto order_of = [](const EquivClass& c) {
      for (const auto& [m, k] : c.terms())
        if (!m.atoms.empty()) return m.atoms[0].order;
      return 1;
    };
    CHECK(order_of(restrict_action(x, 2)) == 3);
    CHECK(order_of(restrict_action(x, 4)) == 3);
    CHECK(order_of(restrict_action(x, 3)) == 2);
    CHECK(order_of(restrict_action(x, 1)) == 6);
    CHECK(restrict_action(x, 1) == x);
  }
  SECTION("forget after restrict is forget") {
    for (int m = 1; m <= 8; ++m)
      CHECK(forget_action(restrict_action(x, m)) == forget_action(x));
  }
  SECTION("iterated restriction multiplies the indices, exhaustively") {
    for (int n = 1; n <= 24; ++n) {
      Context c2;
      AtomId b = c2.atoms.define("B", 1);
      EquivClass y = EquivClass::atom(EquivAtom{b, n});
      for (int p = 1; p <= 12; ++p)
        for (int q = 1; q <= 12; ++q) {
          EquivClass two = restrict_action(restrict_action(y, p), q);
          EquivClass one = restrict_action(y, p * q);
          REQUIRE(two == one);
          int got = two.terms().begin()->first.atoms[0].order;
          REQUIRE(got == n / std::gcd(n, p * q));
        }
    }
  }
}

TEST_CASE("commutation with base change") {
  SECTION("wrong identification is reported") {
    Context ctx;
    EquivModel m = build_model(ctx, 2, {{"E", 1}, {"F", 1}},
                               {{{"E"}, {{"Ec", 1}}},
                                {{"F"}, {{"Fc", 1}}},
                                {{"E", "F"}, {{"EFc", 1}}}});
    StrataComplex x = from_snc_nerve(ctx, 2, {{"E"}, {"F"}}, {{{"E", "F"}, {{"D"}}}});
    ctx.labels.freeze();
    CommuteReport bad = check_commute(ctx, m, x, {{"Ec", "F"}, {"Fc", "E"}, {"EFc", "E"}});
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.mismatch.empty());
    CommuteReport good = check_commute(ctx, m, x, {{"Ec", "E"}, {"Fc", "F"}, {"EFc", "D"}});
    INFO(good.mismatch);
    CHECK(good.ok);
  }
  SECTION("double cover identified with its own fiber") {
    Context ctx;
    EquivModel m = build_model(ctx, 2, {{"E", 2}}, {{{"E"}, {{"Et", 2}}}});
    StrataComplex x = build_complex(ctx, 2, {{"Ecover", 0}}, {});
    ctx.labels.freeze();
    CommuteReport rep = check_commute(ctx, m, x, {{"Et", "Ecover"}});
    INFO(rep.mismatch);
    CHECK(rep.ok);
  }
}

TEST_CASE("equivariant sums stay balanced with multiplicities and splits") {
  Context ctx;
  // two components, one doubled; the intersection cover splits in two pieces
  EquivModel m = build_model(ctx, 3, {{"A", 2}, {"B", 1}},
                             {{{"A"}, {{"Ac", 2}}},
                              {{"B"}, {{"Bc", 1}}},
                              {{"A", "B"}, {{"D1", 2}, {"D2", 2}}}});
  CHECK(lcm_mult(m) == 2);
  EquivClass v = vol_equivariant(ctx, m, 3);  // open == closed asserted inside
  CHECK_FALSE(v.is_zero());
  EquivClass r = restrict_action(v, 2);
  for (const auto& [mono, c] : r.terms())
    for (const auto& at : mono.atoms) CHECK(at.order == 1);
}
