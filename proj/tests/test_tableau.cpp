#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "relaxrk/tableau.hpp"
#include "relaxrk/tableau_io.hpp"

using namespace relaxrk;

namespace {
const double kGamma = 1.0 - 1.0 / std::sqrt(2.0);
}

TEST_CASE("derive_c matches the published abscissae", "[tableau]") {
  SECTION("ssp2-222 implicit") {
    std::vector<double> a = {kGamma, 0.0, 1.0 - 2.0 * kGamma, kGamma};
    auto c = derive_c(a, 2, TableauKind::Dirk);
    CHECK(c[0] == Catch::Approx(kGamma).margin(1e-15));
    CHECK(c[1] == Catch::Approx(1.0 - kGamma).margin(1e-15));
  }
  SECTION("zero matrix explicit") {
    std::vector<double> a(9, 0.0);
    auto c = derive_c(a, 3, TableauKind::Explicit);
    for (double v : c) CHECK(v == 0.0);
  }
  SECTION("ssp3-433 explicit") {
    const auto t = builtin_scheme("ssp3-433");
    const auto& ct = t.explicit_part.c;
    CHECK(ct[0] == 0.0);
    CHECK(ct[1] == 0.0);
    CHECK(ct[2] == 1.0);
    CHECK(ct[3] == 0.5);
  }
  SECTION("non-triangular input throws") {
    std::vector<double> a = {0.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(derive_c(a, 2, TableauKind::Explicit), invalid_input);
    std::vector<double> d = {0.5, 0.0, 0.0, 0.5};
    CHECK_NOTHROW(derive_c(d, 2, TableauKind::Dirk));
    CHECK_THROWS_AS(derive_c(d, 2, TableauKind::Explicit), invalid_input);
  }
}

TEST_CASE("order conditions", "[tableau]") {
  SECTION("ssp3-433 explicit third-order sums evaluated by hand") {
    const auto t = builtin_scheme("ssp3-433");
    const auto& wt = t.explicit_part.w;
    const auto& ct = t.explicit_part.c;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      s1 += wt[i] * ct[i];
      s2 += wt[i] * ct[i] * ct[i];
    }
    CHECK(s1 == Catch::Approx(0.5).margin(1e-15));
    CHECK(s2 == Catch::Approx(1.0 / 3.0).margin(1e-15));
    const auto rep = verify_order(t, 3);
    CHECK(rep.max_order_satisfied == 3);
  }
  SECTION("ssp2-222 pair is second order, not third") {
    const auto rep = verify_order(builtin_scheme("ssp2-222"), 3);
    CHECK(rep.max_order_satisfied == 2);
    CHECK(rep.worst_residual(3) > 0.01);
  }
  SECTION("degenerate quadrature fails order 2 with residual one half") {
    ImexTableau t;
    t.name = "degenerate";
    t.declared_order = 1;
    t.explicit_part = make_tableau({{0, 0}, {1, 0}}, {1.0, 0.0}, TableauKind::Explicit);
    t.implicit_part = make_tableau({{0, 0}, {1, 0}}, {1.0, 0.0}, TableauKind::Dirk);
    const auto rep = verify_order(t, 2);
    CHECK(rep.max_order_satisfied == 1);
    bool found = false;
    for (const auto& e : rep.entries)
      if (e.label == "wt.ct" && e.residual == Catch::Approx(0.5).margin(1e-15)) found = true;
    CHECK(found);
  }
  SECTION("unsupported order throws") {
    CHECK_THROWS_AS(verify_order(builtin_scheme("ssp3-433"), 4), invalid_input);
    CHECK_THROWS_AS(verify_order(builtin_scheme("ssp3-433"), 0), invalid_input);
  }
  SECTION("every builtin verifies its declared order below 1e-13") {
    for (const auto& name : builtin_scheme_names()) {
      const auto t = builtin_scheme(name);
      const auto rep = verify_order(t, t.declared_order);
      INFO(name);
      CHECK(rep.max_order_satisfied == t.declared_order);
      for (const auto& e : rep.entries) CHECK(e.residual < 1e-13);
    }
  }
}

TEST_CASE("abscissae of builtins reproduce their coefficient rows", "[tableau]") {
  for (const auto& name : builtin_scheme_names()) {
    const auto t = builtin_scheme(name);
    INFO(name);
    const auto ct = derive_c(t.explicit_part.a, t.stages(), TableauKind::Explicit);
    const auto c = derive_c(t.implicit_part.a, t.stages(), TableauKind::Dirk);
    for (std::size_t i = 0; i < t.stages(); ++i) {
      CHECK(std::abs(ct[i] - t.explicit_part.c[i]) <= 1e-15);
      CHECK(std::abs(c[i] - t.implicit_part.c[i]) <= 1e-15);
    }
  }
}

TEST_CASE("stability function at infinity", "[tableau]") {
  SECTION("L-stable builtins give one") {
    for (const char* name : {"ssp2-222", "ssp3-332", "ssp3-433"}) {
      const auto v = stability_function_at_infinity(builtin_scheme(name).implicit_part);
      REQUIRE(v.has_value());
      INFO(name);
      CHECK(std::abs(*v - 1.0) < 1e-13);
    }
  }
  SECTION("ssp3-332 implicit by independent forward substitution") {
    const auto t = builtin_scheme("ssp3-332").implicit_part;
    const double x1 = 1.0 / kGamma;
    const double x2 = (1.0 - (1.0 - 2.0 * kGamma) * x1) / kGamma;
    const double x3 = (1.0 - (0.5 - kGamma) * x1) / kGamma;
    const double expected = x1 / 6.0 + x2 / 6.0 + 2.0 * x3 / 3.0;
    CHECK(*stability_function_at_infinity(t) == Catch::Approx(expected).margin(1e-14));
    CHECK(expected == Catch::Approx(1.0).margin(1e-13));
  }
  SECTION("backward Euler") {
    const auto be = make_tableau({{1.0}}, {1.0}, TableauKind::Dirk);
    CHECK(*stability_function_at_infinity(be) == Catch::Approx(1.0));
  }
  SECTION("singular A reports inapplicable") {
    const auto t = make_tableau({{0, 0}, {1, 0}}, {0.5, 0.5}, TableauKind::Dirk);
    CHECK_FALSE(stability_function_at_infinity(t).has_value());
  }
}

TEST_CASE("stiff accuracy is a coefficient-level comparison", "[tableau]") {
  CHECK(is_stiffly_accurate(builtin_scheme("ssp2-322").implicit_part));
  CHECK(is_stiffly_accurate(builtin_scheme("ssp2-332").implicit_part));
  CHECK_FALSE(is_stiffly_accurate(builtin_scheme("ssp2-222").implicit_part));
  CHECK_FALSE(is_stiffly_accurate(builtin_scheme("ssp3-433").implicit_part));
}

TEST_CASE("asymptotic-preserving classification", "[tableau]") {
  for (const auto& name : builtin_scheme_names())
    CHECK(ap_classify(builtin_scheme(name)) == APClass::FullAP);

  ImexTableau t;
  t.explicit_part = make_tableau({{0, 0}, {1, 0}}, {0.5, 0.5}, TableauKind::Explicit);
  t.implicit_part = make_tableau({{0, 0}, {0.5, 0.5}}, {0.5, 0.5}, TableauKind::Dirk);
  CHECK(ap_classify(t) == APClass::APWellPreparedOnly);

  t.implicit_part = make_tableau({{0, 0}, {1, 0}}, {0.5, 0.5}, TableauKind::Dirk);
  CHECK(ap_classify(t) == APClass::NotAP);
}

TEST_CASE("builtin scheme coefficients", "[tableau]") {
  SECTION("ssp2-222 explicit") {
    const auto t = builtin_scheme("ssp2-222");
    CHECK(t.explicit_part.coeff(1, 0) == 1.0);
    CHECK(t.explicit_part.w[0] == 0.5);
    CHECK(t.explicit_part.w[1] == 0.5);
  }
  SECTION("ssp2-332 explicit abscissae and weights") {
    const auto t = builtin_scheme("ssp2-332");
    CHECK(t.explicit_part.c[0] == 0.0);
    CHECK(t.explicit_part.c[1] == 0.5);
    CHECK(t.explicit_part.c[2] == 1.0);
    for (double w : t.explicit_part.w) CHECK(w == Catch::Approx(1.0 / 3.0));
  }
  SECTION("ssp3-433 implicit fourth row matches the printed constants") {
    const auto t = builtin_scheme("ssp3-433");
    const double al = t.implicit_part.coeff(0, 0);
    const double be = t.implicit_part.coeff(3, 0);
    const double eta = t.implicit_part.coeff(3, 1);
    // the table prints 14 digits; storage is the full-precision root
    CHECK(std::abs(al - 0.24169426078821) < 1e-13);
    CHECK(std::abs(be - 0.06042356519705) < 1e-13);
    CHECK(std::abs(eta - 0.12915286960590) < 1e-13);
    CHECK(t.implicit_part.coeff(3, 2) ==
          Catch::Approx(0.5 - be - eta - al).margin(1e-15));
    CHECK(t.implicit_part.coeff(3, 3) == al);
  }
  SECTION("unknown name lists valid ones") {
    try {
      builtin_scheme("ssp9-999");
      FAIL("expected a lookup error");
    } catch (const invalid_input& e) {
      const std::string msg = e.what();
      for (const auto& n : builtin_scheme_names())
        CHECK(msg.find(n) != std::string::npos);
    }
  }
}

TEST_CASE("shu-osher conversion", "[tableau]") {
  SECTION("two-stage form reproduces the ssp2-222 explicit tableau") {
    ShuOsherForm s;
    s.nu = 2;
    s.alpha = {{1.0}, {0.5, 0.5}};
    s.beta = {{1.0}, {0.0, 0.5}};
    const auto [b, ssp] = shu_osher_convert(s);
    CHECK(b.nu == 2);
    CHECK(b.coeff(1, 0) == Catch::Approx(1.0));
    CHECK(b.w[0] == Catch::Approx(0.5));
    CHECK(b.w[1] == Catch::Approx(0.5));
    CHECK(b.c[1] == Catch::Approx(1.0));
    CHECK(ssp == Catch::Approx(1.0));
  }
  SECTION("forward Euler") {
    ShuOsherForm s;
    s.nu = 1;
    s.alpha = {{1.0}};
    s.beta = {{1.0}};
    const auto [b, ssp] = shu_osher_convert(s);
    CHECK(b.nu == 1);
    CHECK(b.w[0] == Catch::Approx(1.0));
    CHECK(ssp == Catch::Approx(1.0));
  }
  SECTION("halving beta doubles the ssp coefficient") {
    ShuOsherForm s;
    s.nu = 2;
    s.alpha = {{1.0}, {0.5, 0.5}};
    s.beta = {{0.5}, {0.0, 0.25}};
    const auto conv = shu_osher_convert(s);
    CHECK(conv.ssp_coefficient == Catch::Approx(2.0));
  }
  SECTION("invalid forms are rejected") {
    ShuOsherForm s;
    s.nu = 2;
    s.alpha = {{1.0}, {0.0, 1.0}};
    s.beta = {{1.0}, {0.5, 0.5}};  // alpha = 0 with beta != 0
    CHECK_THROWS_AS(shu_osher_convert(s), invalid_input);
    s.alpha = {{1.0}, {-0.5, 1.5}};
    s.beta = {{1.0}, {0.0, 0.5}};
    CHECK_THROWS_AS(shu_osher_convert(s), invalid_input);
  }
  SECTION("converted source scheme keeps its verified order") {
    // ssp2-222's explicit part given in convex-combination form, paired with
    // the original implicit part: max_order_satisfied stays 2
    ShuOsherForm s;
    s.nu = 2;
    s.alpha = {{1.0}, {0.5, 0.5}};
    s.beta = {{1.0}, {0.0, 0.5}};
    const auto conv = shu_osher_convert(s);
    ImexTableau t = builtin_scheme("ssp2-222");
    const int before = verify_order(t, 3).max_order_satisfied;
    t.explicit_part = conv.tableau;
    const int after = verify_order(t, 3).max_order_satisfied;
    CHECK(before == after);
  }
}

TEST_CASE("tableau files parse and verify", "[tableau]") {
  std::stringstream file;
  file << "# ssp2-222 written out as a file\n"
       << "0 0\n1 0\n0.5 0.5\n"
       << "---\n"
       << kGamma << " 0\n" << 1.0 - 2.0 * kGamma << " " << kGamma << "\n0.5 0.5\n";
  const auto t = parse_imex_tableau(file, "file-ssp2", 2);
  CHECK(t.stages() == 2);
  const auto rep = verify_order(t, 2);
  CHECK(rep.max_order_satisfied == 2);

  std::stringstream bad("0 0\n1 0\n0.5 0.5\n");
  CHECK_THROWS_AS(parse_imex_tableau(bad, "x", 1), invalid_input);
}
