#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "support/test_util.hpp"

using namespace tcube;
using tutil::make_rng;
using tutil::rand_real_cubic;
using tutil::rand_real_dense;
using tutil::real_cubic;

namespace {

// Greedy multiset matching: worst distance after pairing each left value with
// the nearest unconsumed right value.
double match_roots(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i) {
            double d = std::abs(x - b[i]);
            if (d < bd) { bd = d; best = i; }
        }
        worst = std::max(worst, bd);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

// Independent dense series oracle: plain partial sums with locally generated
// coefficients, no shared code with the library evaluator.
DenseMatrix<RealDomain> dense_func_oracle(const std::string& name,
                                          const DenseMatrix<RealDomain>& m, int terms = 200) {
    const int n = m.rows();
    auto acc = DenseMatrix<RealDomain>(n, n, RealDomain{});
    auto pw = DenseMatrix<RealDomain>::identity(n, RealDomain{});
    double fact = 1.0;
    for (int k = 0; k <= terms; ++k) {
        if (k > 0) {
            pw = tutil::naive_mul(pw, m);
            fact *= k;
        }
        double c = 0.0;
        if (name == "exp") c = 1.0 / fact;
        else if (name == "sin") c = (k % 2 == 1) ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact : 0.0;
        else if (name == "cos") c = (k % 2 == 0) ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact : 0.0;
        else if (name == "sinh") c = (k % 2 == 1) ? 1.0 / fact : 0.0;
        else if (name == "cosh") c = (k % 2 == 0) ? 1.0 / fact : 0.0;
        else if (name == "log1p") c = (k == 0) ? 0.0 : ((k % 2 == 1 ? 1.0 : -1.0) / k);
        else FAIL("unknown oracle name");
        if (c != 0.0)
            for (std::size_t i = 0; i < acc.data().size(); ++i)
                acc.mutable_data()[i] += c * pw.data()[i];
    }
    return acc;
}

CubicMatrix<RealDomain> rand_unit_ball(std::mt19937_64& rng, int n, int s, double norm_cap) {
    auto a = rand_real_cubic(rng, n, n, s);
    double f = frobenius_norm(a);
    if (f > norm_cap) a = scale(norm_cap / f, a);
    return a;
}

}  // namespace

TEST_CASE("named series coefficient anchors", "[analysis]") {
    auto e = named_series("exp");
    REQUIRE(e.constant == 1.0);
    REQUIRE(e.coeffs[0] == 1.0);
    REQUIRE(e.coeffs[1] == Catch::Approx(0.5));
    REQUIRE(e.coeffs[2] == Catch::Approx(1.0 / 6.0));
    REQUIRE(std::isinf(e.radius));

    auto l = named_series("log1p");
    REQUIRE(l.constant == 0.0);
    REQUIRE(l.radius == 1.0);
    REQUIRE(l.coeffs[0] == 1.0);
    REQUIRE(l.coeffs[1] == Catch::Approx(-0.5));
    REQUIRE(l.coeffs[2] == Catch::Approx(1.0 / 3.0));

    auto s = named_series("sin");
    REQUIRE(s.constant == 0.0);
    REQUIRE(s.coeffs[0] == 1.0);
    REQUIRE(s.coeffs[1] == 0.0);
    REQUIRE(s.coeffs[2] == Catch::Approx(-1.0 / 6.0));
    REQUIRE(s.coeffs[4] == Catch::Approx(1.0 / 120.0));

    auto c = named_series("cos");
    REQUIRE(c.constant == 1.0);
    REQUIRE(c.coeffs[0] == 0.0);
    REQUIRE(c.coeffs[1] == Catch::Approx(-0.5));
    REQUIRE(c.coeffs[3] == Catch::Approx(1.0 / 24.0));

    REQUIRE(named_series("sinh").coeffs[2] == Catch::Approx(1.0 / 6.0));
    REQUIRE(named_series("cosh").coeffs[1] == Catch::Approx(0.5));

    auto b1 = named_series("binomial", 1.0);
    REQUIRE(b1.coeffs[0] == 1.0);
    for (std::size_t k = 1; k < b1.coeffs.size(); ++k) REQUIRE(b1.coeffs[k] == 0.0);
    auto bh = named_series("binomial", 0.5);
    REQUIRE(bh.coeffs[0] == Catch::Approx(0.5));
    REQUIRE(bh.coeffs[1] == Catch::Approx(-0.125));
    REQUIRE(bh.coeffs[2] == Catch::Approx(0.0625));

    REQUIRE_THROWS_AS(named_series("gamma"), RangeError);
    REQUIRE_THROWS_AS(named_series("exp", 0.0, 0), RangeError);
    // Stored tails exceed the default evaluation cap by design.
    REQUIRE(static_cast<int>(e.coeffs.size()) > TruncationPolicy{}.max_terms);
}

TEST_CASE("poly_eval", "[analysis]") {
    auto rng = make_rng(50);
    SECTION("p(x) = x returns A under every kind") {
        auto a = rand_real_cubic(rng, 2, 2, 2);
        std::vector<double> p{0.0, 1.0};
        REQUIRE(poly_eval<RealDomain>(p, a, ProductKind::TProduct) == a);
        REQUIRE(poly_eval<RealDomain>(p, a, ProductKind::TStp) == a);
        REQUIRE(poly_eval<RealDomain>(p, a, ProductKind::DkStp) == a);
    }
    SECTION("x^2 - 1 vanishes at the t-identity") {
        auto e = identity_t(2, 2);
        auto r = poly_eval<RealDomain>({-1.0, 0.0, 1.0}, e, ProductKind::TProduct);
        REQUIRE(is_zero(r));
    }
    SECTION("gamma homomorphism against a dense Horner oracle") {
        std::vector<double> p{0.75, -2.0, 0.0, 1.0, 0.5};
        for (int rep = 0; rep < 20; ++rep) {
            auto a = rand_real_cubic(rng, 2, 2, 3);
            auto lhs = gamma(poly_eval<RealDomain>(p, a, ProductKind::TProduct));
            auto g = gamma(a);
            auto acc = scale(p.back(), DenseMatrix<RealDomain>::identity(g.rows(), RealDomain{}));
            for (int j = static_cast<int>(p.size()) - 2; j >= 0; --j)
                acc = add(tutil::naive_mul(acc, g),
                          scale(p[static_cast<std::size_t>(j)],
                                DenseMatrix<RealDomain>::identity(g.rows(), RealDomain{})));
            REQUIRE(tutil::dense_max_abs_diff(lhs, acc) <=
                    1e-11 * std::max(1.0, tutil::dense_fro(acc)));
        }
    }
    SECTION("mod domain polynomials are exact") {
        ModDomain dom{12};
        auto a = tutil::mod_cubic(2, 2, 2, 12, {1, 2, 3, 4, 5, 6, 7, 8});
        std::vector<std::int64_t> p{3, 0, 1};  // x^2 + 3
        auto direct = add(power(a, 2, ProductKind::TStp),
                          scale(static_cast<std::int64_t>(3), identity_t(2, 2, dom)));
        REQUIRE(poly_eval<ModDomain>(p, a, ProductKind::TStp) == direct);
    }
    SECTION("non-square slices need zero constant") {
        auto a = rand_real_cubic(rng, 2, 3, 2);
        REQUIRE_THROWS_AS(poly_eval<RealDomain>({1.0, 1.0}, a, ProductKind::TStp),
                          UnsupportedError);
        auto r = poly_eval<RealDomain>({0.0, 2.0, 1.0}, a, ProductKind::TStp);
        auto expect = add(scale(2.0, a), power(a, 2, ProductKind::TStp));
        REQUIRE(max_abs_diff(r, expect) < 1e-12);
    }
}

TEST_CASE("char_poly", "[analysis]") {
    SECTION("identity anchor") {
        auto p = char_poly(DenseMatrix<RealDomain>::identity(2, RealDomain{}));
        REQUIRE(p.size() == 3);
        REQUIRE(p[2] == 1.0);
        REQUIRE(p[1] == Catch::Approx(-2.0));
        REQUIRE(p[0] == Catch::Approx(1.0));
    }
    SECTION("swap matrix anchor") {
        DenseMatrix<RealDomain> m(2, 2, RealDomain{}, {0, 1, 1, 0});
        auto p = char_poly(m);
        REQUIRE(p[2] == 1.0);
        REQUIRE(p[1] == Catch::Approx(0.0).margin(1e-14));
        REQUIRE(p[0] == Catch::Approx(-1.0));
    }
    SECTION("trace and determinant recovery") {
        DenseMatrix<RealDomain> m(3, 3, RealDomain{}, {2, 1, 0, 1, 3, 1, 0, 1, 4});
        auto p = char_poly(m);
        REQUIRE(p[2] == Catch::Approx(-9.0));            // -tr
        REQUIRE(p[0] == Catch::Approx(-(2.0 * 11 - 4)));  // (-1)^3 det, det = 18
    }
    SECTION("roots match QR eigenvalues on random 4x4") {
        auto rng = make_rng(51);
        for (int rep = 0; rep < 10; ++rep) {
            auto m = rand_real_dense(rng, 4, 4);
            auto p = char_poly(m);
            auto roots = tutil::durand_kerner(p);
            auto eig = eigenvalues(m);
            REQUIRE(match_roots(roots, eig) <= 1e-7);
        }
    }
}

TEST_CASE("dense eigenvalues", "[analysis]") {
    SECTION("diagonal anchor") {
        DenseMatrix<RealDomain> m(2, 2, RealDomain{}, {3, 0, 0, -5});
        auto e = eigenvalues(m);
        REQUIRE(match_roots(e, {{3.0, 0.0}, {-5.0, 0.0}}) < 1e-12);
    }
    SECTION("rotation gives a conjugate pair") {
        DenseMatrix<RealDomain> m(2, 2, RealDomain{}, {0, -1, 1, 0});
        auto e = eigenvalues(m);
        REQUIRE(match_roots(e, {{0.0, 1.0}, {0.0, -1.0}}) < 1e-12);
    }
    SECTION("random 6x6 satisfies its own characteristic polynomial roots") {
        auto rng = make_rng(52);
        auto m = rand_real_dense(rng, 6, 6);
        auto e = eigenvalues(m);
        REQUIRE(e.size() == 6);
        auto roots = tutil::durand_kerner(char_poly(m));
        REQUIRE(match_roots(roots, e) <= 1e-6);
    }
}

TEST_CASE("t_eigen", "[analysis]") {
    SECTION("identity has eigenvalue one with multiplicity ns") {
        auto r = t_eigen(identity_t(2, 2));
        REQUIRE(r.eigenvalues.size() == 4);
        for (const auto& l : r.eigenvalues) {
            REQUIRE(l.real() == Catch::Approx(1.0));
            REQUIRE(std::abs(l.imag()) < 1e-12);
        }
        REQUIRE(r.charpoly.size() == 5);
        REQUIRE(r.charpoly[4] == 1.0);
        for (const auto& v : r.eigenvectors) REQUIRE(v.has_value());
        for (double res : r.residuals) REQUIRE(res <= 1e-10);
    }
    SECTION("zero cubic has all zero eigenvalues") {
        CubicMatrix<RealDomain> z(Dims{2, 2, 2}, RealDomain{});
        auto r = t_eigen(z);
        for (const auto& l : r.eigenvalues) REQUIRE(std::abs(l) < 1e-12);
    }
    SECTION("random 2x2x2 against the root-solver oracle") {
        auto rng = make_rng(53);
        for (int rep = 0; rep < 10; ++rep) {
            auto a = rand_real_cubic(rng, 2, 2, 2);
            auto r = t_eigen(a);
            auto roots = tutil::durand_kerner(char_poly(gamma(a)));
            REQUIRE(match_roots(roots, r.eigenvalues) <= 1e-7);
            // enforced postcondition
            double gn = tutil::dense_fro(gamma(a));
            for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
                if (r.eigenvectors[i]) REQUIRE(r.residuals[i] <= 1e-8 * gn);
        }
    }
    SECTION("eigenvector refold shape") {
        auto rng = make_rng(54);
        auto a = rand_real_cubic(rng, 3, 3, 2);
        auto sym = add(a, transpose(a));  // real spectrum
        auto r = t_eigen(sym);
        bool any = false;
        for (const auto& v : r.eigenvectors)
            if (v) {
                REQUIRE(v->dims() == Dims{3, 1, 2});
                any = true;
            }
        REQUIRE(any);
    }
    SECTION("non-square slices rejected") {
        auto rng = make_rng(55);
        auto a = rand_real_cubic(rng, 2, 3, 2);
        REQUIRE_THROWS_AS(t_eigen(a), ShapeError);
    }
}

TEST_CASE("cayley-hamilton residual", "[analysis]") {
    REQUIRE(cayley_hamilton_residual(identity_t(2, 2)) <= 1e-12);
    CubicMatrix<RealDomain> z(Dims{2, 2, 2}, RealDomain{});
    REQUIRE(cayley_hamilton_residual(z) == 0.0);
    auto rng = make_rng(56);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        auto a = rand_unit_ball(rng, 2, 2, 1.0);
        worst = std::max(worst, cayley_hamilton_residual(a));
    }
    REQUIRE(worst <= 1e-8);
}

TEST_CASE("analytic_eval basics", "[analysis]") {
    auto rng = make_rng(57);
    SECTION("exp of zero is the unit of each kind") {
        CubicMatrix<RealDomain> z(Dims{2, 2, 3}, RealDomain{});
        REQUIRE(analytic_eval(named_series("exp"), z, ProductKind::TProduct) ==
                identity_t(2, 3));
        REQUIRE(analytic_eval(named_series("exp"), z, ProductKind::TStp) == identity_t(2, 3));
        REQUIRE(analytic_eval(named_series("exp"), z, ProductKind::DkStp) ==
                ones_stack(2, 2, 3, RealDomain{}));
    }
    SECTION("nonzero constant needs square slices") {
        CubicMatrix<RealDomain> z(Dims{2, 3, 2}, RealDomain{});
        REQUIRE_THROWS_AS(analytic_eval(named_series("exp"), z, ProductKind::TStp),
                          UnsupportedError);
        // zero-constant series are fine on rectangular shapes
        REQUIRE(is_zero(analytic_eval(named_series("sin"), z, ProductKind::TStp)));
    }
    SECTION("radius violation") {
        auto a = scale(2.0, identity_t(2, 2));  // norm 2*sqrt(2) > 1
        REQUIRE_THROWS_AS(analytic_eval(named_series("log1p"), a, ProductKind::TProduct),
                          DomainError);
    }
    SECTION("cap truncation of a genuine tail raises") {
        auto a = scale(3.0, identity_t(2, 2));
        TruncationPolicy tight;
        tight.max_terms = 4;
        REQUIRE_THROWS_AS(analytic_eval(named_series("exp"), a, ProductKind::TProduct, tight),
                          ConvergenceError);
    }
    SECTION("terminating polynomial succeeds under any cap") {
        auto a = rand_unit_ball(rng, 2, 2, 0.5);
        TruncationPolicy tight;
        tight.max_terms = 8;
        auto r = analytic_eval(named_series("binomial", 1.0), a, ProductKind::TProduct, tight);
        REQUIRE(max_abs_diff(r, add(identity_t(2, 2), a)) < 1e-14);
    }
}

TEST_CASE("gamma naturality of series", "[analysis]") {
    auto rng = make_rng(58);
    SECTION("exp, sin, cos against the dense oracle") {
        for (int rep = 0; rep < 10; ++rep) {
            auto a = rand_unit_ball(rng, 2, 2, 1.0);
            auto g = gamma(a);
            for (const char* name : {"exp", "sin", "cos", "sinh", "cosh"}) {
                auto lhs = gamma(analytic_eval(named_series(name), a, ProductKind::TProduct));
                auto rhs = dense_func_oracle(name, g);
                REQUIRE(tutil::dense_max_abs_diff(lhs, rhs) <=
                        1e-9 * std::max(1.0, tutil::dense_fro(rhs)));
            }
        }
    }
    SECTION("log1p inside the radius") {
        auto a = rand_unit_ball(rng, 2, 2, 0.4);
        auto lhs = gamma(analytic_eval(named_series("log1p"), a, ProductKind::TProduct));
        auto rhs = dense_func_oracle("log1p", gamma(a), 400);
        REQUIRE(tutil::dense_max_abs_diff(lhs, rhs) <=
                1e-9 * std::max(1.0, tutil::dense_fro(rhs)));
    }
    SECTION("pythagorean identity") {
        for (int rep = 0; rep < 10; ++rep) {
            auto a = rand_unit_ball(rng, 2, 2, 1.0);
            auto s = analytic_eval(named_series("sin"), a, ProductKind::TProduct);
            auto c = analytic_eval(named_series("cos"), a, ProductKind::TProduct);
            auto sum = add(t_product(c, c), t_product(s, s));
            REQUIRE(max_abs_diff(sum, identity_t(2, 2)) <= 1e-8);
        }
    }
    SECTION("exponential group law") {
        for (int rep = 0; rep < 10; ++rep) {
            auto a = rand_unit_ball(rng, 2, 2, 1.0);
            auto e1 = analytic_eval(named_series("exp"), a, ProductKind::TProduct);
            auto e2 = analytic_eval(named_series("exp"), neg(a), ProductKind::TProduct);
            REQUIRE(max_abs_diff(t_product(e1, e2), identity_t(2, 2)) <= 1e-8);
        }
    }
    SECTION("effort monotonicity on a fixed corpus") {
        // Tightening atol can only lower the naturality residual; caps at or
        // beyond the stopping point leave the partial sum unchanged.
        auto rng2 = make_rng(59);
        for (int rep = 0; rep < 5; ++rep) {
            auto a = rand_unit_ball(rng2, 2, 2, 2.0);
            auto g = gamma(a);
            auto oracle = dense_func_oracle("exp", g);
            double prev = std::numeric_limits<double>::infinity();
            for (double atol : {1e-4, 1e-8, 1e-12}) {
                TruncationPolicy pol;
                pol.atol = atol;
                auto r = gamma(analytic_eval(named_series("exp"), a, ProductKind::TProduct, pol));
                double resid = tutil::dense_max_abs_diff(r, oracle);
                REQUIRE(resid <= prev * (1.0 + 1e-9) + 1e-15);
                prev = resid;
            }
            TruncationPolicy big;
            big.max_terms = 192;
            auto r128 = analytic_eval(named_series("exp"), a, ProductKind::TProduct);
            auto r192 = analytic_eval(named_series("exp"), a, ProductKind::TProduct, big);
            REQUIRE(r128 == r192);
        }
    }
}

TEST_CASE("extended evaluation", "[analysis]") {
    auto rng = make_rng(60);
    SECTION("constant splits into the formal part") {
        auto a = rand_real_cubic(rng, 2, 3, 2);  // rectangular works
        auto r = analytic_eval_extended(named_series("exp"), a, ProductKind::TStp);
        REQUIRE(r.r == 1.0);
        auto tail = named_series("exp");
        tail.constant = 0.0;
        REQUIRE(r.a0 == analytic_eval(tail, a, ProductKind::TStp));
    }
    SECTION("materialized square case agrees with direct evaluation") {
        auto a = rand_unit_ball(rng, 2, 2, 1.0);
        auto ext = analytic_eval_extended(named_series("exp"), a, ProductKind::TStp);
        auto direct = analytic_eval(named_series("exp"), a, ProductKind::TStp);
        REQUIRE(max_abs_diff(extended_materialize(ext), direct) < 1e-13);
    }
}
