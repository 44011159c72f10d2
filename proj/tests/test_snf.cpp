#include <catch2/catch_amalgamated.hpp>

#include "support/test_util.hpp"

using namespace tcube;
using tutil::make_rng;
using Mat = std::vector<std::vector<long long>>;

namespace {

// Integer determinant by fraction-free Bareiss elimination in __int128.
__int128 int_det(const Mat& a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<__int128>> w(a.size());
    for (int i = 0; i < n; ++i) w[i].assign(a[i].begin(), a[i].end());
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (w[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(w[k], w[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) / prev;
            w[i][k] = 0;
        }
        prev = w[k][k];
    }
    return n == 0 ? 1 : sign * w[n - 1][n - 1];
}

Mat mat_mul(const Mat& a, const Mat& b) {
    const int r = static_cast<int>(a.size());
    const int inner = static_cast<int>(b.size());
    const int c = inner > 0 ? static_cast<int>(b[0].size()) : 0;
    Mat out(r, std::vector<long long>(c, 0));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < c; ++j) {
                __int128 acc = static_cast<__int128>(out[i][j]) +
                               static_cast<__int128>(a[i][k]) * b[k][j];
                out[i][j] = static_cast<long long>(acc);
            }
        }
    return out;
}

Mat rand_mat(std::mt19937_64& rng, int r, int c, long long lo, long long hi) {
    std::uniform_int_distribution<long long> dist(lo, hi);
    Mat out(r, std::vector<long long>(c));
    for (auto& row : out)
        for (auto& x : row) x = dist(rng);
    return out;
}

void check_smith(const Mat& a) {
    auto s = smith_normal_form(a);
    const int r = s.rows, c = s.cols;
    REQUIRE(r == static_cast<int>(a.size()));

    // exact factorization u * a * v = d
    REQUIRE(mat_mul(mat_mul(s.u, a), s.v) == s.d);

    // unimodular transforms
    if (r > 0) {
        auto du = int_det(s.u);
        REQUIRE((du == 1 || du == -1));
    }
    if (c > 0) {
        auto dv = int_det(s.v);
        REQUIRE((dv == 1 || dv == -1));
    }

    // diagonal, nonnegative, divisibility chain, rank profile
    int nonzero = 0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            if (i != j) REQUIRE(s.d[i][j] == 0);
        }
    for (int i = 0; i < std::min(r, c); ++i) {
        REQUIRE(s.d[i][i] >= 0);
        if (s.d[i][i] != 0) {
            ++nonzero;
            REQUIRE(nonzero == i + 1);  // zeros only after the last nonzero
        }
    }
    for (int i = 0; i + 1 < s.rank; ++i) REQUIRE(s.d[i + 1][i + 1] % s.d[i][i] == 0);
    REQUIRE(s.rank == nonzero);
}

}  // namespace

TEST_CASE("smith_normal_form anchors", "[snf]") {
    SECTION("identity") {
        Mat a{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        auto s = smith_normal_form(a);
        REQUIRE(s.rank == 3);
        REQUIRE(s.d == a);
    }
    SECTION("zero") {
        Mat a{{0, 0}, {0, 0}};
        auto s = smith_normal_form(a);
        REQUIRE(s.rank == 0);
        check_smith(a);
    }
    SECTION("diag(4,6) normalizes to diag(2,12)") {
        Mat a{{4, 0}, {0, 6}};
        auto s = smith_normal_form(a);
        REQUIRE(s.d[0][0] == 2);
        REQUIRE(s.d[1][1] == 12);
        check_smith(a);
    }
    SECTION("coprime row collapses to gcd") {
        Mat a{{6, 10, 15}};
        auto s = smith_normal_form(a);
        REQUIRE(s.rank == 1);
        REQUIRE(s.d[0][0] == 1);
        check_smith(a);
    }
    SECTION("classic 2x2") {
        Mat a{{2, 4}, {6, 8}};
        // det -8, gcd 2 -> invariants 2, 4
        auto s = smith_normal_form(a);
        REQUIRE(s.d[0][0] == 2);
        REQUIRE(s.d[1][1] == 4);
        check_smith(a);
    }
    SECTION("ragged input rejected") {
        Mat a{{1, 2}, {3}};
        REQUIRE_THROWS_AS(smith_normal_form(a), ShapeError);
    }
    SECTION("empty") {
        auto s = smith_normal_form(Mat{});
        REQUIRE(s.rank == 0);
        REQUIRE(s.rows == 0);
    }
}

TEST_CASE("smith_normal_form random property suite", "[snf]") {
    auto rng = make_rng(90);
    for (int rep = 0; rep < 60; ++rep) {
        int r = 1 + static_cast<int>(rng() % 5);
        int c = 1 + static_cast<int>(rng() % 7);
        auto a = rand_mat(rng, r, c, -20, 20);
        CAPTURE(rep, r, c);
        check_smith(a);
    }
    // low-rank inputs: products of thin factors
    for (int rep = 0; rep < 20; ++rep) {
        auto u = rand_mat(rng, 4, 2, -6, 6);
        auto v = rand_mat(rng, 2, 5, -6, 6);
        auto a = mat_mul(u, v);
        CAPTURE(rep);
        auto s = smith_normal_form(a);
        REQUIRE(s.rank <= 2);
        check_smith(a);
    }
}

TEST_CASE("solve_mod_linear", "[snf]") {
    ModDomain dom{12};
    auto rng = make_rng(91);
    SECTION("identity system returns the rhs") {
        auto b = tutil::rand_mod_dense(rng, 4, 2, dom);
        auto a = DenseMatrix<ModDomain>::identity(4, dom);
        auto x = solve_mod_linear(a, b);
        REQUIRE(x.has_value());
        REQUIRE(*x == b);
    }
    SECTION("constructed systems are solved, square and rectangular") {
        int solved = 0;
        for (int rep = 0; rep < 50; ++rep) {
            int r = 2 + static_cast<int>(rng() % 3);
            int c = 2 + static_cast<int>(rng() % 3);
            auto a = tutil::rand_mod_dense(rng, r, c, dom);
            auto x0 = tutil::rand_mod_dense(rng, c, 2, dom);
            auto b = tutil::naive_mul(a, x0);
            auto x = solve_mod_linear(a, b);
            CAPTURE(rep, r, c);
            REQUIRE(x.has_value());  // constructed feasible
            REQUIRE(tutil::naive_mul(a, *x) == b);
            ++solved;
        }
        REQUIRE(solved == 50);
    }
    SECTION("solutions reduce to zero residual even for singular matrices") {
        // 2I over Z12 is a zero divisor; even columns remain solvable
        auto a = scale(static_cast<std::int64_t>(2), DenseMatrix<ModDomain>::identity(3, dom));
        DenseMatrix<ModDomain> b(3, 1, dom, {4, 6, 10});
        auto x = solve_mod_linear(a, b);
        REQUIRE(x.has_value());
        REQUIRE(tutil::naive_mul(a, *x) == b);
    }
    SECTION("infeasible parity is reported") {
        auto a = scale(static_cast<std::int64_t>(2), DenseMatrix<ModDomain>::identity(2, dom));
        DenseMatrix<ModDomain> b(2, 1, dom, {1, 0});  // 2x = 1 (mod 12) has no solution
        REQUIRE_FALSE(solve_mod_linear(a, b).has_value());
    }
    SECTION("zero matrix") {
        DenseMatrix<ModDomain> a(3, 3, dom);
        DenseMatrix<ModDomain> z(3, 1, dom);
        auto x = solve_mod_linear(a, z);
        REQUIRE(x.has_value());
        REQUIRE(is_zero(*x));
        DenseMatrix<ModDomain> b(3, 1, dom, {0, 5, 0});
        REQUIRE_FALSE(solve_mod_linear(a, b).has_value());
    }
    SECTION("underdetermined wide system") {
        for (int rep = 0; rep < 10; ++rep) {
            auto a = tutil::rand_mod_dense(rng, 2, 5, dom);
            auto x0 = tutil::rand_mod_dense(rng, 5, 1, dom);
            auto b = tutil::naive_mul(a, x0);
            auto x = solve_mod_linear(a, b);
            REQUIRE(x.has_value());
            REQUIRE(tutil::naive_mul(a, *x) == b);
        }
    }
    SECTION("shape and domain guards") {
        auto a = tutil::rand_mod_dense(rng, 3, 3, dom);
        auto b = tutil::rand_mod_dense(rng, 4, 1, dom);
        REQUIRE_THROWS_AS(solve_mod_linear(a, b), ShapeError);
        auto b7 = tutil::rand_mod_dense(rng, 3, 1, ModDomain{7});
        REQUIRE_THROWS_AS(solve_mod_linear(a, b7), DomainError);
    }
    SECTION("other moduli") {
        ModDomain d30{30};
        for (int rep = 0; rep < 10; ++rep) {
            auto a = tutil::rand_mod_dense(rng, 3, 3, d30);
            auto x0 = tutil::rand_mod_dense(rng, 3, 1, d30);
            auto b = tutil::naive_mul(a, x0);
            auto x = solve_mod_linear(a, b);
            REQUIRE(x.has_value());
            REQUIRE(tutil::naive_mul(a, *x) == b);
        }
    }
}
