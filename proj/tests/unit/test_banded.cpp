#include "hjb/banded.hpp"
#include "hjb/errors.hpp"

#include "support.hpp"

#include <doctest.h>

#include <array>
#include <random>

using namespace hjb;
using testing::tridiag;

TEST_CASE("validate_m_matrix accepts identity and dominant tridiagonals") {
    CHECK(validate_m_matrix(BandedMatrix::identity(3)).ok());
    CHECK(validate_m_matrix(tridiag({-1.0}, {2.0, 2.0}, {-1.0})).ok());
}

TEST_CASE("validate_m_matrix reports the first offending row") {
    SUBCASE("all row sums zero") {
        const auto r = validate_m_matrix(tridiag({-1.0}, {1.0, 1.0}, {-1.0}));
        CHECK(r.violation == MMatrixViolation::no_positive_row_sum);
        CHECK(r.message() == "no positive row sum");
    }
    SUBCASE("non-positive diagonal") {
        const auto r = validate_m_matrix(tridiag({0.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 0.0}));
        CHECK(r.violation == MMatrixViolation::nonpositive_diagonal);
        CHECK(r.row == 1);
    }
    SUBCASE("positive off-diagonal") {
        const auto r = validate_m_matrix(tridiag({0.5}, {2.0, 2.0}, {-1.0}));
        CHECK(r.violation == MMatrixViolation::positive_off_diagonal);
        CHECK(r.row == 1);
    }
    SUBCASE("negative row sum") {
        const auto r = validate_m_matrix(tridiag({-1.0}, {2.0, 0.5}, {-1.0}));
        CHECK(r.violation == MMatrixViolation::negative_row_sum);
        CHECK(r.row == 1);
    }
}

TEST_CASE("certification is dropped by mutable access") {
    auto m = BandedMatrix::identity(2);
    CHECK(m.m_matrix_checked());
    m.diag()[0] = 3.0;
    CHECK_FALSE(m.m_matrix_checked());
    CHECK(m.certify().ok());
    CHECK(m.m_matrix_checked());

    auto bad = tridiag({-1.0}, {1.0, 1.0}, {-1.0});
    CHECK_THROWS_AS(require_m_matrix(bad, "test"), MMatrixError);
    CHECK_FALSE(bad.m_matrix_checked());
}

TEST_CASE("band lengths must match") {
    CHECK_THROWS_AS(BandedMatrix({-1.0, -1.0}, {2.0, 2.0}, {-1.0}), DimensionError);
    CHECK_THROWS_AS(BandedMatrix(0), DimensionError);
}

TEST_CASE("entry access and products") {
    const auto m = tridiag({-1.0, -3.0}, {2.0, 4.0, 5.0}, {-0.5, -2.0});
    CHECK(m(1, 0) == -1.0);
    CHECK(m(1, 2) == -2.0);
    CHECK(m(0, 2) == 0.0);
    CHECK(m.row_sum(1) == doctest::Approx(1.0));
    const Vector x{1.0, 2.0, 3.0};
    const Vector y = m.multiply(x);
    CHECK(y == Vector{1.0, 1.0, 9.0});
    CHECK(m.apply_row(2, x) == 9.0);
    CHECK(m.negated()(1, 1) == -4.0);
}

TEST_CASE("solve: examples") {
    CHECK(solve(BandedMatrix::identity(2), Vector{5.0, -3.0}) == Vector{5.0, -3.0});

    const Vector x = solve(tridiag({-1.0}, {2.0, 2.0}, {-1.0}), Vector{1.0, 1.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(solve(tridiag({0.0}, {0.0, 1.0}, {0.0}), Vector{1.0, 1.0}), SingularPivotError);
    CHECK_THROWS_AS(solve(BandedMatrix::identity(2), Vector{1.0}), DimensionError);
}

TEST_CASE("solve: singular pivot produced by elimination") {
    // Second pivot is 1 - 1*1/1 = 0.
    try {
        solve(tridiag({-1.0}, {1.0, 1.0}, {-1.0}), Vector{1.0, 1.0});
        FAIL("expected SingularPivotError");
    } catch (const SingularPivotError& e) {
        CHECK(e.row() == 1);
    }
}

TEST_CASE("row_splice: examples") {
    const auto id = BandedMatrix::identity(2);
    const std::array<RowSource, 2> both_id{RowSource{&id, 0}, RowSource{&id, 1}};
    CHECK(row_splice(both_id) == id);

    const auto a = tridiag({-1.0}, {2.0, 2.0}, {-1.0});
    const std::array<RowSource, 2> mixed{RowSource{&a, 0}, RowSource{&id, 1}};
    const auto s = row_splice(mixed);
    CHECK(s(0, 0) == 2.0);
    CHECK(s(0, 1) == -1.0);
    CHECK(s(1, 0) == 0.0);
    CHECK(s(1, 1) == 1.0);
    CHECK(s.m_matrix_checked());

    const std::array<RowSource, 1> missing{RowSource{&id, 0}};
    CHECK_THROWS_AS(row_splice(missing), DimensionError);
    const std::array<RowSource, 2> duplicate{RowSource{&id, 0}, RowSource{&a, 0}};
    CHECK_THROWS_AS(row_splice(duplicate), DimensionError);

    const auto big = BandedMatrix::identity(3);
    const std::array<RowSource, 2> sizes{RowSource{&id, 0}, RowSource{&big, 1}};
    CHECK_THROWS_AS(row_splice(sizes), DimensionError);
}

TEST_CASE("row_splice by choice vector") {
    const std::array<BandedMatrix, 2> family{tridiag({-1.0, -1.0}, {2.0, 2.0, 2.0}, {-1.0, -1.0}),
                                             BandedMatrix::identity(3)};
    const std::array<std::size_t, 3> choice{1, 0, 1};
    const auto s = row_splice(family, choice);
    CHECK(s(0, 1) == 0.0);
    CHECK(s(1, 0) == -1.0);
    CHECK(s(1, 1) == 2.0);
    CHECK(s(2, 1) == 0.0);
    const std::array<std::size_t, 3> bad{0, 2, 0};
    CHECK_THROWS_AS(row_splice(family, bad), DimensionError);
}

TEST_CASE("inf_norm") {
    CHECK(inf_norm(Vector{1.0, -4.0, 2.0}) == 4.0);
    CHECK(inf_norm(Vector{}) == 0.0);
}

// --- properties ---

TEST_CASE("property: M-matrices have a non-negative inverse") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> size(1, 40);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(rng);
        const auto m = testing::random_m_matrix(rng, n, trial % 2 == 1);
        REQUIRE(validate_m_matrix(m).ok());
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n, 0.0);
            e[i] = 1.0;
            const Vector col = solve(m, e);
            for (const double v : col) REQUIRE(v >= -1e-12);
        }
    }
}

TEST_CASE("property: solve residual on 1000 random M-matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> size(1, 500);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = size(rng);
        const auto m = testing::random_m_matrix(rng, n, trial % 3 == 0);
        Vector rhs(n);
        for (auto& v : rhs) v = value(rng);
        const Vector x = solve(m, rhs);
        const Vector mx = m.multiply(x);
        const double bound = 1e-12 * std::max(1.0, inf_norm(rhs));
        REQUIRE(testing::max_abs_diff(mx, rhs) <= bound);
    }
}

TEST_CASE("property: splices of co-located M-matrices validate") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> size(1, 30);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = size(rng);
        std::vector<BandedMatrix> family;
        for (int s = 0; s < 3; ++s) family.push_back(testing::random_m_matrix(rng, n));
        std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
        std::vector<std::size_t> choice(n);
        for (auto& c : choice) c = pick(rng);
        const auto s = row_splice(family, choice);
        REQUIRE(validate_m_matrix(s).ok());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = (i == 0 ? 0 : i - 1); j < std::min(n, i + 2); ++j)
                REQUIRE(s(i, j) == family[choice[i]](i, j));
    }
}
