#include <cmath>
#include <random>

#include "doctest.h"
#include "gd/errors.hpp"
#include "gd/kernel.hpp"
#include "gd/quadrature.hpp"

using namespace gd;
using doctest::Approx;

TEST_CASE("chebyshev nodes") {
    CHECK(chebyshev_nodes(1).angles == std::vector<double>{pi / 2});
    const auto n2 = chebyshev_nodes(2);
    CHECK(n2[1] == Approx(pi / 4).epsilon(1e-15));
    CHECK(n2[2] == Approx(3 * pi / 4).epsilon(1e-15));
    const auto n4 = chebyshev_nodes(4);
    for (int k = 1; k <= 4; ++k) CHECK(n4[k] == Approx((2 * k - 1) * pi / 8).epsilon(1e-15));
    CHECK_THROWS_AS((void)chebyshev_nodes(0), DomainError);
    CHECK_THROWS_AS((void)chebyshev_angle(4, 5), DomainError);

    for (int n : {3, 17, 64}) {
        const auto nodes = chebyshev_nodes(n);
        CHECK(nodes[1] == Approx(pi / (2 * n)));
        CHECK(nodes[n] == Approx(pi - pi / (2 * n)));
        for (int k = 1; k <= n; ++k) {
            CHECK(nodes[k] + nodes[n + 1 - k] == Approx(pi).epsilon(1e-15));
            if (k > 1) CHECK(nodes[k] > nodes[k - 1]);
        }
    }
}

TEST_CASE("cos_node_multiple reduces exactly") {
    for (int n : {1, 5, 16})
        for (int k = 1; k <= n; ++k)
            for (long j : {0L, 1L, 3L, 7L, 4L * n + 1, -5L})
                CHECK(cos_node_multiple(n, k, j) == Approx(std::cos(j * chebyshev_angle(n, k))).epsilon(1e-12));
}

TEST_CASE("lagrange_basis_direct examples") {
    CHECK(lagrange_basis_direct(1, 1, 0.7) == Approx(1.0).epsilon(1e-15));
    CHECK(lagrange_basis_direct(4, 2, chebyshev_angle(4, 2)) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lagrange_basis_direct(4, 2, chebyshev_angle(4, 3))) < 1e-15);
}

TEST_CASE("direct basis at a node matches Richardson extrapolation of nearby values") {
    const int n = 4, k = 2;
    const double tk = chebyshev_angle(n, k);
    // P(tk + h) = P(tk) + a h + b h^2 ...; symmetric average cancels odd terms.
    auto avg = [&](double h) { return 0.5 * (lagrange_basis_direct(n, k, tk + h) + lagrange_basis_direct(n, k, tk - h)); };
    const double h = 1e-3;
    const double extrapolated = (4 * avg(h / 2) - avg(h)) / 3;
    CHECK(extrapolated == Approx(1.0).epsilon(1e-10));
    CHECK(lagrange_basis_direct(n, k, tk + 1e-9) == Approx(1.0).epsilon(1e-8));
    CHECK(lagrange_basis_direct(n, k, tk - 1e-9) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lagrange_basis_series examples") {
    for (double t : {-2.0, 0.0, 0.3, 5.0}) CHECK(lagrange_basis_series(1, 1, t) == 1.0);
    CHECK(lagrange_basis_series(4, 2, chebyshev_angle(4, 2)) == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(lagrange_basis_series(8, 5, 1.0) - lagrange_basis_direct(8, 5, 1.0)) < 1e-10);
}

TEST_CASE("cardinality for n <= 64") {
    double worst = 0.0;
    for (int n = 1; n <= 64; ++n)
        for (int k = 1; k <= n; ++k)
            for (int j = 1; j <= n; ++j) {
                const double target = j == k ? 1.0 : 0.0;
                const double tj = chebyshev_angle(n, j);
                worst = std::max(worst, std::abs(lagrange_basis_series(n, k, tj) - target));
                worst = std::max(worst, std::abs(lagrange_basis_direct(n, k, tj) - target));
            }
    CHECK(worst < 1e-9);
}

TEST_CASE("dual path inside the singularity guard") {
    double worst = 0.0;
    for (int n : {2, 7, 32, 128})
        for (int k = 1; k <= n; ++k)
            for (double off : {0.0, 1e-12, -1e-12, 1e-10, -3e-9})
                worst = std::max(worst, std::abs(lagrange_basis_direct(n, k, chebyshev_angle(n, k) + off) -
                                                 lagrange_basis_series(n, k, chebyshev_angle(n, k) + off)));
    CHECK(worst < 1e-7);
}

TEST_CASE("basis is even and 2 pi periodic") {
    for (double t : {0.2, 1.3, 2.9}) {
        CHECK(lagrange_basis_direct(9, 4, -t) == Approx(lagrange_basis_direct(9, 4, t)).epsilon(1e-12));
        CHECK(lagrange_basis_direct(9, 4, t + 2 * pi) == Approx(lagrange_basis_direct(9, 4, t)).epsilon(1e-10));
        CHECK(lagrange_basis_series(9, 4, -t) == Approx(lagrange_basis_series(9, 4, t)).epsilon(1e-12));
    }
}

TEST_CASE("kernel_eval examples") {
    CHECK(kernel_eval(1, 1, 0.3) == 1.0);
    CHECK(kernel_eval(1, 1, 0.3, KernelPath::direct) == Approx(1.0).epsilon(1e-15));
    const double t = chebyshev_angle(2, 1);
    for (auto path : {KernelPath::direct, KernelPath::series})
        CHECK(kernel_eval(2, 1, t, path) == Approx(1.0 - kernel_eval(2, 2, t, path)).epsilon(1e-12));
    // brute force from the two formulas
    const double v_direct = 0.5 * (lagrange_basis_direct(2, 1, t - pi / 4) + lagrange_basis_direct(2, 1, t + pi / 4));
    CHECK(kernel_eval(2, 1, t) == Approx(v_direct).epsilon(1e-12));

    const double bound = pi * pi * pi / (4.0 * 256.0) / std::pow(2.9 - chebyshev_angle(16, 3) - pi / 32, 2);
    CHECK(std::abs(kernel_eval(16, 3, 2.9)) <= bound);
    CHECK(kernel_tail_bound(16, 3, 2.9) == Approx(bound));
}

TEST_CASE("kernel symmetry and collapsed form") {
    for (int n : {3, 8, 21})
        for (int k = 1; k <= n; ++k)
            for (double t : {0.0, 0.4, 1.7, pi}) {
                CHECK(std::abs(kernel_eval(n, k, t) - kernel_eval(n, n + 1 - k, pi - t)) < 1e-10);
                CHECK(std::abs(kernel_eval(n, k, t) - KernelFunction(n, k)(t)) < 1e-12);
                CHECK(std::abs(kernel_eval(n, k, t, KernelPath::direct) - kernel_eval(n, k, t)) < 1e-9);
            }
}

TEST_CASE("tail decay") {
    const double delta = 0.5;
    for (int n : {8, 16, 64, 128}) {
        REQUIRE(2 * n * delta > pi);
        for (int k = 1; k <= n; ++k) {
            const double tk = chebyshev_angle(n, k);
            for (double t : uniform_grid(401)) {
                if (std::abs(t - tk) <= delta) continue;
                CHECK(std::abs(kernel_eval(n, k, t)) <=
                      pi * pi * pi / (4.0 * n * n) / std::pow(delta - pi / (2 * n), 2));
            }
        }
    }
}

TEST_CASE("kernel_table") {
    const std::vector<double> g3{0.0, pi / 2, pi};
    const auto t1 = kernel_table(1, g3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(t1(1, j) == 1.0);
    CHECK(kernel_table(4, uniform_grid(11)).max_partition_defect() < 1e-10);
    CHECK(kernel_table(4, uniform_grid(11), KernelPath::direct).max_partition_defect() < 1e-10);
    CHECK(kernel_table(32, uniform_grid(501)).max_partition_defect() < 1e-9);
    CHECK_THROWS_AS((void)kernel_table(4, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS((void)kernel_table(4, std::vector<double>{1.0, 0.5}), DomainError);

    const auto grid = uniform_grid(37);
    const auto a = kernel_table(13, grid);
    const auto b = kernel_table(13, grid, KernelPath::direct);
    for (int k = 1; k <= 13; ++k)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            CHECK(std::isfinite(a(k, j)));
            CHECK(std::abs(a(k, j) - b(k, j)) < 1e-9);
            CHECK(std::abs(a(k, j) - kernel_eval(13, k, grid[j])) < 1e-12);
        }
}

TEST_CASE("partition of unity for n <= 256 on 1001 points") {
    const auto grid = uniform_grid(1001);
    double worst = 0.0;
    for (int n = 1; n <= 256; n += (n < 32 ? 1 : 7)) worst = std::max(worst, kernel_table(n, grid).max_partition_defect());
    worst = std::max(worst, kernel_table(256, grid).max_partition_defect());
    CHECK(worst < 1e-9);
}
