#pragma once

// Chebyshev angles, Lagrange fundamental functions in the angular variable,
// and the averaged Grunwald kernels
//
//   S_{k,n}(t) = ( P_k(t - pi/2n) + P_k(t + pi/2n) ) / 2,   k = 1..n.
//
// Indices k are 1-based at the API surface (matching the usual notation) and
// 0-based in storage.

#include <cstddef>
#include <span>
#include <vector>

#include "gd/constants.hpp"

namespace gd {

struct NodeSet {
    int n = 0;
    /// angles[k-1] = (2k-1) pi / (2n), strictly increasing in (0, pi).
    std::vector<double> angles;

    double operator[](int k) const { return angles[static_cast<std::size_t>(k - 1)]; }
};

enum class KernelPath { direct, series };

[[nodiscard]] NodeSet chebyshev_nodes(int n);

/// theta_k^{(n)} without building the whole node set.
[[nodiscard]] double chebyshev_angle(int n, int k);

/// cos(j * theta_k^{(n)}) with the argument reduced exactly in integer arithmetic.
[[nodiscard]] double cos_node_multiple(int n, int k, long j);

/// P_k(t) = (-1)^{k+1} cos(nt) sin(theta_k) / (n (cos t - cos theta_k)).
/// Near t = +-theta_k (mod 2 pi) the removable singularity is resolved by a
/// second-order expansion of numerator and denominator.
[[nodiscard]] double lagrange_basis_direct(int n, int k, double t);

/// P_k(t) = (1/n) [1 + 2 sum_{j=1}^{n-1} cos(j theta_k) cos(j t)].
[[nodiscard]] double lagrange_basis_series(int n, int k, double t);

[[nodiscard]] double lagrange_basis(int n, int k, double t, KernelPath path = KernelPath::series);

/// S_{k,n}(t). The shifted arguments are evaluated on the real line as written.
[[nodiscard]] double kernel_eval(int n, int k, double t, KernelPath path = KernelPath::series);

/// One kernel S_{k,n} through the collapsed series
/// S_{k,n}(t) = (1/n)[1 + 2 sum_j cos(j theta_k) cos(j pi/2n) cos(j t)],
/// with the coefficients computed once.
class KernelFunction {
public:
    KernelFunction(int n, int k);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double operator()(double t) const;
    std::vector<double> values(std::span<const double> t) const;

private:
    int n_;
    int k_;
    std::vector<double> coeff_;
};

[[nodiscard]] std::vector<double> kernel_values(int n, int k, std::span<const double> t);

/// Upper bound pi^3 / (4 n^2) / (theta - theta_k - pi/(2n))^2 on |S_{k,n}(theta)|,
/// meaningful once |theta - theta_k| > pi/(2n).
[[nodiscard]] double kernel_tail_bound(int n, int k, double theta);

/// Values S_{k,n}(grid[j]) for all k, row-major (one row per k).
class KernelTable {
public:
    KernelTable(int n, std::vector<double> grid, std::vector<double> values);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const std::vector<double>& grid() const noexcept { return grid_; }

    /// 1-based k.
    double operator()(int k, std::size_t j) const {
        return values_[static_cast<std::size_t>(k - 1) * grid_.size() + j];
    }
    std::span<const double> row(int k) const {
        return {values_.data() + static_cast<std::size_t>(k - 1) * grid_.size(), grid_.size()};
    }

    double column_sum(std::size_t j) const;
    double column_abs_sum(std::size_t j) const;

    /// max_j |sum_k S_{k,n}(grid[j]) - 1|
    double max_partition_defect() const;

private:
    int n_;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Tabulates S_{k,n} on a nonempty sorted grid; the series path uses the
/// collapsed form of kernel_values.
[[nodiscard]] KernelTable kernel_table(int n, std::span<const double> grid,
                                       KernelPath path = KernelPath::series);

}  // namespace gd
