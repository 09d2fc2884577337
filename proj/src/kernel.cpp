#include "gd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gd/errors.hpp"

namespace gd {

namespace {

constexpr double singularity_threshold = 1e-8;

void check_index(int n, int k) {
    if (n < 1) throw DomainError("operator degree n must be >= 1, got " + std::to_string(n));
    if (k < 1 || k > n)
        throw DomainError("node index k=" + std::to_string(k) + " outside 1.." + std::to_string(n));
}

// Reduces t to [0, pi] using evenness and 2 pi periodicity of P_k.
double fold_angle(double t) { return std::abs(std::remainder(t, 2.0 * pi)); }

// sum_{j=1}^{m-1} cos(j x), with cos(j x) generated by rotation so the
// error grows linearly in j.
double cosine_sum(int m, double x) {
    const double c1 = std::cos(x);
    const double s1 = std::sin(x);
    double c = c1;
    double s = s1;
    double acc = 0.0;
    for (int j = 1; j < m; ++j) {
        acc += c;
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
    return acc;
}

}  // namespace

NodeSet chebyshev_nodes(int n) {
    if (n < 1) throw DomainError("chebyshev_nodes: n must be >= 1, got " + std::to_string(n));
    NodeSet nodes;
    nodes.n = n;
    nodes.angles.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) nodes.angles[static_cast<std::size_t>(k - 1)] = chebyshev_angle(n, k);
    return nodes;
}

double chebyshev_angle(int n, int k) {
    check_index(n, k);
    return static_cast<double>(2 * k - 1) * pi / (2.0 * static_cast<double>(n));
}

double cos_node_multiple(int n, int k, long j) {
    // j (2k-1) pi / (2n), reduced modulo 2 pi = 4n * pi/(2n)
    const long period = 4L * n;
    long m = (j % period) * (2L * k - 1) % period;
    if (m < 0) m += period;
    if (m > 2L * n) m = period - m;  // cos is even about pi
    return std::cos(static_cast<double>(m) * pi / (2.0 * static_cast<double>(n)));
}

double lagrange_basis_direct(int n, int k, double t) {
    check_index(n, k);
    const double theta_k = chebyshev_angle(n, k);
    const double r = fold_angle(t);
    const double sin_k = std::sin(theta_k);
    const double cos_k = std::cos(theta_k);
    const double denom = std::cos(r) - cos_k;

    if (std::abs(denom) < singularity_threshold * std::max(1.0, std::abs(sin_k))) {
        // cos(n r) ~ -sin(n theta_k) n u and cos r - cos theta_k ~ -sin theta_k u - cos theta_k u^2/2
        // with u = r - theta_k; the sign factors cancel against (-1)^{k+1}.
        const double u = r - theta_k;
        return sin_k / (sin_k + 0.5 * cos_k * u);
    }
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * std::cos(static_cast<double>(n) * r) * sin_k / (static_cast<double>(n) * denom);
}

double lagrange_basis_series(int n, int k, double t) {
    check_index(n, k);
    // 2 cos(j theta_k) cos(j t) = cos(j (t - theta_k)) + cos(j (t + theta_k))
    const double theta_k = chebyshev_angle(n, k);
    const double tail = cosine_sum(n, t - theta_k) + cosine_sum(n, t + theta_k);
    return (1.0 + tail) / static_cast<double>(n);
}

double lagrange_basis(int n, int k, double t, KernelPath path) {
    return path == KernelPath::direct ? lagrange_basis_direct(n, k, t) : lagrange_basis_series(n, k, t);
}

double kernel_eval(int n, int k, double t, KernelPath path) {
    const double shift = pi / (2.0 * static_cast<double>(n));
    return 0.5 * (lagrange_basis(n, k, t - shift, path) + lagrange_basis(n, k, t + shift, path));
}

double kernel_tail_bound(int n, int k, double theta) {
    const double gap = std::abs(theta - chebyshev_angle(n, k)) - pi / (2.0 * static_cast<double>(n));
    const double nn = static_cast<double>(n);
    return pi * pi * pi / (4.0 * nn * nn) / (gap * gap);
}

KernelFunction::KernelFunction(int n, int k) : n_(n), k_(k) {
    check_index(n, k);
    coeff_.resize(static_cast<std::size_t>(n - 1));
    for (int j = 1; j < n; ++j)
        coeff_[static_cast<std::size_t>(j - 1)] = cos_node_multiple(n, k, j) * cos_node_multiple(n, 1, j);
}

double KernelFunction::operator()(double t) const {
    const double c1 = std::cos(t);
    const double s1 = std::sin(t);
    double c = c1;
    double s = s1;
    double acc = 0.0;
    for (double a : coeff_) {
        acc += a * c;
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
    return (1.0 + 2.0 * acc) / static_cast<double>(n_);
}

std::vector<double> KernelFunction::values(std::span<const double> ts) const {
    std::vector<double> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = (*this)(ts[i]);
    return out;
}

std::vector<double> kernel_values(int n, int k, std::span<const double> ts) { return KernelFunction(n, k).values(ts); }

KernelTable::KernelTable(int n, std::vector<double> grid, std::vector<double> values)
    : n_(n), grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(n_) * grid_.size())
        throw DomainError("KernelTable: value count does not match n * |grid|");
}

double KernelTable::column_sum(std::size_t j) const {
    double s = 0.0;
    for (int k = 1; k <= n_; ++k) s += (*this)(k, j);
    return s;
}

double KernelTable::column_abs_sum(std::size_t j) const {
    double s = 0.0;
    for (int k = 1; k <= n_; ++k) s += std::abs((*this)(k, j));
    return s;
}

double KernelTable::max_partition_defect() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) worst = std::max(worst, std::abs(column_sum(j) - 1.0));
    return worst;
}

KernelTable kernel_table(int n, std::span<const double> grid, KernelPath path) {
    if (n < 1) throw DomainError("kernel_table: n must be >= 1");
    if (grid.empty()) throw DomainError("kernel_table: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("kernel_table: grid must be sorted");

    const std::size_t m = grid.size();
    const auto nk = static_cast<std::size_t>(n);
    std::vector<double> values(nk * m);

    if (path == KernelPath::direct) {
        for (int k = 1; k <= n; ++k)
            for (std::size_t j = 0; j < m; ++j)
                values[static_cast<std::size_t>(k - 1) * m + j] = kernel_eval(n, k, grid[j], path);
        return KernelTable(n, {grid.begin(), grid.end()}, std::move(values));
    }

    // weights[k][j] = cos(j theta_k) cos(j pi / 2n), j = 1..n-1
    const std::size_t width = nk > 1 ? nk - 1 : 0;
    std::vector<double> weights(nk * width);
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j < n; ++j)
            weights[static_cast<std::size_t>(k - 1) * width + static_cast<std::size_t>(j - 1)] =
                cos_node_multiple(n, k, j) * cos_node_multiple(n, 1, j);

    std::vector<double> cosines(width);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i) {
        const double c1 = std::cos(grid[i]);
        const double s1 = std::sin(grid[i]);
        double c = c1;
        double s = s1;
        for (std::size_t j = 0; j < width; ++j) {
            cosines[j] = c;
            const double cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        for (std::size_t k = 0; k < nk; ++k) {
            const double* w = weights.data() + k * width;
            double acc = 0.0;
            for (std::size_t j = 0; j < width; ++j) acc += w[j] * cosines[j];
            values[k * m + i] = (1.0 + 2.0 * acc) * inv_n;
        }
    }
    return KernelTable(n, {grid.begin(), grid.end()}, std::move(values));
}

}  // namespace gd
