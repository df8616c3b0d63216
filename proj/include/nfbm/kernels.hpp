#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

namespace nfbm {

// Order n and Hurst index H with n-1 < H < n.
struct HurstOrder {
    int n = 1;
    double H = 0.5;

    HurstOrder() = default;
    HurstOrder(int order, double hurst);

    // H - n + 1, the index of the underlying fBm
    double base() const { return H - n + 1; }
    std::string interval() const;
};

inline bool operator==(const HurstOrder& a, const HurstOrder& b) { return a.n == b.n && a.H == b.H; }

// Uniform grid t_i = i T/m, i = 0..m.
struct Grid {
    double T = 1.0;
    int m = 1;

    Grid() = default;
    Grid(double horizon, int steps);

    double step() const { return T / m; }
    double at(int i) const { return i == m ? T : i * (T / m); }
    Eigen::VectorXd points() const;
};

inline bool operator==(const Grid& a, const Grid& b) { return a.T == b.T && a.m == b.m; }

// Molchan-Golosov kernel k_H(t,s), 0 < s < t. The inner integral is done by quadrature.
double mg_kernel(double H, double t, double s);

// Same kernel through the incomplete beta function. Used for cross-checks and cell averages.
double mg_kernel_closed(double H, double t, double s);

// d/dt k_H(t,s) = d_H (H-1/2) (t/s)^{H-1/2} (t-s)^{H-3/2}
double mg_kernel_dt(double H, double t, double s);

// int_0^u k_H(t,v) dv for 0 <= u <= t, closed form.
double mg_kernel_antiderivative(double H, double t, double u);

// k^{(n)}_H(t,u). For n >= 2 the n-1 nested integrals collapse to one:
//   d_h u^{-a}/(n-1)! int_u^t (s-u)^a [(n-1)(t-s)^{n-2} s^a - a s^{a-1} (t-s)^{n-1}] ds
// with h = H-n+1, a = h-1/2.
double nfbm_kernel(const HurstOrder& ho, double t, double u);

// Lower-triangular discretization of k^{(n)} on a grid.
//
// The base order uses exact cell averages
//   K1[i][j] = (1/Delta) int_{t_{j-1}}^{t_j} k_h(t_i,s) ds.
// Each further order is a right-endpoint running integral in t,
//   K^{(r+1)}[i][j] = Delta sum_{l=j}^{i} K^{(r)}[l][j],
// which keeps the inverse a chain of first differences and one triangular
// solve on the base. Entries converge to the cell averages of k^{(n)} at O(Delta).
class KernelMatrix {
public:
    KernelMatrix(const HurstOrder& ho, const Grid& grid);

    const HurstOrder& order() const { return ho_; }
    const Grid& grid() const { return grid_; }

    // 1-based, K[i][j] for 1 <= j <= i <= m, zero above the diagonal
    double entry(int i, int j) const;
    // 0-based dense copy (m x m). Built on first use and kept.
    const Eigen::MatrixXd& dense() const;

    // (B(t_1), ..., B(t_m)) = K dW
    Eigen::VectorXd apply(const Eigen::VectorXd& dW) const;
    // dW with K dW = values; throws SingularityError on a vanishing pivot
    Eigen::VectorXd solve(const Eigen::VectorXd& values) const;

    // Builds from a full lower-triangular table (used by the cache file reader).
    static KernelMatrix from_dense(const HurstOrder& ho, const Grid& grid, const Eigen::MatrixXd& K);

private:
    KernelMatrix() = default;

    HurstOrder ho_;
    Grid grid_;
    double scale_ = 1.0;                          // Delta^{h-1/2}
    std::shared_ptr<const Eigen::MatrixXd> base_;  // unscaled cell averages, null when h = 1/2
    mutable std::shared_ptr<const Eigen::MatrixXd> dense_;
};

KernelMatrix kernel_matrix(const HurstOrder& ho, const Grid& grid);

// Recovers dW from path values B(t_0..t_m) (B(t_0) = 0 is skipped).
Eigen::VectorXd invert_kernel_matrix(const KernelMatrix& K, const Eigen::VectorXd& values);

void clear_kernel_cache();

// Binary cache file: magic "NFBMKMAT", uint32 version, n H T m as little-endian
// doubles, then the lower triangle row by row.
void save_kernel_matrix(const std::string& path, const KernelMatrix& K);
KernelMatrix load_kernel_matrix(const std::string& path, const HurstOrder& ho, const Grid& grid);

}  // namespace nfbm
