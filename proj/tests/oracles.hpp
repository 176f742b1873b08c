#pragma once

// Independent reference computations for the tests. Plain loops over std::complex,
// written from the model equations without calling into the library under test.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// a[n] = exp(-j 2 pi d n sin(phi)), n = 0..N-1
inline std::vector<cd> steering(int n_el, double d, double phi) {
    std::vector<cd> a(n_el);
    for (int n = 0; n < n_el; ++n) a[n] = std::exp(cd(0.0, -2.0 * pi * d * n * std::sin(phi)));
    return a;
}

// |sum_n exp(-j 2 pi d n (s1 - s2))| in closed form, with the s1 == s2 limit N.
inline double dirichlet(int n_el, double d, double s1, double s2) {
    const double x = pi * d * (s1 - s2);
    if (std::abs(std::sin(x)) < 1e-300) return n_el;
    return std::abs(std::sin(n_el * x) / std::sin(x));
}

// u(phi) = |y^H z|^2 / ||z||^2 with z_l = sum_n B(l,n) h_n a_n(phi).
inline double utility(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& h, const Eigen::VectorXcd& y,
                      double d, double phi) {
    const auto a = steering(static_cast<int>(h.size()), d, phi);
    cd inner = 0.0;
    double norm_sq = 0.0;
    for (Eigen::Index l = 0; l < b.rows(); ++l) {
        cd z = 0.0;
        for (Eigen::Index n = 0; n < b.cols(); ++n) z += b(l, n) * h[n] * a[n];
        inner += std::conj(y[l]) * z;
        norm_sq += std::norm(z);
    }
    return std::norm(inner) / norm_sq;
}

// Least squares through the normal equations (B D_h)^H (B D_h) x = (B D_h)^H y / sqrt(P_p).
// Needs L >= N and full column rank.
inline Eigen::VectorXcd normal_equations_ls(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& h,
                                            const Eigen::VectorXcd& y, double p_p) {
    const Eigen::MatrixXcd m = b * h.asDiagonal();
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    return gram.partialPivLu().solve(m.adjoint() * y) / std::sqrt(p_p);
}

inline double log2_1p(double x) { return std::log2(1.0 + x); }

}  // namespace oracle
