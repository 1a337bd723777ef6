#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kleinjac/homology.hpp"
#include "kleinjac/quadrature.hpp"

namespace kleinjac {

struct QualityReport {
    double gamma_block_defect = 0.0;   // || C * gamma block - I ||_max
    double tau_symmetry_defect = 0.0;  // || tau - tau^T ||_max
    double min_im_tau_eigenvalue = 0.0;
    double gamma_condition = 0.0;      // condition number of the gamma block
    bool im_tau_positive_definite = false;
};

// Period data in a fixed homology basis. Rows of `full` are the monomial
// differentials x^{k-1} dx / y; columns follow the basis cycle order. The
// adapted basis is omega_j = sum_k normalization(j,k) x^{k-1} dx / y, with
// identity gamma-periods and delta-periods tau.
struct PeriodData {
    Eigen::MatrixXcd full;           // g x 2g
    Eigen::MatrixXcd normalization;  // g x g
    Eigen::MatrixXcd tau;            // g x g
    QualityReport quality;
    int genus() const { return static_cast<int>(full.rows()); }
};

inline QualityReport riemann_validate(const PeriodData& periods) {
    QualityReport q;
    int g = periods.genus();
    Eigen::MatrixXcd gamma = periods.full.leftCols(g);
    Eigen::MatrixXcd check = periods.normalization * gamma;
    q.gamma_block_defect = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            Complex expect = i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            q.gamma_block_defect = std::max(q.gamma_block_defect, std::abs(check(i, j) - expect));
        }
    q.tau_symmetry_defect = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            q.tau_symmetry_defect =
                std::max(q.tau_symmetry_defect, std::abs(periods.tau(i, j) - periods.tau(j, i)));
    Eigen::MatrixXd im = periods.tau.imag();
    Eigen::MatrixXd im_sym = 0.5 * (im + im.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(im_sym);
    q.min_im_tau_eigenvalue = eig.eigenvalues().minCoeff();
    Eigen::LLT<Eigen::MatrixXd> llt(im_sym);
    q.im_tau_positive_definite = llt.info() == Eigen::Success;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gamma);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    q.gamma_condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    return q;
}

// Integrates the monomial differentials over every basis cycle and solves for
// the adapted normalization. The basis is expected to be canonical; the
// quality report records how well the Riemann relations come out.
inline PeriodData period_matrix(const CurveDescriptor& curve, const HomologyBasis& basis,
                                const Tolerances& tol = Tolerances{}) {
    int g = curve.genus;
    PeriodData data;
    data.full.resize(g, 2 * g);
    for (int j = 0; j < 2 * g; ++j) {
        std::vector<Complex> vals =
            integrate_monomials(curve, basis.cycles[static_cast<std::size_t>(j)], tol);
        for (int k = 0; k < g; ++k) data.full(k, j) = vals[static_cast<std::size_t>(k)];
    }
    Eigen::MatrixXcd gamma = data.full.leftCols(g);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gamma);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > tol.condition_guard)
        fail(ErrorKind::SingularPeriodBlock,
             "gamma-period block is numerically singular; homology input is defective");
    data.normalization = gamma.partialPivLu().solve(Eigen::MatrixXcd::Identity(g, g));
    data.tau = data.normalization * data.full.rightCols(g);
    data.quality = riemann_validate(data);
    return data;
}

// Max over basis cycles c and adapted forms omega_j of
// | int_{sigma(c)} omega_j - conj(int_c omega_j) |, the defect of the
// conjugation-equivariance of the adapted basis. Near zero exactly when the
// adapted basis is invariant under the involution.
inline double sigma_invariance_residual(const CurveDescriptor& curve, const HomologyBasis& basis,
                                        const PeriodData& periods,
                                        const Tolerances& tol = Tolerances{}) {
    int g = periods.genus();
    Eigen::MatrixXcd adapted = periods.normalization * periods.full;  // g x 2g
    double worst = 0.0;
    for (int c = 0; c < 2 * g; ++c) {
        SurfacePath sc = conj_path(curve, basis.cycles[static_cast<std::size_t>(c)], tol);
        std::vector<Complex> mono = integrate_monomials(curve, sc, tol);
        Eigen::VectorXcd m(g);
        for (int k = 0; k < g; ++k) m(k) = mono[static_cast<std::size_t>(k)];
        Eigen::VectorXcd lhs = periods.normalization * m;
        for (int j = 0; j < g; ++j)
            worst = std::max(worst, std::abs(lhs(j) - std::conj(adapted(j, c))));
    }
    return worst;
}

} // namespace kleinjac
