#include "fbkde/qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fbkde {

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("project_l1_ball: radius must be positive");
    const double l1 = v.lpNorm<1>();
    if (l1 <= radius) return v;

    std::vector<double> mags(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    std::stable_sort(mags.begin(), mags.end(), std::greater<double>());

    // Largest j with mags[j] - (cumsum[j] - radius)/(j+1) > 0.
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
        cumsum += mags[j];
        const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
        if (mags[j] - candidate > 0.0)
            theta = candidate;
        else
            break;
    }

    Eigen::VectorXd w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
        w[i] = v[i] >= 0.0 ? shrunk : -shrunk;
    }
    return w;
}

double qp_objective(const QpProblem& problem, const Eigen::VectorXd& alpha) {
    if (alpha.size() != problem.h.size() || alpha.size() != problem.gram.rows())
        throw std::invalid_argument("qp_objective: alpha length mismatch");
    return alpha.dot(problem.gram * alpha) - 2.0 * problem.h.dot(alpha);
}

QpSolution solve_qp(const QpProblem& problem, const SolverSettings& settings) {
    const Eigen::Index n = problem.gram.rows();
    if (problem.gram.cols() != n || problem.h.size() != n)
        throw std::invalid_argument("solve_qp: inconsistent problem dimensions");
    if (!(problem.radius > 0.0)) throw std::invalid_argument("solve_qp: radius must be positive");
    if (settings.max_iters < 1) throw std::invalid_argument("solve_qp: max_iters must be >= 1");
    if (!(settings.tol_primal > 0.0) || !(settings.tol_dual > 0.0) || !(settings.rho > 0.0))
        throw std::invalid_argument("solve_qp: tolerances and rho must be positive");

    const double scale = std::max(1.0, problem.gram.cwiseAbs().maxCoeff());
    if ((problem.gram - problem.gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("solve_qp: Gram matrix is not symmetric");

    const double rho = settings.rho;

    // Pivoted Cholesky of G: after r steps G = L L' + E with trace(E) below
    // the roundoff-level cutoff. Gaussian Gram matrices have rapidly decaying
    // spectra, so r is usually far below n; for well-conditioned G the
    // factorization runs to completion and is exact.
    Eigen::VectorXd diag_resid = problem.gram.diagonal();
    const double diag_cutoff = 1e-14 * std::max(diag_resid.maxCoeff(), 0.0);
    Eigen::MatrixXd L(n, n);
    Eigen::Index r = 0;
    while (r < n) {
        Eigen::Index pivot;
        const double dmax = diag_resid.maxCoeff(&pivot);
        if (dmax <= diag_cutoff) break;
        Eigen::VectorXd col = problem.gram.col(pivot);
        if (r > 0) col.noalias() -= L.leftCols(r) * L.row(pivot).head(r).transpose();
        col /= std::sqrt(dmax);
        L.col(r) = col;
        diag_resid -= col.cwiseAbs2();
        diag_resid[pivot] = 0.0;  // guard against roundoff going negative
        ++r;
    }
    L.conservativeResize(n, r);

    // Woodbury: (2 L L' + rho I)^{-1} v = v/rho - L M^{-1} (L' v) / rho^2
    // with M = I/2 + (L' L)/rho.
    Eigen::MatrixXd cap = (L.transpose() * L) / rho;
    cap.diagonal().array() += 0.5;
    Eigen::LDLT<Eigen::MatrixXd> cap_ldlt(cap);
    if (cap_ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve_qp: factorization of the capacitance matrix failed");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd two_h = 2.0 * problem.h;
    const double relax = settings.over_relaxation;

    QpSolution sol;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    constexpr double kAbsTol = 1e-10;
    Eigen::VectorXd rhs(n), coef(r);

    for (int iter = 1; iter <= settings.max_iters; ++iter) {
        rhs = two_h + rho * (z - u);
        coef.noalias() = L.transpose() * rhs;
        coef = cap_ldlt.solve(coef);
        x.noalias() = -L * coef / rho;
        x += rhs;
        x /= rho;
        const Eigen::VectorXd z_prev = z;
        const Eigen::VectorXd x_relaxed = relax * x + (1.0 - relax) * z_prev;
        z = project_l1_ball(x_relaxed + u, problem.radius);
        u += x_relaxed - z;

        if (settings.trace_objective)
            sol.objective_trace.push_back(qp_objective(problem, z));

        sol.primal_residual = (x - z).norm();
        sol.dual_residual = rho * (z - z_prev).norm();
        sol.iterations = iter;

        const double eps_pri =
            sqrt_n * kAbsTol + settings.tol_primal * std::max(x.norm(), z.norm());
        const double eps_dual = sqrt_n * kAbsTol + settings.tol_dual * rho * u.norm();
        if (sol.primal_residual <= eps_pri && sol.dual_residual <= eps_dual) {
            sol.converged = true;
            break;
        }
    }

    sol.alpha = z;
    return sol;
}

}  // namespace fbkde
