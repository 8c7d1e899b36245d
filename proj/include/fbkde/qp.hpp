#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fbkde {

/// min over {||alpha||_1 <= radius} of alpha' G alpha - 2 h' alpha.
struct QpProblem {
    Eigen::MatrixXd gram;   // symmetric PSD, n x n
    Eigen::VectorXd h;      // length n
    double radius = 1.0;
};

struct SolverSettings {
    double rho = 1e-2;         // ADMM penalty; small values suit the flat Gram spectra here
    double tol_primal = 1e-6;  // relative part of the combined stopping criterion
    double tol_dual = 1e-6;
    int max_iters = 200000;
    double over_relaxation = 1.8;
    bool trace_objective = false;  // record the objective at each z iterate
};

struct QpSolution {
    Eigen::VectorXd alpha;  // the final z iterate; feasible by construction
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // filled only when trace_objective is set
};

/// Euclidean projection onto the l1 ball of the given radius (Duchi et al.'s
/// sort-based soft-threshold algorithm). Returns v unchanged when already
/// inside the ball.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// alpha' G alpha - 2 h' alpha.
double qp_objective(const QpProblem& problem, const Eigen::VectorXd& alpha);

/// ADMM with splitting x-step (2G + rho I) x = 2h + rho (z - u),
/// z-step projection onto the l1 ball, scaled dual update u += x - z,
/// and over-relaxation of the x iterate. 2G is diagonalized once so the
/// x-step costs O(n r), r the numerical rank of the Gram matrix.
QpSolution solve_qp(const QpProblem& problem, const SolverSettings& settings = {});

}  // namespace fbkde
