#pragma once

// Dirichlet solve of -L psi = rhs with psi = 0 on the whole boundary.
// The equation is divided by r, which turns -L into -div((1/r) grad .) and
// makes the system self-adjoint in the r^{-1}-weighted product; the assembled
// matrix is exactly the stiffness matrix of weighted_inner restricted to
// interior nodes, so x^T K y == weighted_inner for trace-zero fields.
// Solved by conjugate gradients with an incomplete-Cholesky preconditioner.

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <stdexcept>
#include <vector>

#include "vring/grid.hpp"
#include "vring/operators.hpp"

namespace vring {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DirichletSolver {
public:
    explicit DirichletSolver(const AxiGrid& g, double tol = 1e-10, int max_iter = 20000)
        : grid_(g), tol_(tol), max_iter_(max_iter) {
        assemble();
        cg_.setTolerance(tol_);
        cg_.setMaxIterations(max_iter_);
        cg_.compute(K_);
        if (cg_.info() != Eigen::Success)
            throw SolverError("DirichletSolver: preconditioner setup failed");
    }

    const AxiGrid& grid() const { return grid_; }
    const Eigen::SparseMatrix<double>& stiffness() const { return K_; }

    // Interior-node packing order: j-major over interior nodes.
    Eigen::VectorXd pack(const GridField& f) const {
        Eigen::VectorXd x(n_);
        std::size_t k = 0;
        for (int j = 1; j < grid_.nr - 1; ++j)
            for (int i = 1; i < grid_.nz - 1; ++i) x[k++] = f(i, j);
        return x;
    }

    GridField unpack(const Eigen::VectorXd& x) const {
        GridField f(grid_);
        std::size_t k = 0;
        for (int j = 1; j < grid_.nr - 1; ++j)
            for (int i = 1; i < grid_.nz - 1; ++i) f(i, j) = x[k++];
        return f;
    }

    // Weighted load: b = 2 pi^2 h^2 rhs / r on interior nodes.
    Eigen::VectorXd load(const GridField& rhs) const {
        const double c = kTwoPiSq * grid_.hz() * grid_.hr();
        Eigen::VectorXd b(n_);
        std::size_t k = 0;
        for (int j = 1; j < grid_.nr - 1; ++j) {
            const double w = c / grid_.r(j);
            for (int i = 1; i < grid_.nz - 1; ++i) b[k++] = rhs(i, j) * w;
        }
        return b;
    }

    GridField solve(const GridField& rhs) const {
        require_same_grid(rhs, GridField(grid_), "DirichletSolver::solve");
        Eigen::VectorXd x = cg_.solve(load(rhs));
        check(x);
        return unpack(x);
    }

    GridField solve_with_guess(const GridField& rhs, const GridField& guess) const {
        Eigen::VectorXd x = cg_.solveWithGuess(load(rhs), pack(guess));
        check(x);
        return unpack(x);
    }

    int last_iterations() const { return static_cast<int>(cg_.iterations()); }

private:
    void check(const Eigen::VectorXd&) const {
        if (cg_.info() != Eigen::Success)
            throw SolverError("DirichletSolver: CG did not reach tolerance within the iteration cap");
    }

    void assemble() {
        const int nz = grid_.nz, nr = grid_.nr;
        n_ = static_cast<std::size_t>(nz - 2) * (nr - 2);
        auto row = [nz](int i, int j) { return static_cast<long>(j - 1) * (nz - 2) + (i - 1); };
        const double hz = grid_.hz(), hr = grid_.hr();
        const double cz = kTwoPiSq * hr / hz;
        const double cr = kTwoPiSq * hz / hr;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(5 * n_);
        for (int j = 1; j < nr - 1; ++j) {
            const double wz = cz / grid_.r(j);
            const double wr_up = cr / (0.5 * (grid_.r(j) + grid_.r(j + 1)));
            const double wr_dn = cr / (0.5 * (grid_.r(j) + grid_.r(j - 1)));
            for (int i = 1; i < nz - 1; ++i) {
                long me = row(i, j);
                trip.emplace_back(me, me, 2.0 * wz + wr_up + wr_dn);
                if (i > 1) trip.emplace_back(me, row(i - 1, j), -wz);
                if (i < nz - 2) trip.emplace_back(me, row(i + 1, j), -wz);
                if (j > 1) trip.emplace_back(me, row(i, j - 1), -wr_dn);
                if (j < nr - 2) trip.emplace_back(me, row(i, j + 1), -wr_up);
            }
        }
        K_.resize(static_cast<long>(n_), static_cast<long>(n_));
        K_.setFromTriplets(trip.begin(), trip.end());
        K_.makeCompressed();
    }

    AxiGrid grid_;
    double tol_;
    int max_iter_;
    std::size_t n_ = 0;
    Eigen::SparseMatrix<double> K_;
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>> cg_;
};

}  // namespace vring
