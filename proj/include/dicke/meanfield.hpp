// meanfield.hpp — self-consistent coherent-field steady states.  The cavity
// amplitude obeys  alpha = -i lambda <X> / (i omega_c + kappa)  with
// lambda = 2 sqrt(2/N) G, while the atoms follow the ground state of
// H(alpha) = H_atomic + lambda (alpha + alpha*) X.  A damped fixed-point
// iteration solves the pair; a bisection on G locates the superradiance
// threshold where |alpha|^2 / N first exceeds eps_sr.
//
// The same solver serves three representations (they differ only in the
// atomic operator pair): the full 2^N space with X = S^x, the symmetric
// excitation ladder with its tridiagonal S^x, and a single sector pair with
// a 2x2 S^x.  Factories for all three are provided at the bottom.

#pragma once

#include "dicke/collective.hpp"
#include "dicke/hamiltonians.hpp"
#include "dicke/operators.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dicke::mf {

using ops::Complex;
using ops::Matrix;
using ops::OperatorMatrix;
using ops::Vector;

// ---- Problem definition -------------------------------------------------

struct MeanFieldProblem {
    OperatorMatrix h_atomic;  // hermitian atomic Hamiltonian, any representation
    OperatorMatrix coupling;  // X, the operator the cavity quadrature couples to
    int n_atoms = 1;          // physical atom number (sets lambda and eps_sr scale)
    double omega_c = 0.75;
    double kappa = 0.25;
    double g = 0.0;

    void validate() const {
        if (h_atomic.dim() == 0 || h_atomic.dim() != coupling.dim())
            throw std::invalid_argument("MeanFieldProblem: operator dimensions disagree");
        if (!h_atomic.hermitian || !coupling.hermitian)
            throw std::invalid_argument("MeanFieldProblem: operators must be hermitian-tagged");
        if (n_atoms < 1) throw std::invalid_argument("MeanFieldProblem: n_atoms must be >= 1");
        if (!(omega_c > 0)) throw std::invalid_argument("MeanFieldProblem: omega_c must be > 0");
        if (kappa < 0) throw std::invalid_argument("MeanFieldProblem: kappa must be >= 0");
        if (g < 0) throw std::invalid_argument("MeanFieldProblem: g must be >= 0");
    }

    double lambda() const { return 2.0 * std::sqrt(2.0 / n_atoms) * g; }
};

// Steady-state cavity amplitude generated by an atomic expectation value x.
inline Complex alpha_update(const MeanFieldProblem& p, double x) {
    const double denom = p.omega_c * p.omega_c + p.kappa * p.kappa;
    return -p.lambda() * x * Complex{p.omega_c, p.kappa} / denom;
}

// ---- Fixed-point solver -------------------------------------------------

struct MeanFieldOptions {
    std::optional<Complex> seed;  // default 0.1 sqrt(N)
    double damping = 0.5;         // fraction of the update applied per step
    double tol = 1e-10;           // |f(alpha) - alpha| convergence target
    int max_iter = 5000;
    double degeneracy_tol = 1e-11;  // ground-gap threshold for flagging
};

struct MeanFieldSolution {
    Complex alpha{};
    double photon_number = 0.0;  // |alpha|^2
    double sx = 0.0;             // <X> in the atomic ground state
    Vector atomic_state;
    double atomic_energy = 0.0;
    double cavity_energy = 0.0;  // omega_c |alpha|^2
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;        // final |f(alpha) - alpha|
    bool degenerate_ground = false;
};

namespace detail {

struct GroundState {
    Vector v;
    double energy = 0.0;
    double gap = 0.0;  // distance to the next eigenvalue (0 for dim 1)
};

inline GroundState ground_of(const Matrix& h) {
    if (h.rows() == 1) return {Vector::Ones(1), h(0, 0).real(), 0.0};
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("meanfield: eigensolver failed to converge");
    GroundState g;
    g.v = es.eigenvectors().col(0);
    g.energy = es.eigenvalues()[0];
    g.gap = es.eigenvalues()[1] - es.eigenvalues()[0];
    return g;
}

}  // namespace detail

inline MeanFieldSolution solve_meanfield(const MeanFieldProblem& p, MeanFieldOptions opt = {}) {
    p.validate();
    if (!(opt.damping > 0 && opt.damping <= 1))
        throw std::invalid_argument("solve_meanfield: damping must be in (0, 1]");
    if (opt.max_iter < 1) throw std::invalid_argument("solve_meanfield: max_iter must be >= 1");

    MeanFieldSolution sol;

    // Without coupling the cavity is empty and the atoms sit in their bare
    // ground state; no iteration is needed (or meaningful).
    if (p.g == 0.0) {
        const auto gs = detail::ground_of(p.h_atomic.m);
        sol.alpha = 0.0;
        sol.photon_number = 0.0;
        sol.atomic_state = gs.v;
        sol.atomic_energy = gs.energy;
        sol.sx = (gs.v.adjoint() * p.coupling.m * gs.v)(0, 0).real();
        sol.iterations = 1;
        sol.converged = true;
        sol.residual = 0.0;
        sol.degenerate_ground = gs.gap < opt.degeneracy_tol && p.h_atomic.dim() > 1;
        return sol;
    }

    const double lambda = p.lambda();
    Complex alpha = opt.seed.value_or(Complex{0.1 * std::sqrt(double(p.n_atoms)), 0.0});

    detail::GroundState gs;
    double x = 0.0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const double quad = 2.0 * alpha.real();  // alpha + alpha*
        gs = detail::ground_of(p.h_atomic.m + (lambda * quad) * p.coupling.m);
        x = (gs.v.adjoint() * p.coupling.m * gs.v)(0, 0).real();
        const Complex target = alpha_update(p, x);
        sol.residual = std::abs(target - alpha);
        sol.iterations = it;
        if (sol.residual < opt.tol) {
            alpha = target;
            sol.converged = true;
            break;
        }
        alpha += opt.damping * (target - alpha);
    }

    sol.alpha = alpha;
    sol.photon_number = std::norm(alpha);
    sol.atomic_state = gs.v;
    sol.atomic_energy = gs.energy;
    sol.cavity_energy = p.omega_c * std::norm(alpha);
    sol.sx = x;
    sol.degenerate_ground = gs.gap < opt.degeneracy_tol && p.h_atomic.dim() > 1;
    return sol;
}

// ---- Threshold location -------------------------------------------------

enum class BracketStatus { Ok, AllSuperradiant, AllNormal };

struct CriticalCouplingOptions {
    double eps_sr = 1e-6;  // superradiance threshold on |alpha|^2 / N
    double g_tol = 1e-4;   // bisection tolerance on G
    MeanFieldOptions mf{};
};

struct CriticalCouplingResult {
    double g_c = 0.0;
    BracketStatus status = BracketStatus::Ok;
    int probes = 0;             // mean-field solves performed
    int unconverged_probes = 0; // probes that hit the iteration cap
};

// Smallest G in [g_lo, g_hi] with a superradiant steady state, located by
// bisection on the indicator |alpha|^2 / N > eps_sr.  If the whole interval
// is superradiant the threshold is below g_lo and 0 is returned; if none of
// it is, g_hi is returned; both cases are flagged.
inline CriticalCouplingResult critical_coupling(MeanFieldProblem p, double g_lo, double g_hi,
                                                CriticalCouplingOptions opt = {}) {
    if (!(g_lo >= 0 && g_hi > g_lo))
        throw std::invalid_argument("critical_coupling: need 0 <= g_lo < g_hi");
    CriticalCouplingResult res;
    auto superradiant = [&](double g) {
        p.g = g;
        const MeanFieldSolution s = solve_meanfield(p, opt.mf);
        ++res.probes;
        if (!s.converged) ++res.unconverged_probes;
        return s.photon_number / p.n_atoms > opt.eps_sr;
    };

    if (superradiant(g_lo)) {
        res.g_c = 0.0;
        res.status = BracketStatus::AllSuperradiant;
        return res;
    }
    if (!superradiant(g_hi)) {
        res.g_c = g_hi;
        res.status = BracketStatus::AllNormal;
        return res;
    }
    double lo = g_lo, hi = g_hi;
    while (hi - lo > opt.g_tol) {
        const double mid = 0.5 * (lo + hi);
        (superradiant(mid) ? hi : lo) = mid;
    }
    res.g_c = 0.5 * (lo + hi);
    res.status = BracketStatus::Ok;
    return res;
}

// ---- Phase-diagram sweep ------------------------------------------------

struct PhaseGrid {
    std::vector<double> xs;  // model-parameter axis
    std::vector<double> gs;  // coupling axis
    int n_atoms = 1;
    double eps_sr = 1e-6;
    Eigen::MatrixXd photon;      // |alpha|^2, indexed (x, g)
    Eigen::MatrixXd sx;          // <X>
    Eigen::MatrixXd iterations;  // fixed-point iterations used
    std::vector<std::uint8_t> converged;  // flattened ix * gs.size() + ig

    bool superradiant(std::size_t ix, std::size_t ig) const {
        return photon(ix, ig) / n_atoms > eps_sr;
    }
    bool converged_at(std::size_t ix, std::size_t ig) const {
        return converged[ix * gs.size() + ig] != 0;
    }
    double unconverged_fraction() const {
        if (converged.empty()) return 0.0;
        std::size_t bad = 0;
        for (auto c : converged) bad += (c == 0);
        return double(bad) / double(converged.size());
    }
};

namespace detail {

// Run fn(i) for i in [0, n) on `threads` workers; items are independent and
// write disjoint slots, so the result is deterministic for any thread count.
template <class Fn>
inline void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t count = std::min(static_cast<std::size_t>(threads), n);
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Solve the mean-field problem over a 2-D (model parameter) x (coupling)
// grid.  `problem_at` maps a parameter value to a problem; its `g` is
// overwritten per column.
inline PhaseGrid sweep_phase_diagram(const std::function<MeanFieldProblem(double)>& problem_at,
                                     std::vector<double> xs, std::vector<double> gs,
                                     double eps_sr = 1e-6, MeanFieldOptions opt = {},
                                     int threads = 1) {
    if (xs.empty() || gs.empty())
        throw std::invalid_argument("sweep_phase_diagram: empty axis");
    PhaseGrid grid;
    grid.xs = std::move(xs);
    grid.gs = std::move(gs);
    grid.eps_sr = eps_sr;
    const std::size_t nx = grid.xs.size(), ng = grid.gs.size();
    grid.photon.resize(nx, ng);
    grid.sx.resize(nx, ng);
    grid.iterations.resize(nx, ng);
    grid.converged.assign(nx * ng, 0);
    grid.n_atoms = problem_at(grid.xs[0]).n_atoms;

    detail::parallel_for(nx, threads, [&](std::size_t ix) {
        MeanFieldProblem p = problem_at(grid.xs[ix]);
        for (std::size_t ig = 0; ig < ng; ++ig) {
            p.g = grid.gs[ig];
            const MeanFieldSolution s = solve_meanfield(p, opt);
            grid.photon(ix, ig) = s.photon_number;
            grid.sx(ix, ig) = s.sx;
            grid.iterations(ix, ig) = s.iterations;
            grid.converged[ix * ng + ig] = s.converged ? 1 : 0;
        }
    });
    return grid;
}

// ---- Representation factories -------------------------------------------

// Full 2^N-space problem: H_atom with X = S^x.
inline MeanFieldProblem full_problem(const model::ModelSpec& spec) {
    spec.validate();
    MeanFieldProblem p;
    p.h_atomic = model::build_h_atom(spec);
    ops::HilbertLayout atoms{spec.n_atoms, 0};
    p.coupling = ops::collective_spin(atoms, ops::Collective::X);
    p.n_atoms = spec.n_atoms;
    p.omega_c = spec.omega_c;
    p.kappa = spec.kappa;
    p.g = spec.coupling_g;
    return p;
}

// Symmetric-ladder problem truncated at n_cut excitations (homogeneous
// exchange only): diagonal ladder energies with the tridiagonal S^x.
inline MeanFieldProblem symmetric_problem(const model::ModelSpec& spec, int n_cut) {
    spec.validate();
    if (!model::is_homogeneous_dipole(spec.interaction))
        throw std::invalid_argument("symmetric_problem: requires homogeneous dipole exchange");
    if (n_cut < 1 || n_cut > spec.n_atoms)
        throw std::invalid_argument("symmetric_problem: ladder cutoff out of range");
    const double v = std::get<model::ConstantDipole>(spec.interaction).v_dd;
    Matrix h = Matrix::Zero(n_cut + 1, n_cut + 1);
    for (int n = 0; n <= n_cut; ++n)
        h(n, n) = collective::omega_n_constant(spec.n_atoms, n, spec.omega_a, v);
    MeanFieldProblem p;
    p.h_atomic = OperatorMatrix(std::move(h), true);
    p.coupling = model::coupling_sx_symmetric(spec.n_atoms, n_cut);
    p.n_atoms = spec.n_atoms;
    p.omega_c = spec.omega_c;
    p.kappa = spec.kappa;
    p.g = spec.coupling_g;
    return p;
}

// Two-level problem for one sector pair with given splitting and strength.
inline MeanFieldProblem pair_problem(const collective::RabiParams& rp,
                                     const model::ModelSpec& spec) {
    spec.validate();
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = rp.delta;
    MeanFieldProblem p;
    p.h_atomic = OperatorMatrix(std::move(h), true);
    p.coupling = model::coupling_sx_pair(rp.eta);
    p.n_atoms = spec.n_atoms;
    p.omega_c = spec.omega_c;
    p.kappa = spec.kappa;
    p.g = spec.coupling_g;
    return p;
}

}  // namespace dicke::mf
