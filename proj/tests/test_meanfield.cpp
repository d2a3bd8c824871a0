// test_meanfield.cpp — self-consistent steady states, threshold location,
// and the phase-diagram sweep.  The closed-form two-level results used here
// were verified against an independent fixed-point script.

#include "dicke/meanfield.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dicke;
using ops::Complex;
using ops::Matrix;

namespace {

model::ModelSpec homogeneous(int n_atoms, double v_dd, double g) {
    model::ModelSpec s;
    s.n_atoms = n_atoms;
    s.interaction = model::ConstantDipole{v_dd};
    s.coupling_g = g;
    return s;
}

// Closed-form superradiant photon number of the two-level pair problem.
double pair_photon(double delta, double eta, int n, double wc, double kap, double g) {
    const double lam2 = 8.0 * g * g / n;
    const double den = wc * wc + kap * kap;
    const double k = lam2 * wc * eta * eta / (2.0 * den);
    if (k <= delta / 2.0) return 0.0;
    const double c2 = k * k - 0.25 * delta * delta;
    const double x2 = 0.25 * eta * eta * c2 / (k * k);
    return lam2 * x2 / den;
}

}  // namespace

TEST_CASE("cavity amplitude generated by an atomic polarization") {
    mf::MeanFieldProblem p;
    p.h_atomic = ops::OperatorMatrix(Matrix::Zero(2, 2), true);
    p.coupling = ops::OperatorMatrix(Matrix::Zero(2, 2), true);
    p.n_atoms = 6;
    p.omega_c = 0.75;
    p.kappa = 0.25;
    p.g = 0.3;
    const Complex a = mf::alpha_update(p, -1.2);
    REQUIRE(a.real() == Catch::Approx(0.4988306325798366).margin(1e-14));
    REQUIRE(a.imag() == Catch::Approx(0.16627687752661222).margin(1e-14));
    // Zero polarization drives nothing.
    REQUIRE(std::abs(mf::alpha_update(p, 0.0)) == 0.0);
}

TEST_CASE("uncoupled problem returns the bare ground state in one step") {
    const auto p = mf::full_problem(homogeneous(4, -0.1, 0.0));
    const auto sol = mf::solve_meanfield(p);
    REQUIRE(sol.converged);
    REQUIRE(sol.iterations == 1);
    REQUIRE(sol.alpha == Complex{0.0, 0.0});
    REQUIRE(sol.photon_number == 0.0);
    REQUIRE(std::abs(sol.sx) < 1e-12);
    REQUIRE(sol.atomic_energy == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE_FALSE(sol.degenerate_ground);
}

TEST_CASE("two-level pair: threshold and superradiant branch agree with theory") {
    const double delta = 0.8, eta = std::sqrt(6.0);
    const collective::RabiParams rp{0, delta, eta};
    model::ModelSpec s = homogeneous(6, 0.0, 0.0);

    const double gc = collective::rabi_critical_g(rp, 6, 0.75, 0.25);
    REQUIRE(gc == Catch::Approx(0.2886751345948129).margin(1e-13));

    // Below threshold the fixed point is the empty cavity.
    s.coupling_g = 0.9 * gc;
    auto sol = mf::solve_meanfield(mf::pair_problem(rp, s));
    REQUIRE(sol.converged);
    REQUIRE(sol.photon_number < 1e-12);

    // Above threshold the photon number follows the closed form.
    s.coupling_g = 0.45;
    sol = mf::solve_meanfield(mf::pair_problem(rp, s));
    REQUIRE(sol.converged);
    REQUIRE(sol.photon_number == Catch::Approx(0.5382606310013716).margin(1e-7));
    REQUIRE(sol.photon_number ==
            Catch::Approx(pair_photon(delta, eta, 6, 0.75, 0.25, 0.45)).margin(1e-7));
    // The polarization opposes the drive from a positive seed.
    REQUIRE(sol.sx < 0.0);
    REQUIRE(sol.alpha.real() > 0.0);
}

TEST_CASE("threshold bisection brackets the analytic critical coupling") {
    const collective::RabiParams rp{0, 0.8, std::sqrt(6.0)};
    model::ModelSpec s = homogeneous(6, 0.0, 0.0);
    const auto p = mf::pair_problem(rp, s);
    const double gc = collective::rabi_critical_g(rp, 6, 0.75, 0.25);

    mf::CriticalCouplingOptions opt;
    opt.eps_sr = 1e-8;
    const auto res = mf::critical_coupling(p, 0.0, 1.0, opt);
    REQUIRE(res.status == mf::BracketStatus::Ok);
    REQUIRE(res.g_c == Catch::Approx(gc).margin(5e-4));
    REQUIRE(res.probes > 10);

    // Degenerate pair: superradiant at any coupling.
    const collective::RabiParams flat{0, 0.0, std::sqrt(6.0)};
    const auto res2 = mf::critical_coupling(mf::pair_problem(flat, s), 0.05, 1.0, opt);
    REQUIRE(res2.status == mf::BracketStatus::AllSuperradiant);
    REQUIRE(res2.g_c == 0.0);

    // Interval entirely below threshold.
    const auto res3 = mf::critical_coupling(p, 0.0, 0.5 * gc, opt);
    REQUIRE(res3.status == mf::BracketStatus::AllNormal);
    REQUIRE(res3.g_c == Catch::Approx(0.5 * gc).margin(1e-15));

    REQUIRE_THROWS_AS(mf::critical_coupling(p, 0.5, 0.2, opt), std::invalid_argument);
}

TEST_CASE("full and symmetric-ladder representations agree") {
    for (double g : {0.2, 0.35, 0.5}) {
        const auto spec = homogeneous(4, -0.15, g);
        const auto a = mf::solve_meanfield(mf::full_problem(spec));
        const auto b = mf::solve_meanfield(mf::symmetric_problem(spec, 4));
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        REQUIRE(a.photon_number == Catch::Approx(b.photon_number).margin(1e-8));
        REQUIRE(a.sx == Catch::Approx(b.sx).margin(1e-7));
    }
}

TEST_CASE("iteration cap is reported honestly") {
    const collective::RabiParams rp{0, 0.8, std::sqrt(6.0)};
    model::ModelSpec s = homogeneous(6, 0.0, 0.45);
    mf::MeanFieldOptions opt;
    opt.max_iter = 3;
    const auto sol = mf::solve_meanfield(mf::pair_problem(rp, s), opt);
    REQUIRE_FALSE(sol.converged);
    REQUIRE(sol.iterations == 3);
    REQUIRE(sol.residual > 0.0);
}

TEST_CASE("solver options are validated") {
    const auto p = mf::full_problem(homogeneous(3, -0.1, 0.1));
    mf::MeanFieldOptions opt;
    opt.damping = 0.0;
    REQUIRE_THROWS_AS(mf::solve_meanfield(p, opt), std::invalid_argument);
    opt = {};
    opt.max_iter = 0;
    REQUIRE_THROWS_AS(mf::solve_meanfield(p, opt), std::invalid_argument);

    mf::MeanFieldProblem broken = p;
    broken.coupling = ops::OperatorMatrix(Matrix::Zero(3, 3), true);
    REQUIRE_THROWS_AS(mf::solve_meanfield(broken), std::invalid_argument);
}

TEST_CASE("phase-diagram sweep is deterministic across thread counts") {
    auto problem_at = [](double v) {
        return mf::full_problem(homogeneous(3, v, 0.0));
    };
    // Kept away from the exact crossing v = -1/2 where any coupling is
    // already superradiant.
    std::vector<double> vs{-0.45, -0.28, -0.15, -0.05};
    std::vector<double> gs{0.05, 0.2, 0.35, 0.5, 0.65};
    const auto g1 = mf::sweep_phase_diagram(problem_at, vs, gs, 1e-6, {}, 1);
    const auto g4 = mf::sweep_phase_diagram(problem_at, vs, gs, 1e-6, {}, 4);

    REQUIRE((g1.photon - g4.photon).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((g1.sx - g4.sx).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(g1.converged == g4.converged);
    REQUIRE(g1.n_atoms == 3);
    REQUIRE(g1.unconverged_fraction() == 0.0);

    // Strong coupling is superradiant everywhere on this grid; weak is not.
    for (std::size_t i = 0; i < vs.size(); ++i) {
        REQUIRE(g1.superradiant(i, gs.size() - 1));
        REQUIRE_FALSE(g1.superradiant(i, 0));
        REQUIRE(g1.converged_at(i, 0));
    }
    REQUIRE_THROWS_AS(mf::sweep_phase_diagram(problem_at, {}, gs), std::invalid_argument);
}
