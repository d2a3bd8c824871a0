// test_collective.cpp — excitation sectors, ladder formulas, reduced
// two-level parameters, and the degeneracy scan.  Frozen numbers were
// cross-checked against an independent dense-diagonalization script.

#include "dicke/collective.hpp"
#include "dicke/hamiltonians.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dicke;
using collective::CollectiveState;
using ops::Matrix;
using ops::OperatorMatrix;

namespace {

model::ModelSpec homogeneous(int n_atoms, double v_dd) {
    model::ModelSpec s;
    s.n_atoms = n_atoms;
    s.interaction = model::ConstantDipole{v_dd};
    return s;
}

}  // namespace

TEST_CASE("binomial and sector bookkeeping") {
    REQUIRE(collective::binomial(6, 3) == 20);
    REQUIRE(collective::binomial(6, 0) == 1);
    REQUIRE(collective::binomial(20, 10) == 184756);
    REQUIRE(collective::binomial(4, 5) == 0);

    const auto idx = collective::sector_indices(3, 1);
    REQUIRE(idx == std::vector<int>{1, 2, 4});
    for (int n = 0; n <= 6; ++n)
        REQUIRE(collective::sector_indices(6, n).size() == collective::binomial(6, n));
    REQUIRE_THROWS_AS(collective::sector_indices(6, 7), std::invalid_argument);
}

TEST_CASE("symmetric states are uniform and normalized") {
    const CollectiveState st = collective::symmetric_state(6, 2);
    REQUIRE(st.amplitudes.size() == 15);
    REQUIRE(std::abs(st.amplitudes[0].real() - 1.0 / std::sqrt(15.0)) < 1e-15);
    const auto full = st.embed();
    REQUIRE(full.size() == 64);
    REQUIRE(std::abs(full.norm() - 1.0) < 1e-14);
    // Amplitude sits only on two-excitation patterns.
    REQUIRE(std::abs(full[0b000011]) > 0);
    REQUIRE(std::abs(full[0b000111]) == 0.0);
}

TEST_CASE("ladder energies of the homogeneous model") {
    // At v_dd = -1/3 and N = 6 the n = 1 and n = 2 levels are degenerate at
    // -11/3 while the edges sit at -3.
    const double v = -1.0 / 3.0;
    REQUIRE(collective::omega_n_constant(6, 0, 1.0, v) == Catch::Approx(-3.0).margin(1e-14));
    REQUIRE(collective::omega_n_constant(6, 1, 1.0, v) ==
            Catch::Approx(-11.0 / 3.0).margin(1e-14));
    REQUIRE(collective::omega_n_constant(6, 2, 1.0, v) ==
            Catch::Approx(-11.0 / 3.0).margin(1e-14));
    REQUIRE(collective::omega_n_constant(6, 3, 1.0, v) == Catch::Approx(-3.0).margin(1e-13));
    // Non-interacting ladder is equally spaced by omega_a.
    for (int n = 0; n < 6; ++n)
        REQUIRE(collective::omega_n_constant(6, n + 1, 1.0, 0.0) -
                    collective::omega_n_constant(6, n, 1.0, 0.0) ==
                Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("pairwise level crossings of the homogeneous ladder") {
    // v = -omega_a / (N - 2n - 1): for N = 6 the reciprocals are -5, -3, -1.
    REQUIRE(collective::critical_vdd(6, 0, 1.0).value() == Catch::Approx(-0.2).margin(1e-15));
    REQUIRE(collective::critical_vdd(6, 1, 1.0).value() ==
            Catch::Approx(-1.0 / 3.0).margin(1e-15));
    REQUIRE(collective::critical_vdd(6, 2, 1.0).value() == Catch::Approx(-1.0).margin(1e-15));
    // Beyond the waist the ladder re-orders: crossings at positive v.
    REQUIRE(collective::critical_vdd(6, 3, 1.0).value() == Catch::Approx(1.0).margin(1e-15));
    // Odd N has a pair with no finite crossing.
    REQUIRE_FALSE(collective::critical_vdd(5, 2, 1.0).has_value());
    // The degeneracy is exact: both levels agree at the crossing.
    for (int n = 0; n <= 2; ++n) {
        const double vc = collective::critical_vdd(6, n, 1.0).value();
        REQUIRE(collective::omega_n_constant(6, n, 1.0, vc) ==
                Catch::Approx(collective::omega_n_constant(6, n + 1, 1.0, vc)).margin(1e-13));
    }
}

TEST_CASE("transition strengths between adjacent symmetric states") {
    const double expect[] = {std::sqrt(6.0), std::sqrt(10.0), std::sqrt(12.0),
                             std::sqrt(12.0), std::sqrt(10.0), std::sqrt(6.0)};
    for (int n = 0; n < 6; ++n)
        REQUIRE(collective::eta_n(6, n) == Catch::Approx(expect[n]).margin(1e-14));

    // Direct matrix element <psi_{n+1}| 2 S^x |psi_n> on explicit states.
    ops::HilbertLayout atoms{6, 0};
    const Matrix sx2 = 2.0 * ops::collective_spin(atoms, ops::Collective::X).m;
    for (int n = 0; n < 6; ++n) {
        const auto lo = collective::symmetric_state(6, n).embed();
        const auto hi = collective::symmetric_state(6, n + 1).embed();
        REQUIRE(std::abs(hi.dot(sx2 * lo)) == Catch::Approx(collective::eta_n(6, n)).margin(1e-12));
    }
}

TEST_CASE("reduced two-level critical coupling") {
    // Non-interacting pair (0,1) at N = 6, omega_c = 0.75, kappa = 0.25.
    const auto p = collective::rabi_params(6, 0, 1.0, 0.0);
    REQUIRE(p.delta == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(p.eta == Catch::Approx(std::sqrt(6.0)).margin(1e-15));
    REQUIRE(collective::rabi_critical_g(p, 6, 0.75, 0.25) ==
            Catch::Approx(0.3227486121839514).margin(1e-14));

    // Loss raises the threshold by sqrt((wc^2 + k^2)/(wc^2 + k0^2)).
    const double r = collective::rabi_critical_g(p, 6, 0.75, 0.5) /
                     collective::rabi_critical_g(p, 6, 0.75, 0.25);
    REQUIRE(r == Catch::Approx(1.140175425099138).margin(1e-12));

    // A degenerate pair costs nothing to polarize.
    collective::RabiParams flat{1, 0.0, std::sqrt(10.0)};
    REQUIRE(collective::rabi_critical_g(flat, 6, 0.75, 0.25) == 0.0);

    REQUIRE_THROWS_AS(collective::rabi_critical_g({0, 1.0, 0.0}, 6, 0.75, 0.25),
                      std::invalid_argument);
}

TEST_CASE("sector diagonalization matches the ladder formulas for attraction") {
    const auto h = model::build_h_atom(homogeneous(5, -0.2));
    for (int n = 0; n <= 5; ++n) {
        const auto st = collective::lowest_state_in_sector(h, 5, n);
        REQUIRE(st.energy ==
                Catch::Approx(collective::omega_n_constant(5, n, 1.0, -0.2)).margin(1e-12));
        // For attractive exchange the sector ground is the symmetric state.
        const auto sym = collective::symmetric_state(5, n).embed();
        REQUIRE(std::abs(std::abs(sym.dot(st.embed())) - 1.0) < 1e-10);
    }
}

TEST_CASE("repulsive exchange pushes low-spin multiplets below the symmetric state") {
    // N = 4, v = +0.5, one excitation: the S = 1 multiplet at -omega_a - v
    // undercuts the symmetric level -omega_a + 3v.
    const auto h = model::build_h_atom(homogeneous(4, 0.5));
    const auto st = collective::lowest_state_in_sector(h, 4, 1);
    REQUIRE(st.energy == Catch::Approx(-1.5).margin(1e-12));
    REQUIRE(st.energy < collective::omega_n_constant(4, 1, 1.0, 0.5) - 1.0);
}

TEST_CASE("sector machinery rejects malformed operators") {
    OperatorMatrix h(Matrix::Zero(16, 16), true);
    REQUIRE_THROWS_AS(collective::lowest_state_in_sector(h, 3, 1), std::invalid_argument);

    Matrix mixing = Matrix::Zero(8, 8);
    mixing(0, 7) = 1.0;  // couples 0 and 3 excitations
    mixing(7, 0) = 1.0;
    REQUIRE_THROWS_AS(
        collective::lowest_state_in_sector(OperatorMatrix(mixing, true), 3, 1),
        std::invalid_argument);

    Matrix nonherm = Matrix::Zero(8, 8);
    nonherm(1, 2) = 1.0;
    REQUIRE_THROWS_AS(collective::lowest_state_in_sector(OperatorMatrix(nonherm), 3, 1),
                      std::invalid_argument);
}

TEST_CASE("numeric pair parameters reduce to the ladder formulas") {
    const auto h = model::build_h_atom(homogeneous(6, -0.25));
    for (int n = 0; n <= 4; ++n) {
        const auto numeric = collective::rabi_params_from_sectors(h, 6, n);
        const auto formula = collective::rabi_params(6, n, 1.0, -0.25);
        REQUIRE(numeric.delta == Catch::Approx(formula.delta).margin(1e-11));
        REQUIRE(numeric.eta == Catch::Approx(formula.eta).margin(1e-10));
    }
}

TEST_CASE("overlap with a sector pair") {
    const auto a = collective::symmetric_state(4, 1);
    const auto b = collective::symmetric_state(4, 2);
    REQUIRE(collective::overlap_pair(a.embed(), a, b) == Catch::Approx(1.0).margin(1e-13));
    // An equal mixture of the two lives entirely in their span.
    ops::Vector mix = (a.embed() + b.embed()) / std::sqrt(2.0);
    REQUIRE(collective::overlap_pair(mix, a, b) == Catch::Approx(1.0).margin(1e-13));
    // A state outside both sectors has no weight.
    const auto c = collective::symmetric_state(4, 4);
    REQUIRE(collective::overlap_pair(c.embed(), a, b) == Catch::Approx(0.0).margin(1e-14));

    ops::Vector unnormalized = 2.0 * a.embed();
    REQUIRE_THROWS_AS(collective::overlap_pair(unnormalized, a, b), std::invalid_argument);
    REQUIRE_THROWS_AS(collective::overlap_pair(a.embed(), a, collective::symmetric_state(5, 1)),
                      std::invalid_argument);
}

TEST_CASE("degeneracy scan finds the homogeneous crossings") {
    auto family = [](double v) { return model::build_h_atom(homogeneous(6, v)); };
    std::vector<double> grid;
    for (int i = 0; i <= 44; ++i) grid.push_back(-1.15 + i * 0.025);
    const auto events = collective::scan_degeneracies(family, 6, grid);

    REQUIRE(events.size() == 3);
    REQUIRE(events[0].param == Catch::Approx(-1.0).margin(2e-6));
    REQUIRE(events[0].sectors == std::vector<int>{2, 3});
    REQUIRE(events[1].param == Catch::Approx(-1.0 / 3.0).margin(2e-6));
    REQUIRE(events[1].sectors == std::vector<int>{1, 2});
    REQUIRE(events[2].param == Catch::Approx(-0.2).margin(2e-6));
    REQUIRE(events[2].sectors == std::vector<int>{0, 1});

    // The same scan away from the crossings is empty.
    std::vector<double> quiet{-0.12, -0.1, -0.08, -0.06};
    REQUIRE(collective::scan_degeneracies(family, 6, quiet).empty());

    REQUIRE_THROWS_AS(collective::scan_degeneracies(family, 6, {0.1}), std::invalid_argument);
    REQUIRE_THROWS_AS(collective::scan_degeneracies(family, 6, {0.2, 0.1}),
                      std::invalid_argument);
}
