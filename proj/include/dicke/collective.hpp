// collective.hpp — excitation-number sectors of the atomic Hilbert space:
// lowest collective states |psi_n>, their energies and transition strengths,
// degeneracy scans over a model parameter, and the reduced two-level
// (qubit-like) description of a near-degenerate sector pair.
//
// The atomic Hamiltonians in this library conserve the total excitation
// number sum_j (sigma_j^z + 1)/2, so their spectra split into sectors of
// fixed n.  |psi_n> denotes the lowest eigenstate within sector n.

#pragma once

#include "dicke/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace dicke::collective {

using ops::Complex;
using ops::Matrix;
using ops::OperatorMatrix;
using ops::Vector;

// Absolute tolerance on matrix elements that must vanish for an operator to
// be block-diagonal in the excitation sectors.
inline constexpr double kSectorTol = 1e-12;

// ---- Combinatorics and sector indexing ---------------------------------

inline unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 62) throw std::invalid_argument("binomial: n too large");
    unsigned long long r = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Ascending list of atomic bit patterns with exactly n excited atoms.
inline std::vector<int> sector_indices(int n_atoms, int n) {
    if (n_atoms < 1 || n_atoms > 24)
        throw std::invalid_argument("sector_indices: n_atoms out of range");
    if (n < 0 || n > n_atoms)
        throw std::invalid_argument("sector_indices: excitation number out of range");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(binomial(n_atoms, n)));
    for (int a = 0; a < (1 << n_atoms); ++a)
        if (ops::HilbertLayout::excitation(a) == n) out.push_back(a);
    return out;
}

// ---- Collective states --------------------------------------------------

// Lowest eigenstate of an excitation sector, stored compressed: amplitudes
// are listed in the order produced by sector_indices(n_atoms, n).
struct CollectiveState {
    int n_atoms = 0;
    int n = 0;            // excitation number of the sector
    Vector amplitudes;    // length binomial(n_atoms, n), unit norm
    double energy = 0.0;  // eigenvalue in the atomic Hamiltonian used

    // Expand into the full 2^n_atoms atomic space.
    Vector embed() const {
        Vector full = Vector::Zero(1 << n_atoms);
        const auto idx = sector_indices(n_atoms, n);
        if (static_cast<Eigen::Index>(idx.size()) != amplitudes.size())
            throw std::runtime_error("CollectiveState: amplitude count does not match sector");
        for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = amplitudes[k];
        return full;
    }
};

// Permutation-symmetric state with n excitations (the Dicke state of the
// maximal-spin ladder), uniform over all configurations of the sector.
inline CollectiveState symmetric_state(int n_atoms, int n) {
    CollectiveState st;
    st.n_atoms = n_atoms;
    st.n = n;
    const auto d = binomial(n_atoms, n);
    st.amplitudes = Vector::Constant(static_cast<Eigen::Index>(d), 1.0 / std::sqrt(double(d)));
    return st;
}

// ---- Homogeneous-interaction ladder formulas ---------------------------

// Energy of the symmetric n-excitation state for homogeneous dipole
// exchange of strength v_dd:  omega_n = -(N/2 - n) omega_a + n (N - n) v_dd.
inline double omega_n_constant(int n_atoms, int n, double omega_a, double v_dd) {
    if (n < 0 || n > n_atoms) throw std::invalid_argument("omega_n_constant: n out of range");
    return -(0.5 * n_atoms - n) * omega_a + double(n) * (n_atoms - n) * v_dd;
}

// Interaction strength at which the symmetric levels n and n+1 become
// degenerate: v = -omega_a / (N - 2n - 1).  Undefined (no finite crossing)
// when the denominator vanishes.
inline std::optional<double> critical_vdd(int n_atoms, int n, double omega_a) {
    if (n < 0 || n >= n_atoms) throw std::invalid_argument("critical_vdd: n out of range");
    const int denom = n_atoms - 2 * n - 1;
    if (denom == 0) return std::nullopt;
    return -omega_a / double(denom);
}

// Collective transition strength <psi_{n+1}| 2 S^x |psi_n> between adjacent
// symmetric states: eta_n = sqrt((N - n)(n + 1)).
inline double eta_n(int n_atoms, int n) {
    if (n < 0 || n >= n_atoms) throw std::invalid_argument("eta_n: n out of range");
    return std::sqrt(double(n_atoms - n) * double(n + 1));
}

// ---- Reduced two-level description of a sector pair --------------------

struct RabiParams {
    int n = 0;          // lower sector of the pair (n, n+1)
    double delta = 0;   // energy splitting omega_{n+1} - omega_n
    double eta = 0;     // transition strength <psi_{n+1}| 2 S^x |psi_n>
};

inline RabiParams rabi_params(int n_atoms, int n, double omega_a, double v_dd) {
    RabiParams p;
    p.n = n;
    p.delta = omega_n_constant(n_atoms, n + 1, omega_a, v_dd) -
              omega_n_constant(n_atoms, n, omega_a, v_dd);
    p.eta = eta_n(n_atoms, n);
    return p;
}

// Critical atom-cavity coupling of the reduced two-level model coupled to a
// lossy mode:  g_c = (1 / 2 eta) sqrt( (N |delta| / 2) (omega_c^2 + kappa^2)
// / omega_c ).  Vanishes exactly at a sector degeneracy (delta = 0).
inline double rabi_critical_g(const RabiParams& p, int n_atoms, double omega_c, double kappa) {
    if (omega_c <= 0) throw std::invalid_argument("rabi_critical_g: omega_c must be positive");
    if (p.eta <= 0) throw std::invalid_argument("rabi_critical_g: eta must be positive");
    const double lamb2 =
        0.5 * n_atoms * std::abs(p.delta) * (omega_c * omega_c + kappa * kappa) / omega_c;
    return std::sqrt(lamb2) / (2.0 * p.eta);
}

// ---- Sector diagonalization --------------------------------------------

// Largest matrix element of h connecting different excitation sectors.
// Zero (to rounding) for every interaction model in this library.
inline double sector_mixing_defect(const OperatorMatrix& h, int n_atoms) {
    if (h.dim() != (1 << n_atoms))
        throw std::invalid_argument("sector_mixing_defect: dimension mismatch");
    double defect = 0;
    for (int a = 0; a < h.dim(); ++a)
        for (int b = 0; b < h.dim(); ++b)
            if (ops::HilbertLayout::excitation(a) != ops::HilbertLayout::excitation(b))
                defect = std::max(defect, std::abs(h.m(a, b)));
    return defect;
}

// Lowest eigenstate of the n-excitation sector of an atomic Hamiltonian.
// Rejects operators that are not hermitian or that mix sectors.
inline CollectiveState lowest_state_in_sector(const OperatorMatrix& h_atom, int n_atoms, int n) {
    if (h_atom.dim() != (1 << n_atoms))
        throw std::invalid_argument("lowest_state_in_sector: dimension mismatch");
    if (!h_atom.hermitian && !(h_atom.hermiticity_defect() < ops::kHermTol))
        throw std::invalid_argument("lowest_state_in_sector: operator is not hermitian");
    const auto idx = sector_indices(n_atoms, n);
    const double mix = sector_mixing_defect(h_atom, n_atoms);
    if (!(mix < kSectorTol))
        throw std::invalid_argument(
            "lowest_state_in_sector: operator mixes excitation sectors (defect " +
            std::to_string(mix) + ")");

    Matrix block(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) block(r, c) = h_atom.m(idx[r], idx[c]);

    CollectiveState st;
    st.n_atoms = n_atoms;
    st.n = n;
    if (idx.size() == 1) {
        st.amplitudes = Vector::Ones(1);
        st.energy = block(0, 0).real();
        return st;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("lowest_state_in_sector: eigensolver failed");
    st.energy = es.eigenvalues()[0];
    st.amplitudes = es.eigenvectors().col(0);
    return st;
}

inline double sector_minimum(const OperatorMatrix& h_atom, int n_atoms, int n) {
    return lowest_state_in_sector(h_atom, n_atoms, n).energy;
}

// Splitting and transition strength of a sector pair (n, n+1) computed
// numerically from an arbitrary excitation-conserving atomic Hamiltonian.
// Reduces to rabi_params(...) for the homogeneous model.
inline RabiParams rabi_params_from_sectors(const OperatorMatrix& h_atom, int n_atoms, int n) {
    const CollectiveState lo = lowest_state_in_sector(h_atom, n_atoms, n);
    const CollectiveState hi = lowest_state_in_sector(h_atom, n_atoms, n + 1);
    ops::HilbertLayout atoms{n_atoms, 0};
    const OperatorMatrix sx = ops::collective_spin(atoms, ops::Collective::X);
    const Complex elem = hi.embed().dot(2.0 * (sx.m * lo.embed()));
    RabiParams p;
    p.n = n;
    p.delta = hi.energy - lo.energy;
    p.eta = std::abs(elem);
    return p;
}

// ---- Overlap diagnostics ------------------------------------------------

// Squared overlap of a full atomic state with the two-dimensional span of a
// sector pair: |<a|psi>|^2 + |<b|psi>|^2.  States must be unit-normalized.
inline double overlap_pair(const Vector& psi, const CollectiveState& a, const CollectiveState& b) {
    if (a.n_atoms != b.n_atoms)
        throw std::invalid_argument("overlap_pair: states from different systems");
    if (psi.size() != (Eigen::Index{1} << a.n_atoms))
        throw std::invalid_argument("overlap_pair: state dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("overlap_pair: input state is not normalized");
    const Vector va = a.embed();
    const Vector vb = b.embed();
    if (std::abs(va.norm() - 1.0) > 1e-8 || std::abs(vb.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("overlap_pair: collective state is not normalized");
    return std::norm(va.dot(psi)) + std::norm(vb.dot(psi));
}

// ---- Degeneracy scan ----------------------------------------------------

// A point where the lowest states of adjacent sectors (n, n+1) cross and
// the crossing happens at (or within eps_ground of) the atomic ground level.
// `sectors` lists all sectors degenerate at the event within eps_deg, so a
// triple crossing reports three entries.
struct DegeneracyEvent {
    double param = 0;          // refined crossing location
    std::vector<int> sectors;  // ascending, at least {n, n+1}
    double energy = 0;         // common energy at the crossing
};

struct DegeneracyScanOptions {
    double eps_deg = 1e-4;       // energy window for grouping extra sectors
    double refine_tol = 1e-6;    // bisection tolerance on the parameter
    double eps_ground = 1e-6;    // how far above the global minimum a
                                 // crossing may sit and still count
    bool ground_only = true;     // keep only crossings at the ground level
};

// Scan a one-parameter family of atomic Hamiltonians for adjacent-sector
// ground-level crossings.  `h_atom_at` must return the 2^n_atoms operator
// for a given parameter value; `grid` must be strictly increasing.
inline std::vector<DegeneracyEvent> scan_degeneracies(
    const std::function<OperatorMatrix(double)>& h_atom_at, int n_atoms,
    const std::vector<double>& grid, DegeneracyScanOptions opt = {}) {
    if (grid.size() < 2) throw std::invalid_argument("scan_degeneracies: grid needs >= 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("scan_degeneracies: grid must be strictly increasing");

    auto minima = [&](double x) {
        const OperatorMatrix h = h_atom_at(x);
        std::vector<double> e(n_atoms + 1);
        for (int n = 0; n <= n_atoms; ++n) e[n] = sector_minimum(h, n_atoms, n);
        return e;
    };

    std::vector<std::vector<double>> table(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) table[i] = minima(grid[i]);

    std::vector<DegeneracyEvent> events;
    for (int n = 0; n < n_atoms; ++n) {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double da = table[i][n + 1] - table[i][n];
            const double db = table[i + 1][n + 1] - table[i + 1][n];
            if (da == 0.0 && db == 0.0) continue;  // degenerate plateau, not a crossing
            double x;
            if (da == 0.0) {
                x = grid[i];  // crossing sits exactly on a grid node
            } else if (da * db < 0.0) {
                double lo = grid[i], hi = grid[i + 1], flo = da;
                while (hi - lo > opt.refine_tol) {
                    const double mid = 0.5 * (lo + hi);
                    const auto em = minima(mid);
                    const double fm = em[n + 1] - em[n];
                    if (fm == 0.0) { lo = hi = mid; break; }
                    if ((flo < 0) == (fm < 0)) { lo = mid; flo = fm; } else { hi = mid; }
                }
                x = 0.5 * (lo + hi);
            } else {
                continue;
            }
            const auto e = minima(x);
            const double level = 0.5 * (e[n] + e[n + 1]);
            const double global_min = *std::min_element(e.begin(), e.end());
            if (opt.ground_only && level > global_min + opt.eps_ground) continue;

            DegeneracyEvent ev;
            ev.param = x;
            ev.energy = level;
            for (int m = 0; m <= n_atoms; ++m)
                if (std::abs(e[m] - level) < opt.eps_deg) ev.sectors.push_back(m);
            if (ev.sectors.size() < 2) ev.sectors = {n, n + 1};

            // Merge with an event already found at the same location (a
            // triple crossing is seen by two adjacent pairs).
            bool merged = false;
            for (auto& prev : events) {
                if (std::abs(prev.param - x) < 10 * opt.refine_tol &&
                    std::abs(prev.energy - level) < opt.eps_deg) {
                    std::vector<int> u(prev.sectors);
                    u.insert(u.end(), ev.sectors.begin(), ev.sectors.end());
                    std::sort(u.begin(), u.end());
                    u.erase(std::unique(u.begin(), u.end()), u.end());
                    prev.sectors = std::move(u);
                    merged = true;
                    break;
                }
            }
            if (!merged) events.push_back(std::move(ev));
        }
    }
    std::sort(events.begin(), events.end(),
              [](const DegeneracyEvent& a, const DegeneracyEvent& b) { return a.param < b.param; });
    return events;
}

}  // namespace dicke::collective
