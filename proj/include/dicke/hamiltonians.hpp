// hamiltonians.hpp — interaction models and Hamiltonian builders: the full
// atom-cavity operator, the mean-field (coherently displaced) atomic
// operator, and reduced representations on the symmetric excitation ladder.
//
// All energies are measured in units of the atomic transition frequency
// omega_a unless a spec says otherwise; lengths entering the spatial models
// are measured in the lattice spacing r0 (itself given in micrometres when
// the van-der-Waals coefficients are).

#pragma once

#include "dicke/collective.hpp"
#include "dicke/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace dicke::model {

using ops::Complex;
using ops::HilbertLayout;
using ops::Matrix;
using ops::OperatorMatrix;

// ---- Interaction models -------------------------------------------------

// Identical dipole exchange v_dd between every atom pair.
struct ConstantDipole {
    double v_dd = 0.0;
};

// Dipolar exchange on a chain: v_dd / |j - k|^3 with v_dd the
// nearest-neighbour strength.
struct SpatialDipole {
    double v_dd = 0.0;
};

// Identical van-der-Waals shift v_pp between every excited pair
// (no exchange): v_pp P^up_j P^up_k.
struct AllToAllVdw {
    double v_pp = 0.0;
};

// Chain with both dipolar exchange and state-dependent van-der-Waals
// shifts.  c3 is in units of (energy x length^3), the c6 coefficients in
// (energy x length^6), and r0 is the lattice spacing in the same length
// unit, so couplings scale as c3/(r0 d)^3 and c6/(r0 d)^6 with d = |j - k|.
struct RealisticPotential {
    double c3 = 0.0;
    double c6_pp = 0.0;
    double c6_ss = 0.0;
    double c6_sp = 0.0;
    double r0 = 1.0;
};

using InteractionModel =
    std::variant<ConstantDipole, SpatialDipole, AllToAllVdw, RealisticPotential>;

// Couplings of one atom pair: `hop` multiplies the exchange term
// sigma^-_j sigma^+_k + h.c., the others multiply projector products
// P^up P^up, P^down P^down and P^up P^down + P^down P^up.
struct PairCouplings {
    double hop = 0.0;
    double pp = 0.0;
    double ss = 0.0;
    double sp = 0.0;
};

inline PairCouplings pair_couplings(const InteractionModel& model, int j, int k) {
    if (j == k) throw std::invalid_argument("pair_couplings: atoms must be distinct");
    const double d = std::abs(j - k);
    PairCouplings c;
    if (const auto* cd = std::get_if<ConstantDipole>(&model)) {
        c.hop = cd->v_dd;
    } else if (const auto* sd = std::get_if<SpatialDipole>(&model)) {
        c.hop = sd->v_dd / (d * d * d);
    } else if (const auto* vw = std::get_if<AllToAllVdw>(&model)) {
        c.pp = vw->v_pp;
    } else if (const auto* rp = std::get_if<RealisticPotential>(&model)) {
        if (rp->r0 <= 0) throw std::invalid_argument("pair_couplings: r0 must be positive");
        const double r3 = std::pow(rp->r0 * d, 3);
        const double r6 = r3 * r3;
        c.hop = rp->c3 / r3;
        c.pp = rp->c6_pp / r6;
        c.ss = rp->c6_ss / r6;
        c.sp = rp->c6_sp / r6;
    }
    return c;
}

// Magnitude of the strongest pair coupling; used in time-step heuristics.
inline double interaction_scale(const InteractionModel& model) {
    const PairCouplings c = pair_couplings(model, 1, 2);
    return std::max({std::abs(c.hop), std::abs(c.pp), std::abs(c.ss), std::abs(c.sp)});
}

inline bool is_homogeneous_dipole(const InteractionModel& model) {
    return std::holds_alternative<ConstantDipole>(model);
}

// ---- Model specification ------------------------------------------------

struct ModelSpec {
    int n_atoms = 6;
    double omega_a = 1.0;                       // atomic splitting (energy unit)
    double omega_c = 0.75;                      // cavity frequency
    double kappa = 0.25;                        // cavity decay rate
    double coupling_g = 0.0;                    // atom-cavity coupling G
    InteractionModel interaction = ConstantDipole{};

    void validate() const {
        if (n_atoms < 1 || n_atoms > 24)
            throw std::invalid_argument("ModelSpec: n_atoms must be in [1, 24]");
        if (!(omega_a > 0)) throw std::invalid_argument("ModelSpec: omega_a must be positive");
        if (!(omega_c > 0)) throw std::invalid_argument("ModelSpec: omega_c must be positive");
        if (kappa < 0) throw std::invalid_argument("ModelSpec: kappa must be non-negative");
        if (coupling_g < 0)
            throw std::invalid_argument("ModelSpec: coupling_g must be non-negative");
        if (const auto* rp = std::get_if<RealisticPotential>(&interaction))
            if (rp->r0 <= 0) throw std::invalid_argument("ModelSpec: r0 must be positive");
    }

    // Prefactor of the light-matter term: sqrt(2/N) G multiplies
    // (a^dag + a) sum_j sigma_j^x.
    double coupling_prefactor() const { return std::sqrt(2.0 / n_atoms) * coupling_g; }
};

// ---- Atomic Hamiltonian -------------------------------------------------

// Two algebraically different (but spectrally related) forms of the
// homogeneous-exchange atomic Hamiltonian:
//   PairwiseHops     (omega_a/2) sum sigma^z + pairwise couplings
//   CollectiveLadder omega_a S^z + v_dd S^+ S^-
// They differ by v_dd x (total excitation number); only the first supports
// inhomogeneous models.
enum class AtomicForm { PairwiseHops, CollectiveLadder };

inline OperatorMatrix build_h_atom(const ModelSpec& spec,
                                   AtomicForm form = AtomicForm::PairwiseHops) {
    spec.validate();
    const int n = spec.n_atoms;
    const int dim = 1 << n;
    if (dim > ops::kMaxDenseDim)
        throw std::invalid_argument("build_h_atom: atomic space too large for dense form");

    if (form == AtomicForm::CollectiveLadder) {
        if (!is_homogeneous_dipole(spec.interaction))
            throw std::invalid_argument(
                "build_h_atom: the collective-ladder form requires homogeneous dipole exchange");
        const double v = std::get<ConstantDipole>(spec.interaction).v_dd;
        HilbertLayout atoms{n, 0};
        const Matrix sz = ops::collective_spin(atoms, ops::Collective::Z).m;
        const Matrix sp = ops::collective_spin(atoms, ops::Collective::Plus).m;
        Matrix h = spec.omega_a * sz + v * (sp * sp.adjoint());
        return OperatorMatrix(std::move(h), true);
    }

    Matrix h = Matrix::Zero(dim, dim);
    // Diagonal: Zeeman term plus projector-product shifts.
    for (int a = 0; a < dim; ++a) {
        const int exc = HilbertLayout::excitation(a);
        double e = 0.5 * spec.omega_a * (2 * exc - n);
        for (int j = 1; j < n; ++j) {
            for (int k = j + 1; k <= n; ++k) {
                const PairCouplings c = pair_couplings(spec.interaction, j, k);
                if (c.pp == 0 && c.ss == 0 && c.sp == 0) continue;
                const int bj = (a >> (n - j)) & 1;
                const int bk = (a >> (n - k)) & 1;
                if (bj && bk) e += c.pp;
                else if (!bj && !bk) e += c.ss;
                else e += c.sp;
            }
        }
        h(a, a) = e;
    }
    // Off-diagonal: excitation exchange within each pair.
    for (int j = 1; j < n; ++j) {
        for (int k = j + 1; k <= n; ++k) {
            const double hop = pair_couplings(spec.interaction, j, k).hop;
            if (hop == 0) continue;
            const int mj = 1 << (n - j);
            const int mk = 1 << (n - k);
            for (int a = 0; a < dim; ++a) {
                const bool bj = a & mj, bk = a & mk;
                if (bj == bk) continue;
                h(a ^ mj ^ mk, a) += hop;
            }
        }
    }
    return OperatorMatrix(std::move(h), true);
}

// ---- Full atom-cavity Hamiltonian --------------------------------------

// H = H_atom + omega_c a^dag a + sqrt(2/N) G (a^dag + a) sum_j sigma_j^x.
// The counter-rotating part of the coupling is kept in full.
inline OperatorMatrix build_h_full(const ModelSpec& spec, const HilbertLayout& layout,
                                   AtomicForm form = AtomicForm::PairwiseHops) {
    spec.validate();
    layout.validate();
    if (layout.n_atoms != spec.n_atoms)
        throw std::invalid_argument("build_h_full: layout atom count differs from spec");
    ops::require_dense(layout);

    const OperatorMatrix h_at = build_h_atom(spec, form);
    Matrix h = ops::embed_atomic(layout, h_at).m;
    const ops::PhotonOps ph = ops::photon_ops(layout);
    h += spec.omega_c * ph.number.m;
    if (spec.coupling_g != 0 && layout.photon_cutoff >= 1) {
        const Matrix quad = ph.annihilate.m + ph.create.m;
        const Matrix sx2 = 2.0 * ops::collective_spin(layout, ops::Collective::X).m;
        h += spec.coupling_prefactor() * (quad * sx2);
    }
    return OperatorMatrix(std::move(h), true);
}

// ---- Mean-field atomic Hamiltonian -------------------------------------

// Atomic Hamiltonian in the presence of a coherent cavity amplitude alpha:
// H_MF = H_atom + sqrt(2/N) G (alpha + alpha*) sum_j sigma_j^x.  The purely
// scalar cavity contribution omega_c |alpha|^2 is reported separately so
// state-independent energy bookkeeping stays explicit.
struct DisplacedAtomicHamiltonian {
    OperatorMatrix op;
    double cavity_energy = 0.0;
};

inline DisplacedAtomicHamiltonian build_h_meanfield(const ModelSpec& spec, Complex alpha) {
    spec.validate();
    DisplacedAtomicHamiltonian out;
    const OperatorMatrix h_at = build_h_atom(spec);
    HilbertLayout atoms{spec.n_atoms, 0};
    const Matrix sx2 = 2.0 * ops::collective_spin(atoms, ops::Collective::X).m;
    Matrix h = h_at.m + (spec.coupling_prefactor() * 2.0 * alpha.real()) * sx2;
    out.op = OperatorMatrix(std::move(h), true);
    out.cavity_energy = spec.omega_c * std::norm(alpha);
    return out;
}

// ---- Symmetric-ladder representation ------------------------------------

// Coupling operator S^x restricted to the symmetric excitation ladder
// |psi_0> ... |psi_nc>: tridiagonal with elements eta_n / 2.
inline OperatorMatrix coupling_sx_symmetric(int n_atoms, int n_cut) {
    if (n_cut < 1 || n_cut > n_atoms)
        throw std::invalid_argument("coupling_sx_symmetric: ladder cutoff out of range");
    Matrix x = Matrix::Zero(n_cut + 1, n_cut + 1);
    for (int n = 0; n < n_cut; ++n) {
        const double e = 0.5 * collective::eta_n(n_atoms, n);
        x(n + 1, n) = e;
        x(n, n + 1) = e;
    }
    return OperatorMatrix(std::move(x), true);
}

// S^x of a two-level sector pair with transition strength eta.
inline OperatorMatrix coupling_sx_pair(double eta) {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 0.5 * eta;
    x(1, 0) = 0.5 * eta;
    return OperatorMatrix(std::move(x), true);
}

// Full light-matter Hamiltonian projected onto the symmetric excitation
// ladder truncated at n_cut, with photon states |0>..|photon_cutoff>.
// Basis index = n * (photon_cutoff + 1) + m.  Exact for homogeneous
// exchange whenever the dynamics starts inside the symmetric sector.
inline OperatorMatrix build_h_symmetric_subspace(const ModelSpec& spec, int n_cut,
                                                 int photon_cutoff) {
    spec.validate();
    if (!is_homogeneous_dipole(spec.interaction))
        throw std::invalid_argument(
            "build_h_symmetric_subspace: requires homogeneous dipole exchange");
    if (n_cut < 1 || n_cut > spec.n_atoms)
        throw std::invalid_argument("build_h_symmetric_subspace: ladder cutoff out of range");
    if (photon_cutoff < 1)
        throw std::invalid_argument("build_h_symmetric_subspace: photon_cutoff must be >= 1");
    const double v = std::get<ConstantDipole>(spec.interaction).v_dd;
    const int pd = photon_cutoff + 1;
    const int dim = (n_cut + 1) * pd;
    Matrix h = Matrix::Zero(dim, dim);
    auto at = [pd](int n, int m) { return n * pd + m; };
    for (int n = 0; n <= n_cut; ++n) {
        const double wn = collective::omega_n_constant(spec.n_atoms, n, spec.omega_a, v);
        for (int m = 0; m < pd; ++m) h(at(n, m), at(n, m)) = wn + spec.omega_c * m;
    }
    const double pre = spec.coupling_prefactor();
    for (int n = 0; n < n_cut; ++n) {
        const double eta = collective::eta_n(spec.n_atoms, n);
        for (int m = 0; m < pd; ++m) {
            // (a^dag + a) matrix elements between |m> and |m ± 1>.
            if (m + 1 < pd) {
                const double amp = pre * eta * std::sqrt(double(m + 1));
                h(at(n + 1, m + 1), at(n, m)) += amp;
                h(at(n, m), at(n + 1, m + 1)) += amp;
            }
            if (m - 1 >= 0) {
                const double amp = pre * eta * std::sqrt(double(m));
                h(at(n + 1, m - 1), at(n, m)) += amp;
                h(at(n, m), at(n + 1, m - 1)) += amp;
            }
        }
    }
    return OperatorMatrix(std::move(h), true);
}

// ---- Two-level (sector-pair) representation -----------------------------

// Light-matter Hamiltonian of one near-degenerate sector pair: splitting
// delta, transition strength eta, full cavity mode retained.  Basis index
// = level * (photon_cutoff + 1) + m with level 0 the lower sector.
inline OperatorMatrix build_rabi(double delta, double eta, const ModelSpec& spec,
                                 int photon_cutoff) {
    spec.validate();
    if (photon_cutoff < 1) throw std::invalid_argument("build_rabi: photon_cutoff must be >= 1");
    if (eta <= 0) throw std::invalid_argument("build_rabi: eta must be positive");
    const int pd = photon_cutoff + 1;
    Matrix h = Matrix::Zero(2 * pd, 2 * pd);
    auto at = [pd](int lvl, int m) { return lvl * pd + m; };
    for (int m = 0; m < pd; ++m) {
        h(at(0, m), at(0, m)) = spec.omega_c * m;
        h(at(1, m), at(1, m)) = delta + spec.omega_c * m;
    }
    const double pre = spec.coupling_prefactor() * eta;
    for (int m = 0; m < pd; ++m) {
        if (m + 1 < pd) {
            const double amp = pre * std::sqrt(double(m + 1));
            h(at(1, m + 1), at(0, m)) += amp;
            h(at(0, m), at(1, m + 1)) += amp;
        }
        if (m - 1 >= 0) {
            const double amp = pre * std::sqrt(double(m));
            h(at(1, m - 1), at(0, m)) += amp;
            h(at(0, m), at(1, m - 1)) += amp;
        }
    }
    return OperatorMatrix(std::move(h), true);
}

}  // namespace dicke::model
