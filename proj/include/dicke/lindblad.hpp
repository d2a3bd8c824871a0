// lindblad.hpp — open-system dynamics of the atom-cavity model with photon
// loss:  d rho/dt = -i [H, rho] + kappa (2 a rho a^dag - a^dag a rho
// - rho a^dag a).  The generator is vectorized column-major,
//   L = -i (I ⊗ H - H^T ⊗ I) + kappa (2 conj(a) ⊗ a - I ⊗ a^dag a
//       - (a^dag a)^T ⊗ I),
// stored dense for small systems and sparse otherwise, and integrated with
// a fixed-step classical Runge-Kutta scheme.  All representations used here
// share a product basis index = atomic_like * (M + 1) + photon, so the
// photon operators are generated from the shape alone.

#pragma once

#include "dicke/collective.hpp"
#include "dicke/hamiltonians.hpp"
#include "dicke/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke::lindblad {

using ops::Complex;
using ops::Matrix;
using ops::OperatorMatrix;
using ops::Vector;

// ---- Product-space shape ------------------------------------------------

struct ProductShape {
    int atomic_dim = 1;     // dimension of the matter-like factor
    int photon_cutoff = 0;  // M

    int photon_dim() const { return photon_cutoff + 1; }
    int dim() const { return atomic_dim * photon_dim(); }

    void validate() const {
        if (atomic_dim < 1) throw std::invalid_argument("ProductShape: atomic_dim must be >= 1");
        if (photon_cutoff < 0)
            throw std::invalid_argument("ProductShape: photon_cutoff must be >= 0");
    }
};

inline Matrix annihilation(const ProductShape& s) {
    s.validate();
    Matrix a = Matrix::Zero(s.dim(), s.dim());
    const int pd = s.photon_dim();
    for (int at = 0; at < s.atomic_dim; ++at)
        for (int m = 1; m < pd; ++m) a(at * pd + m - 1, at * pd + m) = std::sqrt(double(m));
    return a;
}

inline Matrix photon_number_op(const ProductShape& s) {
    s.validate();
    Matrix n = Matrix::Zero(s.dim(), s.dim());
    const int pd = s.photon_dim();
    for (int at = 0; at < s.atomic_dim; ++at)
        for (int m = 0; m < pd; ++m) n(at * pd + m, at * pd + m) = m;
    return n;
}

inline Matrix top_fock_projector_op(const ProductShape& s) {
    s.validate();
    Matrix p = Matrix::Zero(s.dim(), s.dim());
    const int pd = s.photon_dim();
    for (int at = 0; at < s.atomic_dim; ++at)
        p(at * pd + pd - 1, at * pd + pd - 1) = 1.0;
    return p;
}

// ---- Density operators --------------------------------------------------

struct DensityOperator {
    Matrix rho;

    int dim() const { return static_cast<int>(rho.rows()); }
    double trace_defect() const { return std::abs(rho.trace() - Complex{1.0, 0.0}); }
    double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8) const {
        if (rho.rows() != rho.cols() || rho.rows() == 0)
            throw std::invalid_argument("DensityOperator: matrix must be square and non-empty");
        if (!(hermiticity_defect() < herm_tol))
            throw std::invalid_argument("DensityOperator: not hermitian");
        if (!(trace_defect() < trace_tol))
            throw std::invalid_argument("DensityOperator: trace differs from 1");
    }
};

inline DensityOperator pure_state(const Vector& psi) {
    const double n = psi.norm();
    if (!(std::abs(n - 1.0) < 1e-10))
        throw std::invalid_argument("pure_state: state vector is not normalized");
    DensityOperator d;
    d.rho = psi * psi.adjoint();
    return d;
}

// |0><0| in the product basis: everything in its lowest state (for the
// full representation this is |ss...s> ⊗ |vacuum>).
inline DensityOperator basis_ground(const ProductShape& s) {
    s.validate();
    DensityOperator d;
    d.rho = Matrix::Zero(s.dim(), s.dim());
    d.rho(0, 0) = 1.0;
    return d;
}

// ---- Vectorized generator -----------------------------------------------

struct LiouvillianOptions {
    int dense_max_dim = 45;    // densify when the density matrix is this small
    int max_dim = 512;         // refuse larger density matrices outright
    double drop_tol = 1e-15;   // magnitude below which H entries are ignored
};

class Liouvillian {
  public:
    int rho_dim = 0;
    bool dense = false;
    Matrix d;
    Eigen::SparseMatrix<Complex> s;

    long super_dim() const { return static_cast<long>(rho_dim) * rho_dim; }

    Vector apply(const Vector& v) const {
        if (v.size() != super_dim())
            throw std::invalid_argument("Liouvillian: vector length mismatch");
        return dense ? Vector(d * v) : Vector(s * v);
    }

    // Largest violation of trace preservation, max_j |sum_i L[(ii), j]|.
    // Exactly zero in exact arithmetic for any Lindblad generator.
    double trace_dual_defect() const {
        Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(super_dim());
        for (int i = 0; i < rho_dim; ++i) tr(static_cast<long>(i) * rho_dim + i) = 1.0;
        Eigen::RowVectorXcd r = dense ? Eigen::RowVectorXcd(tr * d) : Eigen::RowVectorXcd(tr * s);
        return r.cwiseAbs().maxCoeff();
    }
};

inline Liouvillian build_liouvillian(const OperatorMatrix& h, double kappa,
                                     const ProductShape& shape, LiouvillianOptions opt = {}) {
    shape.validate();
    if (h.dim() != shape.dim())
        throw std::invalid_argument("build_liouvillian: Hamiltonian does not match shape");
    if (!h.hermitian)
        throw std::invalid_argument("build_liouvillian: Hamiltonian must be hermitian-tagged");
    if (kappa < 0) throw std::invalid_argument("build_liouvillian: kappa must be >= 0");
    if (shape.dim() > opt.max_dim)
        throw std::invalid_argument(
            "build_liouvillian: density-matrix dimension " + std::to_string(shape.dim()) +
            " exceeds the limit " + std::to_string(opt.max_dim) +
            "; use a reduced representation (symmetric ladder) or lower the photon cutoff");

    const int n = shape.dim();
    const long nn = static_cast<long>(n) * n;
    const Matrix a = annihilation(shape);
    const Matrix num = photon_number_op(shape);

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(nn) * 8);
    auto add = [&](long r, long c, Complex val) {
        if (std::abs(val) > opt.drop_tol) trip.emplace_back(r, c, val);
    };
    // vec index of rho_{rc} (column-major) is r + c * n.
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            const long col = r + static_cast<long>(c) * n;
            // -i (H rho)_{rc}: couples to rho_{kc} via H_{rk}.
            for (int k = 0; k < n; ++k) {
                const Complex hv = h.m(r, k);
                if (std::abs(hv) > opt.drop_tol) add(col, k + static_cast<long>(c) * n, -ops::kI * hv);
            }
            // +i (rho H)_{rc}: couples to rho_{rk} via H_{kc}.
            for (int k = 0; k < n; ++k) {
                const Complex hv = h.m(k, c);
                if (std::abs(hv) > opt.drop_tol) add(col, r + static_cast<long>(k) * n, ops::kI * hv);
            }
            // Photon loss.  a is real with one sub-diagonal band per atomic
            // block; n_ph is diagonal.
            if (kappa > 0) {
                // 2 kappa (a rho a^dag)_{rc} = 2 kappa a_{r,r'} rho_{r'c'} conj(a)_{c,c'}
                const int pd = shape.photon_dim();
                const int r_m = r % pd, c_m = c % pd;
                if (r_m + 1 < pd && c_m + 1 < pd) {
                    const double amp = 2.0 * kappa * std::sqrt(double(r_m + 1)) *
                                       std::sqrt(double(c_m + 1));
                    add(col, (r + 1) + static_cast<long>(c + 1) * n, amp);
                }
                add(col, col, -kappa * (num(r, r).real() + num(c, c).real()));
            }
        }
    }

    Liouvillian L;
    L.rho_dim = n;
    if (n <= opt.dense_max_dim) {
        L.dense = true;
        L.d = Matrix::Zero(nn, nn);
        for (const auto& t : trip) L.d(t.row(), t.col()) += t.value();
    } else {
        L.dense = false;
        L.s.resize(nn, nn);
        L.s.setFromTriplets(trip.begin(), trip.end());
        L.s.makeCompressed();
    }
    return L;
}

// ---- Time stepping ------------------------------------------------------

struct Observable {
    std::string name;
    Matrix op;
};

struct EvolveOptions {
    double steady_tol = 1e-8;      // per-entry |d rho/dt| for early exit
    double trace_abort = 1e-6;     // |tr rho - 1| beyond which evolution aborts
    double record_growth = 1.25;   // geometric thinning of recorded times
    int hermitize_every = 200;     // restore rho = (rho + rho^dag)/2 periodically
    double positivity_tol = 1e-8;  // allowed negativity at record checks
    int positivity_max_dim = 128;  // skip the (cubic-cost) check above this
    bool keep_final_state = false;
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // values[k][i] = <O_k>(times[i])
    bool steady = false;         // early exit on a stationary state
    double final_residual = 0.0; // max |d rho/dt| entry at the last step
    double final_time = 0.0;
    long steps = 0;
    double max_trace_defect = 0.0;
    std::optional<DensityOperator> final_state;
};

inline EvolutionResult evolve(const DensityOperator& rho0, const Liouvillian& L, double t_final,
                              double dt, const std::vector<Observable>& observables,
                              EvolveOptions opt = {}) {
    rho0.validate();
    if (rho0.dim() != L.rho_dim)
        throw std::invalid_argument("evolve: state dimension does not match generator");
    if (!(dt > 0) || !(t_final > 0)) throw std::invalid_argument("evolve: need dt, t_final > 0");

    const int n = L.rho_dim;
    const long nn = L.super_dim();
    Vector v(nn);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) v[r + static_cast<long>(c) * n] = rho0.rho(r, c);

    // Observable weights: <O> = sum_{r,c} O_{cr} rho_{rc} = w^T vec(rho)
    // with w = vec(O^T).
    std::vector<Vector> weights;
    weights.reserve(observables.size());
    for (const auto& ob : observables) {
        if (ob.op.rows() != n || ob.op.cols() != n)
            throw std::invalid_argument("evolve: observable dimension mismatch");
        Vector w(nn);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) w[r + static_cast<long>(c) * n] = ob.op(c, r);
        weights.push_back(std::move(w));
    }

    EvolutionResult out;
    out.names.reserve(observables.size());
    for (const auto& ob : observables) out.names.push_back(ob.name);
    out.values.resize(observables.size());

    auto trace_of = [&](const Vector& vec) {
        Complex tr = 0;
        for (int i = 0; i < n; ++i) tr += vec[i + static_cast<long>(i) * n];
        return tr;
    };
    auto record = [&](double t, const Vector& vec) {
        out.times.push_back(t);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            const Complex val = weights[k].transpose() * vec;
            out.values[k].push_back(val.real());
        }
    };
    auto check_positivity = [&](const Vector& vec) {
        if (n > opt.positivity_max_dim) return;
        Matrix rho(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) rho(r, c) = vec[r + static_cast<long>(c) * n];
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        if (lo < -opt.positivity_tol)
            throw std::runtime_error("evolve: density matrix lost positivity (min eigenvalue " +
                                     std::to_string(lo) + ")");
    };

    const long total_steps = static_cast<long>(std::ceil(t_final / dt));
    long next_record = 0;
    record(0.0, v);
    check_positivity(v);
    next_record = 1;

    Vector k1(nn), k2(nn), k3(nn), k4(nn), tmp(nn);
    for (long step = 0; step < total_steps; ++step) {
        k1 = L.apply(v);
        out.final_residual = k1.cwiseAbs().maxCoeff();
        if (out.final_residual < opt.steady_tol) {
            out.steady = true;
            out.final_time = step * dt;
            if (out.times.empty() || out.times.back() != out.final_time)
                record(out.final_time, v);
            break;
        }
        tmp = v + (0.5 * dt) * k1;
        k2 = L.apply(tmp);
        tmp = v + (0.5 * dt) * k2;
        k3 = L.apply(tmp);
        tmp = v + dt * k3;
        k4 = L.apply(tmp);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++out.steps;
        out.final_time = (step + 1) * dt;

        const double trace_defect = std::abs(trace_of(v) - Complex{1.0, 0.0});
        out.max_trace_defect = std::max(out.max_trace_defect, trace_defect);
        if (trace_defect > opt.trace_abort)
            throw std::runtime_error("evolve: trace drifted by " + std::to_string(trace_defect) +
                                     "; reduce dt or raise the photon cutoff");

        if (opt.hermitize_every > 0 && (step + 1) % opt.hermitize_every == 0) {
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < c; ++r) {
                    const long irc = r + static_cast<long>(c) * n;
                    const long icr = c + static_cast<long>(r) * n;
                    const Complex avg = 0.5 * (v[irc] + std::conj(v[icr]));
                    v[irc] = avg;
                    v[icr] = std::conj(avg);
                }
            for (int i = 0; i < n; ++i) {
                const long ii = i + static_cast<long>(i) * n;
                v[ii] = Complex{v[ii].real(), 0.0};
            }
        }

        if (step + 1 == next_record || step + 1 == total_steps) {
            record(out.final_time, v);
            check_positivity(v);
            next_record = std::max(next_record + 1,
                                   static_cast<long>(std::ceil(next_record * opt.record_growth)));
        }
    }

    if (opt.keep_final_state) {
        DensityOperator fin;
        fin.rho.resize(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) fin.rho(r, c) = v[r + static_cast<long>(c) * n];
        out.final_state = std::move(fin);
    }
    return out;
}

// ---- Protocol helpers ---------------------------------------------------

// Conservative fixed step: resolves the fastest frequency in the problem.
inline double suggested_dt(const model::ModelSpec& spec) {
    spec.validate();
    const double fastest = std::max({spec.omega_c, spec.omega_a,
                                     model::interaction_scale(spec.interaction) * spec.n_atoms,
                                     spec.kappa});
    return 0.01 / fastest;
}

// Smallest splitting between the lowest states of adjacent excitation
// sectors; near-degenerate sectors relax slowly and need longer horizons.
inline double min_adjacent_sector_gap(const model::ModelSpec& spec) {
    const OperatorMatrix h = model::build_h_atom(spec);
    double gap = std::numeric_limits<double>::infinity();
    std::vector<double> e(spec.n_atoms + 1);
    for (int n = 0; n <= spec.n_atoms; ++n)
        e[n] = collective::sector_minimum(h, spec.n_atoms, n);
    for (int n = 0; n < spec.n_atoms; ++n) gap = std::min(gap, std::abs(e[n + 1] - e[n]));
    return gap;
}

// Horizon max(50/kappa, 20/gap), clamped to t_cap so exact degeneracies
// (gap -> 0) stay finite; the steady-state residual exit usually ends the
// integration earlier.
inline double suggested_t_final(const model::ModelSpec& spec, double t_cap = 400.0) {
    spec.validate();
    if (spec.kappa <= 0)
        throw std::invalid_argument("suggested_t_final: kappa must be positive");
    const double gap = min_adjacent_sector_gap(spec);
    double t = 50.0 / spec.kappa;
    if (gap > 0) t = std::max(t, 20.0 / gap);
    return std::min(t, t_cap);
}

// ---- Photon-cutoff convergence ------------------------------------------

enum class Representation { Full, SymmetricLadder };

struct CutoffEntry {
    int photon_cutoff = 0;
    double photon = 0.0;      // <a^dag a> at the end of the run
    double tail = 0.0;        // population of the top Fock state
    double final_time = 0.0;
    bool steady = false;
};

struct CutoffStudy {
    std::vector<CutoffEntry> entries;
    std::optional<int> chosen;  // smallest cutoff meeting both tolerances
    double rel_tol = 0.01;
    double tail_tol = 1e-6;
};

// Dissipative evolution from the lowest product state for a ladder of
// photon cutoffs; the chosen cutoff is the first whose photon number agrees
// with the previous entry to rel_tol while the top Fock state stays empty.
inline CutoffStudy photon_cutoff_convergence(const model::ModelSpec& spec, Representation rep,
                                             const std::vector<int>& cutoffs, double t_final = 0,
                                             double dt = 0, EvolveOptions opt = {},
                                             double rel_tol = 0.01, double tail_tol = 1e-6,
                                             LiouvillianOptions lopt = {}) {
    spec.validate();
    if (cutoffs.size() < 2)
        throw std::invalid_argument("photon_cutoff_convergence: need at least two cutoffs");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("photon_cutoff_convergence: cutoffs must increase");
    if (t_final <= 0) t_final = suggested_t_final(spec);
    if (dt <= 0) dt = suggested_dt(spec);

    CutoffStudy study;
    study.rel_tol = rel_tol;
    study.tail_tol = tail_tol;
    for (int m : cutoffs) {
        ProductShape shape;
        OperatorMatrix h;
        if (rep == Representation::SymmetricLadder) {
            shape = ProductShape{spec.n_atoms + 1, m};
            h = model::build_h_symmetric_subspace(spec, spec.n_atoms, m);
        } else {
            ops::HilbertLayout layout{spec.n_atoms, m};
            shape = ProductShape{layout.atomic_dim(), m};
            h = model::build_h_full(spec, layout);
        }
        std::vector<Observable> obs{{"photon", photon_number_op(shape)},
                                    {"tail", top_fock_projector_op(shape)}};
        const EvolutionResult r = evolve(basis_ground(shape),
                                         build_liouvillian(h, spec.kappa, shape, lopt),
                                         t_final, dt, obs, opt);
        CutoffEntry e;
        e.photon_cutoff = m;
        e.photon = r.values[0].back();
        e.tail = r.values[1].back();
        e.final_time = r.final_time;
        e.steady = r.steady;
        study.entries.push_back(e);
    }
    for (std::size_t i = 1; i < study.entries.size(); ++i) {
        const double prev = study.entries[i - 1].photon;
        const double cur = study.entries[i].photon;
        const double denom = std::max(std::abs(cur), 1e-12);
        if (std::abs(cur - prev) / denom < rel_tol && study.entries[i].tail < tail_tol) {
            study.chosen = study.entries[i].photon_cutoff;
            break;
        }
    }
    return study;
}

}  // namespace dicke::lindblad
