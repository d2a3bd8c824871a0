// operators.hpp — Pauli, collective-spin, and truncated photon operators on the
// two-level-atom ⊗ cavity product space.
//
// Conventions used throughout the library:
//   * each atom is a two-level system with ground |s> and excited |p>;
//     sigma^+ = |p><s|, sigma^- = |s><p|, sigma^z = |p><p| - |s><s|.
//   * collective spin components S^beta = sum_j sigma_j^beta / 2 for
//     beta in {x,y,z}; collective ladder S^± = sum_j sigma_j^± (no 1/2).
//   * basis ordering: atom 1 is the leftmost tensor factor, the photon mode
//     the rightmost.  Atomic configurations are indexed by bit patterns where
//     bit (N - j) of the index is 1 when atom j is in |p>.  A full-space
//     basis index is  atomic_index * (M + 1) + photon_index,  so index 0 is
//     |ss...s> ⊗ |0>.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace dicke::ops {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Largest dimension for which dense operator construction is allowed.  A
// dense complex matrix of this size occupies ~256 MB; anything bigger is a
// usage error (use the collective-subspace representations instead).
inline constexpr int kMaxDenseDim = 4096;

// Hermiticity tagging tolerance: max |A - A^dag| entry allowed for an
// operator that claims to be hermitian.
inline constexpr double kHermTol = 1e-12;

// ---- Hilbert-space layout ----------------------------------------------

struct HilbertLayout {
    int n_atoms = 1;
    int photon_cutoff = 0;  // M; photon_cutoff == 0 keeps only the vacuum

    int atomic_dim() const { return 1 << n_atoms; }
    int photon_dim() const { return photon_cutoff + 1; }
    long dim() const { return static_cast<long>(atomic_dim()) * photon_dim(); }

    void validate() const {
        if (n_atoms < 1 || n_atoms > 24)
            throw std::invalid_argument("HilbertLayout: n_atoms must be in [1, 24], got " +
                                        std::to_string(n_atoms));
        if (photon_cutoff < 0)
            throw std::invalid_argument("HilbertLayout: photon_cutoff must be >= 0, got " +
                                        std::to_string(photon_cutoff));
    }

    // Index helpers for the product ordering documented above.
    long index(int atomic, int photon) const {
        return static_cast<long>(atomic) * photon_dim() + photon;
    }
    int atomic_part(long idx) const { return static_cast<int>(idx / photon_dim()); }
    int photon_part(long idx) const { return static_cast<int>(idx % photon_dim()); }

    // Number of atoms in |p> for a given atomic configuration.
    static int excitation(int atomic_index) {
        return std::popcount(static_cast<std::uint32_t>(atomic_index));
    }
};

inline void require_dense(const HilbertLayout& layout) {
    layout.validate();
    if (layout.dim() > kMaxDenseDim)
        throw std::invalid_argument(
            "dense operator construction refused: dimension " + std::to_string(layout.dim()) +
            " exceeds " + std::to_string(kMaxDenseDim) +
            " (use a collective-subspace representation for large systems)");
}

// ---- Tagged dense operator ---------------------------------------------

// Dense complex operator with a *checked* hermiticity tag: tagging an
// operator hermitian verifies max |A - A^dag| < kHermTol and throws
// otherwise, so downstream code can trust the flag.
struct OperatorMatrix {
    Matrix m;
    bool hermitian = false;

    OperatorMatrix() = default;
    explicit OperatorMatrix(Matrix mat, bool tag_as_hermitian = false) : m(std::move(mat)) {
        if (m.rows() != m.cols())
            throw std::invalid_argument("OperatorMatrix: matrix must be square");
        if (tag_as_hermitian) tag_hermitian();
    }

    int dim() const { return static_cast<int>(m.rows()); }

    double hermiticity_defect() const {
        if (m.rows() == 0) return 0.0;
        return (m - m.adjoint()).cwiseAbs().maxCoeff();
    }

    void tag_hermitian(double tol = kHermTol) {
        const double defect = hermiticity_defect();
        if (!(defect < tol))
            throw std::runtime_error("OperatorMatrix: hermiticity defect " +
                                     std::to_string(defect) + " exceeds tolerance");
        hermitian = true;
    }
};

// ---- Small tensor-product helper ---------------------------------------

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// ---- Single-site Pauli operators ---------------------------------------

enum class Pauli { X, Y, Z, Plus, Minus, ProjUp, ProjDown };

namespace detail {

// 2x2 matrix entries in the local basis (index 0 = |s>, index 1 = |p>),
// returned row-major as {m00, m01, m10, m11}.
inline std::array<Complex, 4> local_pauli(Pauli p) {
    switch (p) {
        case Pauli::X: return {0.0, 1.0, 1.0, 0.0};
        case Pauli::Y: return {0.0, kI, -kI, 0.0};
        case Pauli::Z: return {-1.0, 0.0, 0.0, 1.0};
        case Pauli::Plus: return {0.0, 0.0, 1.0, 0.0};   // |p><s|
        case Pauli::Minus: return {0.0, 1.0, 0.0, 0.0};  // |s><p|
        case Pauli::ProjUp: return {0.0, 0.0, 0.0, 1.0};
        case Pauli::ProjDown: return {1.0, 0.0, 0.0, 0.0};
    }
    throw std::invalid_argument("local_pauli: unknown operator");
}

inline bool pauli_is_hermitian(Pauli p) {
    return p == Pauli::X || p == Pauli::Y || p == Pauli::Z || p == Pauli::ProjUp ||
           p == Pauli::ProjDown;
}

}  // namespace detail

// Single-atom operator acting on atom `site` (1-based), tensored with the
// identity on every other atom and on the photon mode.
inline OperatorMatrix pauli_site(const HilbertLayout& layout, int site, Pauli p) {
    require_dense(layout);
    if (site < 1 || site > layout.n_atoms)
        throw std::invalid_argument("pauli_site: site " + std::to_string(site) +
                                    " outside 1.." + std::to_string(layout.n_atoms));

    const auto local = detail::local_pauli(p);
    const int bit = layout.n_atoms - site;
    const int pd = layout.photon_dim();
    Matrix m = Matrix::Zero(layout.dim(), layout.dim());
    for (int a = 0; a < layout.atomic_dim(); ++a) {
        const int b = (a >> bit) & 1;
        for (int bp = 0; bp < 2; ++bp) {
            const Complex coeff = local[static_cast<std::size_t>(bp) * 2 + b];
            if (coeff == Complex{}) continue;
            const int ap = (a & ~(1 << bit)) | (bp << bit);
            for (int ph = 0; ph < pd; ++ph)
                m(layout.index(ap, ph), layout.index(a, ph)) += coeff;
        }
    }
    return OperatorMatrix(std::move(m), detail::pauli_is_hermitian(p));
}

// ---- Collective spin operators -----------------------------------------

enum class Collective { X, Y, Z, Plus, Minus };

// S^x, S^y, S^z carry the conventional 1/2 per atom; S^± do not.
inline OperatorMatrix collective_spin(const HilbertLayout& layout, Collective c) {
    require_dense(layout);
    Matrix m = Matrix::Zero(layout.dim(), layout.dim());
    const double scale = (c == Collective::Plus || c == Collective::Minus) ? 1.0 : 0.5;
    Pauli p;
    switch (c) {
        case Collective::X: p = Pauli::X; break;
        case Collective::Y: p = Pauli::Y; break;
        case Collective::Z: p = Pauli::Z; break;
        case Collective::Plus: p = Pauli::Plus; break;
        case Collective::Minus: p = Pauli::Minus; break;
        default: throw std::invalid_argument("collective_spin: unknown component");
    }
    for (int j = 1; j <= layout.n_atoms; ++j) m += pauli_site(layout, j, p).m;
    m *= scale;
    return OperatorMatrix(std::move(m), detail::pauli_is_hermitian(p));
}

// Total number of atomic excitations, sum_j (sigma_j^z + 1)/2.  Diagonal.
inline OperatorMatrix total_excitation(const HilbertLayout& layout) {
    require_dense(layout);
    Matrix m = Matrix::Zero(layout.dim(), layout.dim());
    for (long idx = 0; idx < layout.dim(); ++idx)
        m(idx, idx) = HilbertLayout::excitation(layout.atomic_part(idx));
    return OperatorMatrix(std::move(m), true);
}

// ---- Photon operators ---------------------------------------------------

struct PhotonOps {
    OperatorMatrix annihilate;  // a
    OperatorMatrix create;      // a^dag
    OperatorMatrix number;      // a^dag a (exact diagonal, not a product)
};

inline PhotonOps photon_ops(const HilbertLayout& layout) {
    require_dense(layout);
    const int pd = layout.photon_dim();
    Matrix a = Matrix::Zero(layout.dim(), layout.dim());
    Matrix n = Matrix::Zero(layout.dim(), layout.dim());
    for (int at = 0; at < layout.atomic_dim(); ++at) {
        for (int ph = 1; ph < pd; ++ph)
            a(layout.index(at, ph - 1), layout.index(at, ph)) = std::sqrt(double(ph));
        for (int ph = 0; ph < pd; ++ph) n(layout.index(at, ph), layout.index(at, ph)) = ph;
    }
    PhotonOps out;
    out.create = OperatorMatrix(a.adjoint());
    out.annihilate = OperatorMatrix(std::move(a));
    out.number = OperatorMatrix(std::move(n), true);
    return out;
}

// Projector |M><M| ⊗ 1_atoms onto the highest retained Fock state; its
// expectation value measures truncation stress.
inline OperatorMatrix top_fock_projector(const HilbertLayout& layout) {
    require_dense(layout);
    Matrix m = Matrix::Zero(layout.dim(), layout.dim());
    const int top = layout.photon_cutoff;
    for (int at = 0; at < layout.atomic_dim(); ++at)
        m(layout.index(at, top), layout.index(at, top)) = 1.0;
    return OperatorMatrix(std::move(m), true);
}

// ---- Parity -------------------------------------------------------------

// Z2 parity (-1)^(excitations + photons), conserved by the full
// atom-cavity Hamiltonian including its counter-rotating terms.
inline OperatorMatrix parity_operator(const HilbertLayout& layout) {
    require_dense(layout);
    Matrix m = Matrix::Zero(layout.dim(), layout.dim());
    for (long idx = 0; idx < layout.dim(); ++idx) {
        const int q = HilbertLayout::excitation(layout.atomic_part(idx)) + layout.photon_part(idx);
        m(idx, idx) = (q % 2 == 0) ? 1.0 : -1.0;
    }
    return OperatorMatrix(std::move(m), true);
}

// Embed an operator acting on the atomic factor alone into the full space.
inline OperatorMatrix embed_atomic(const HilbertLayout& layout, const OperatorMatrix& atomic) {
    require_dense(layout);
    if (atomic.dim() != layout.atomic_dim())
        throw std::invalid_argument("embed_atomic: operator dimension " +
                                    std::to_string(atomic.dim()) + " != atomic dimension " +
                                    std::to_string(layout.atomic_dim()));
    Matrix id = Matrix::Identity(layout.photon_dim(), layout.photon_dim());
    return OperatorMatrix(kron(atomic.m, id), atomic.hermitian);
}

}  // namespace dicke::ops
