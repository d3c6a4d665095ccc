#pragma once

// Dense complex operator algebra for small Hilbert spaces.
// Everything is a column-major Eigen matrix; dimensions stay at or below
// 2 * 2^max_exact_spins, so dense eigendecomposition is the right tool.

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nvsim/constants.hpp"

namespace nvsim {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline const Complex im{0.0, 1.0};

// ---------------------------------------------------------------------------
// Elementary spin-1/2 operators (S = sigma/2)
// ---------------------------------------------------------------------------

inline CMat pauli_x() {
    CMat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMat pauli_y() {
    CMat m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline CMat pauli_z() {
    CMat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline CMat spin_x() { return 0.5 * pauli_x(); }
inline CMat spin_y() { return 0.5 * pauli_y(); }
inline CMat spin_z() { return 0.5 * pauli_z(); }

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

// Operator acting on one factor of a qubit register: identity everywhere
// except `slot` (0-based, slot 0 is the leftmost/most significant factor).
inline CMat embed(const CMat& op, int slot, int n_factors) {
    CMat out = CMat::Identity(1, 1);
    for (int k = 0; k < n_factors; ++k) {
        if (k == slot)
            out = kron(out, op);
        else
            out = kron(out, CMat::Identity(2, 2));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix predicates
// ---------------------------------------------------------------------------

inline double inf_norm(const CMat& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline bool is_hermitian(const CMat& m, double rel_tol = 1e-12) {
    const double scale = std::max(1.0, inf_norm(m));
    return inf_norm(CMat(m - m.adjoint())) <= rel_tol * scale;
}

inline bool is_unitary(const CMat& m, double tol = 1e-10) {
    const CMat d = m.adjoint() * m - CMat::Identity(m.rows(), m.cols());
    return inf_norm(d) <= tol;
}

// exp(-i * 2*pi * H * phase_time) through eigendecomposition. `phase_time`
// is in units reciprocal to H (kHz * ms = cycles).
inline CMat unitary_exp(const CMat& h, double phase_time) {
    if (!is_hermitian(h))
        throw std::invalid_argument("unitary_exp: Hamiltonian not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("unitary_exp: eigendecomposition failed");
    const Eigen::VectorXd w = es.eigenvalues();
    CVec phases(w.size());
    // Reduce to fractional cycles before taking sin/cos: long segments can
    // accumulate ~1e5 cycles and the reduction keeps the angle accurate.
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        const double cycles = -w[k] * phase_time;
        const double frac = cycles - std::floor(cycles);
        phases[k] = std::polar(1.0, 2.0 * constants::pi * frac);
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

} // namespace nvsim
