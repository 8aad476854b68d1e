// matrixcore.hpp: dense complex matrices, Kronecker products, null spaces and
// density-matrix validation. Thin layer over Eigen.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qfridge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Hilbert-space dimension of the three-qubit system.
inline constexpr Eigen::Index kSystemDim = 8;

// Rank threshold relative to the largest singular value.
inline constexpr double kDefaultRankTol = 1e-10;

// Numerical failure inside a solver (ill-conditioning, residual too large, drift).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ------------------------------ elementary ops ------------------------------

inline bool all_finite(const ComplexMatrix& m) noexcept {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex z = m.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

inline void require_finite(const ComplexMatrix& m, std::string_view what) {
    if (!all_finite(m)) {
        throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
    }
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

inline Complex trace(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("trace: matrix must be square");
    return m.trace();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

// Largest |m_ij - conj(m_ji)|.
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Column-major vectorization, matching Eigen storage: vec(A X B) = (B^T ⊗ A) vec(X).
inline ComplexVector vectorize(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index rows) {
    if (rows <= 0 || v.size() % rows != 0) {
        throw std::invalid_argument("unvectorize: size is not a multiple of rows");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

// ------------------------------- null space ---------------------------------

struct NullSpace {
    std::vector<ComplexVector> basis;     // orthonormal
    std::vector<double> singular_values;  // descending
    double threshold{0.0};                // absolute cut actually applied
};

// Raised when a singular value sits within a decade of the rank threshold,
// i.e. the numerical rank is not well defined.
class RankAmbiguityError : public NumericalError {
public:
    RankAmbiguityError(const std::string& msg, double sv, double threshold)
        : NumericalError(msg), singular_value(sv), threshold(threshold) {}
    double singular_value;
    double threshold;
};

// Orthonormal basis of the right null space of a square matrix. Singular values
// at or below tol * sigma_max are treated as zero.
inline NullSpace null_space(const ComplexMatrix& m, double tol = kDefaultRankTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("null_space: matrix must be square");
    if (!(tol > 0.0)) throw std::invalid_argument("null_space: tol must be positive");
    require_finite(m, "null_space");

    NullSpace out;
    const Eigen::Index n = m.rows();
    if (n == 0) return out;

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    out.singular_values.assign(s.data(), s.data() + s.size());

    const double smax = s.size() > 0 ? s(0) : 0.0;
    if (smax == 0.0) {
        for (Eigen::Index k = 0; k < n; ++k) out.basis.push_back(ComplexVector::Unit(n, k));
        return out;
    }
    out.threshold = tol * smax;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double sk = s(k);
        if (sk > out.threshold / 10.0 && sk <= out.threshold * 10.0) {
            std::ostringstream os;
            os << "null_space: ambiguous rank, singular value " << sk << " within a decade of threshold "
               << out.threshold;
            throw RankAmbiguityError(os.str(), sk, out.threshold);
        }
        if (sk <= out.threshold) out.basis.push_back(svd.matrixV().col(k));
    }
    return out;
}

// ----------------------------- density matrices -----------------------------

struct DmTolerances {
    double hermitian{1e-9};
    double trace{1e-9};
    double psd{1e-9};
};

enum class DmViolation { WrongShape, NonFinite, NonHermitian, TraceOff, NegativeEigenvalue };

inline std::string_view to_string(DmViolation v) {
    switch (v) {
        case DmViolation::WrongShape: return "wrong-shape";
        case DmViolation::NonFinite: return "non-finite";
        case DmViolation::NonHermitian: return "non-Hermitian";
        case DmViolation::TraceOff: return "trace-off";
        case DmViolation::NegativeEigenvalue: return "negative-eigenvalue";
    }
    return "unknown";
}

struct DmRejection {
    DmViolation violation;
    double magnitude;  // size of the offending defect
    std::string message() const {
        std::ostringstream os;
        os << to_string(violation) << " (defect " << magnitude << ")";
        return os.str();
    }
};

// An 8x8 matrix that passed dm_validate. Only dm_validate constructs one.
class DensityMatrix {
public:
    const ComplexMatrix& matrix() const noexcept { return m_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    friend std::variant<DensityMatrix, DmRejection> dm_validate(const ComplexMatrix&, DmTolerances);

    ComplexMatrix m_;
};

inline std::variant<DensityMatrix, DmRejection> dm_validate(const ComplexMatrix& rho,
                                                            DmTolerances tol = {}) {
    if (rho.rows() != kSystemDim || rho.cols() != kSystemDim) {
        return DmRejection{DmViolation::WrongShape, static_cast<double>(rho.rows() * rho.cols())};
    }
    if (!all_finite(rho)) return DmRejection{DmViolation::NonFinite, 0.0};

    const double herm = hermiticity_defect(rho);
    if (herm > tol.hermitian) return DmRejection{DmViolation::NonHermitian, herm};

    const double tr_off = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr_off > tol.trace) return DmRejection{DmViolation::TraceOff, tr_off};

    const ComplexMatrix herm_part = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm_part, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol.psd) return DmRejection{DmViolation::NegativeEigenvalue, -min_eig};

    return DensityMatrix(rho);
}

// Throwing convenience wrapper around dm_validate.
inline DensityMatrix make_density_matrix(const ComplexMatrix& rho, DmTolerances tol = {}) {
    auto r = dm_validate(rho, tol);
    if (auto* rej = std::get_if<DmRejection>(&r)) {
        throw std::invalid_argument("density matrix rejected: " + rej->message());
    }
    return std::get<DensityMatrix>(std::move(r));
}

}  // namespace qfridge
