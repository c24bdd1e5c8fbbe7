#pragma once

// Dense complex matrix kernel: tolerances, seeded randomness, Hermitian
// functional calculus, polar decomposition and nullspace solvers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fsind/error.hpp"

namespace fsind {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
///
/// `eps_rank` decides nullspaces and ranks (relative to the largest singular
/// value), `eps_eig` decides when two eigenvalues belong to the same cluster,
/// and `eps_round` is the band inside which an indicator must sit around an
/// integer.
struct Tolerance {
    double eps_rank = 1e-9;
    double eps_eig = 1e-8;
    double eps_round = 1e-6;

    void validate() const {
        auto ok = [](double x) { return x > 0.0 && x < 1.0; };
        if (!ok(eps_rank) || !ok(eps_eig) || !ok(eps_round))
            fail(ErrorKind::InvalidArgument, "tolerances must lie strictly between 0 and 1");
    }

    /// Threshold used on Gram-type (squared) systems: singular values of the
    /// underlying system below sqrt(eps_rank) times its scale count as zero.
    double null_threshold() const { return std::sqrt(eps_rank); }
};

/// Counter-based generator: output k is a SplitMix64 finalisation of
/// (seed, stream, k). No hidden global state; copies replay the same stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return mix(seed_ ^ mix(stream_ + 0x632BE59BD9B4E019ULL) ^ (counter_++ * 0x9E3779B97F4A7C15ULL)); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

    /// Independent generator for a sub-task, derived from this one's identity.
    CounterRng fork(std::uint64_t substream) const { return CounterRng(seed_, mix(stream_ * 31 + substream + 1)); }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

inline CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    return m;
}

inline CMatrix random_unitary(Eigen::Index n, CounterRng& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex_matrix(n, n, rng));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMatrix& a, double eps) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint()) <= eps * std::max(1.0, max_abs(a));
}

/// Eigendecomposition of a Hermitian matrix (eigenvalues ascending).
inline Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const CMatrix& a, const Tolerance& tol = {}) {
    if (!is_hermitian(a, tol.eps_rank)) fail(ErrorKind::NotHermitian, "matrix is not Hermitian within eps_rank");
    const CMatrix sym = (a + a.adjoint()) * 0.5;
    return Eigen::SelfAdjointEigenSolver<CMatrix>(sym);
}

/// Groups ascending eigenvalues: neighbours with |l_i - l_j| <= eps_eig (1 + |l_i|)
/// share a cluster. Returns (first index, count) pairs.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_eigenvalues(const RVector& values, double eps_eig) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= values.size(); ++i) {
        const bool split = i == values.size() ||
                           std::abs(values(i) - values(i - 1)) > eps_eig * (1.0 + std::abs(values(i - 1)));
        if (split) {
            clusters.emplace_back(start, i - start);
            start = i;
        }
    }
    return clusters;
}

/// U fn(Lambda) U* for Hermitian positive semidefinite `a`.
///
/// Eigenvalues in [-eps_eig, 0) are clamped to zero; anything more negative
/// raises NegativeSpectrum. `fn` must return finite values on the clamped
/// spectrum.
template <class Fn>
CMatrix matrix_function(const CMatrix& a, Fn&& fn, const Tolerance& tol = {}) {
    if (a.size() == 0) return a;
    const auto es = hermitian_eigen(a, tol);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    RVector mapped(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
        double lambda = es.eigenvalues()(i);
        if (lambda < -tol.eps_eig * scale)
            fail(ErrorKind::NegativeSpectrum, "eigenvalue " + std::to_string(lambda) + " below -eps_eig");
        lambda = std::max(lambda, 0.0);
        mapped(i) = fn(lambda);
        if (!std::isfinite(mapped(i)))
            fail(ErrorKind::NegativeSpectrum, "function undefined at eigenvalue " + std::to_string(lambda));
    }
    return es.eigenvectors() * mapped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// |f| = (f* f)^{1/2}.
inline CMatrix absolute_value(const CMatrix& f, const Tolerance& tol = {}) {
    return matrix_function(f.adjoint() * f, [](double t) { return std::sqrt(t); }, tol);
}

/// Unitary part u = f |f|^{-1} of an invertible square matrix.
inline CMatrix polar_unitary(const CMatrix& f, const Tolerance& tol = {}) {
    if (f.rows() != f.cols()) fail(ErrorKind::InvalidArgument, "polar_unitary needs a square matrix");
    if (f.size() == 0) return f;
    Eigen::JacobiSVD<CMatrix> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol.eps_rank * std::max(1.0, s(0)))
        fail(ErrorKind::SingularInput, "smallest singular value " + std::to_string(s(s.size() - 1)) + " <= eps_rank");
    return svd.matrixU() * svd.matrixV().adjoint();
}

/// Orthonormal basis (as columns) of {x : m x = 0}; singular values at most
/// eps_rank times the largest one count as zero.
inline CMatrix nullspace(const CMatrix& m, const Tolerance& tol = {}) {
    const Eigen::Index n = m.cols();
    if (n == 0) return CMatrix(0, 0);
    if (m.rows() == 0 || max_abs(m) == 0.0) return CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol.eps_rank * s(0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

/// Real counterpart of `nullspace`.
inline RMatrix real_nullspace(const RMatrix& m, const Tolerance& tol = {}) {
    const Eigen::Index n = m.cols();
    if (n == 0) return RMatrix(0, 0);
    if (m.rows() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return RMatrix::Identity(n, n);
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol.eps_rank * s(0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cut) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

/// Real 2n x 2n matrix of the antilinear map v -> k conj(v) minus `shift` times the identity,
/// acting on (Re v, Im v).
inline RMatrix antilinear_as_real(const CMatrix& k, double shift) {
    const Eigen::Index n = k.rows();
    const RMatrix kr = k.real();
    const RMatrix ki = k.imag();
    RMatrix out(2 * n, 2 * n);
    out << kr - shift * RMatrix::Identity(n, n), ki, ki, -kr - shift * RMatrix::Identity(n, n);
    return out;
}

/// R-basis of the fixed space {v : k conj(v) = v}, returned as complex columns.
inline CMatrix antilinear_fixed_space(const CMatrix& k, const Tolerance& tol = {}) {
    const Eigen::Index n = k.rows();
    const RMatrix basis = real_nullspace(antilinear_as_real(k, 1.0), tol);
    CMatrix out(n, basis.cols());
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
        for (Eigen::Index i = 0; i < n; ++i) out(i, c) = cplx(basis(i, c), basis(n + i, c));
    return out;
}

/// Frobenius-orthonormal basis of {T : T left[i] = right[i] T for all i}.
///
/// T has shape right.rows() x left.rows(). The stacked Sylvester system is
/// reduced to its Hermitian Gram matrix, assembled from Kronecker identities
/// without materialising the stacked system.
inline std::vector<CMatrix> solve_intertwining(std::span<const CMatrix> left, std::span<const CMatrix> right,
                                               const Tolerance& tol = {}) {
    if (left.size() != right.size()) fail(ErrorKind::InvalidArgument, "intertwining system needs paired matrices");
    if (left.empty()) fail(ErrorKind::InvalidArgument, "intertwining system has no constraints");
    const Eigen::Index dv = left.front().rows();
    const Eigen::Index dw = right.front().rows();
    const Eigen::Index m = dv * dw;
    if (m == 0) return {};

    // vec(T) is column-major: index c * dw + r for T(r, c).
    // K_i = P^T (x) I - I (x) R with P = left[i], R = right[i];
    // K^*K = conj(P) P^T (x) I - conj(P) (x) R - P^T (x) R^* + I (x) R^*R.
    CMatrix gram = CMatrix::Zero(m, m);
    double scale = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        const CMatrix& p = left[i];
        const CMatrix& r = right[i];
        if (p.rows() != dv || p.cols() != dv || r.rows() != dw || r.cols() != dw)
            fail(ErrorKind::InvalidArgument, "intertwining system has inconsistent shapes");
        scale = std::max(scale, p.norm() + r.norm());
        const CMatrix pt = p.transpose();
        const CMatrix pc = p.conjugate();
        const CMatrix a1 = pc * pt;
        const CMatrix rr = r.adjoint() * r;
        const CMatrix ra = r.adjoint();
        for (Eigen::Index c1 = 0; c1 < dv; ++c1)
            for (Eigen::Index c2 = 0; c2 < dv; ++c2) {
                const cplx ka = a1(c1, c2);
                const cplx kb = pc(c1, c2);
                const cplx kc = pt(c1, c2);
                auto block = gram.block(c1 * dw, c2 * dw, dw, dw);
                if (ka != cplx(0.0)) block.diagonal().array() += ka;
                if (kb != cplx(0.0)) block -= kb * r;
                if (kc != cplx(0.0)) block -= kc * ra;
                if (c1 == c2) block += rr;
            }
    }
    if (scale == 0.0) {
        std::vector<CMatrix> all;
        for (Eigen::Index k = 0; k < m; ++k) {
            CMatrix t = CMatrix::Zero(dw, dv);
            t(k % dw, k / dw) = 1.0;
            all.push_back(std::move(t));
        }
        return all;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es((gram + gram.adjoint()) * 0.5);
    const double cut = std::pow(tol.null_threshold() * scale, 2);
    std::vector<CMatrix> out;
    for (Eigen::Index k = 0; k < m && es.eigenvalues()(k) <= cut; ++k) {
        CMatrix t(dw, dv);
        for (Eigen::Index c = 0; c < dv; ++c) t.col(c) = es.eigenvectors().col(k).segment(c * dw, dw);
        out.push_back(std::move(t));
    }
    return out;
}

/// Upper-triangular R with h = R^* R, for a Hermitian positive definite form.
/// Coordinates x map to orthonormal coordinates R x.
inline CMatrix orthonormalizer(const CMatrix& h, const Tolerance& tol = {}) {
    if (!is_hermitian(h, tol.eps_rank)) fail(ErrorKind::NotHermitian, "Gram form is not Hermitian");
    Eigen::LLT<CMatrix> llt((h + h.adjoint()) * 0.5);
    if (llt.info() != Eigen::Success) fail(ErrorKind::NotStarRep, "Gram form is not positive definite");
    return llt.matrixU();
}

}  // namespace fsind
