#pragma once

// Finite-dimensional *-algebras given by structure constants, with anti-algebra
// maps, real forms, dual structures (S, g) and separability idempotents.

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fsind/error.hpp"
#include "fsind/matrix_core.hpp"

namespace fsind {

inline constexpr int kMaxAlgebraDim = 128;

/// e_i e_j gets `value` added to its coefficient on e_k.
struct StructureEntry {
    int i = 0, j = 0, k = 0;
    cplx value;
};

/// (e_i)* gets `value` added to its coefficient on e_k.
struct StarEntry {
    int i = 0, k = 0;
    cplx value;
};

namespace detail {

inline std::string triple(int i, int j, int k) {
    std::ostringstream os;
    os << "(" << i << "," << j << "," << k << ")";
    return os.str();
}

inline double rel(double scale) { return std::max(1.0, scale); }

}  // namespace detail

/// Associative unital *-algebra over C on the basis e_0..e_{n-1}.
///
/// Elements are coordinate vectors. Multiplication is stored as left
/// multiplication matrices: left(i)(k, j) = c[i][j][k]. The star is
/// a* = sigma() * conj(a).
class FDStarAlgebra {
public:
    static FDStarAlgebra build(int dim, const std::vector<StructureEntry>& structure, const CVector& unit,
                               const std::vector<StarEntry>& star, const Tolerance& tol = {}) {
        check_dim(dim);
        std::vector<CMatrix> left(dim, CMatrix::Zero(dim, dim));
        for (const auto& e : structure) {
            if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
                fail(ErrorKind::SchemaError, "structure index out of range at " + detail::triple(e.i, e.j, e.k));
            left[e.i](e.k, e.j) += e.value;
        }
        CMatrix sigma = CMatrix::Zero(dim, dim);
        for (const auto& e : star) {
            if (e.i < 0 || e.k < 0 || e.i >= dim || e.k >= dim)
                fail(ErrorKind::SchemaError, "star index out of range");
            sigma(e.k, e.i) += e.value;
        }
        return from_left(std::move(left), unit, std::move(sigma), tol);
    }

    static FDStarAlgebra from_left(std::vector<CMatrix> left, const CVector& unit, CMatrix sigma,
                                   const Tolerance& tol = {}) {
        const int dim = static_cast<int>(left.size());
        check_dim(dim);
        if (unit.size() != dim || sigma.rows() != dim || sigma.cols() != dim)
            fail(ErrorKind::SchemaError, "unit or star has the wrong dimension");
        for (const auto& l : left)
            if (l.rows() != dim || l.cols() != dim) fail(ErrorKind::SchemaError, "structure has the wrong shape");
        FDStarAlgebra a;
        a.n_ = dim;
        a.left_ = std::move(left);
        a.unit_ = unit;
        a.sigma_ = std::move(sigma);
        a.right_.assign(dim, CMatrix::Zero(dim, dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) a.right_[i].col(j) = a.left_[j].col(i);
        a.validate(tol);
        return a;
    }

    int dim() const { return n_; }
    const CMatrix& left(int i) const { return left_[i]; }
    const CMatrix& right(int i) const { return right_[i]; }
    const std::vector<CMatrix>& lefts() const { return left_; }
    const std::vector<CMatrix>& rights() const { return right_; }
    const CVector& unit() const { return unit_; }
    const CMatrix& sigma() const { return sigma_; }

    cplx structure(int i, int j, int k) const { return left_[i](k, j); }

    CVector basis(int i) const { return CVector::Unit(n_, i); }

    /// Matrix of x -> a x.
    CMatrix left_of(const CVector& a) const {
        CMatrix m = CMatrix::Zero(n_, n_);
        for (int i = 0; i < n_; ++i)
            if (a(i) != cplx(0.0)) m += a(i) * left_[i];
        return m;
    }

    /// Matrix of x -> x a.
    CMatrix right_of(const CVector& a) const {
        CMatrix m = CMatrix::Zero(n_, n_);
        for (int i = 0; i < n_; ++i)
            if (a(i) != cplx(0.0)) m += a(i) * right_[i];
        return m;
    }

    CVector multiply(const CVector& a, const CVector& b) const { return left_of(a) * b; }

    CVector star(const CVector& a) const { return sigma_ * a.conjugate(); }

    /// Two-sided inverse; SingularInput if `a` is not invertible.
    CVector inverse(const CVector& a, const Tolerance& tol = {}) const {
        const CMatrix la = left_of(a);
        Eigen::FullPivLU<CMatrix> lu(la);
        lu.setThreshold(tol.eps_rank);
        if (!lu.isInvertible()) fail(ErrorKind::SingularInput, "element is not invertible");
        CVector x = lu.solve(unit_);
        if ((multiply(x, a) - unit_).norm() > 1e3 * tol.eps_rank * detail::rel(x.norm() * a.norm()))
            fail(ErrorKind::SingularInput, "element has no two-sided inverse");
        return x;
    }

    /// Regular trace tau(a) = tr L_a, as a row of coefficients.
    CVector regular_trace() const {
        CVector t(n_);
        for (int i = 0; i < n_; ++i) t(i) = left_[i].trace();
        return t;
    }

private:
    static void check_dim(int dim) {
        if (dim <= 0) fail(ErrorKind::InvalidArgument, "algebra dimension must be positive");
        if (dim > kMaxAlgebraDim)
            fail(ErrorKind::InvalidArgument, "algebra dimension exceeds the dense cap of " + std::to_string(kMaxAlgebraDim));
    }

    void validate(const Tolerance& tol) const {
        for (const auto& l : left_)
            if (!l.allFinite()) fail(ErrorKind::SchemaError, "structure constants must be finite");
        if (!unit_.allFinite() || !sigma_.allFinite()) fail(ErrorKind::SchemaError, "unit and star must be finite");
        double scale = 1.0;
        for (const auto& l : left_) scale = std::max(scale, max_abs(l));
        const double eps = tol.eps_rank * scale * scale * 10.0;

        // L_{e_i e_j} = L_i L_j, column k compared against e_i (e_j e_k).
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const CMatrix lhs = left_of(left_[i].col(j));
                const CMatrix rhs = left_[i] * left_[j];
                const RMatrix diff = (lhs - rhs).cwiseAbs();
                Eigen::Index r, c;
                if (diff.maxCoeff(&r, &c) > eps)
                    fail(ErrorKind::NotAssociative, "basis triple " + detail::triple(i, j, static_cast<int>(c)) +
                                                        " violates (e_i e_j) e_k = e_i (e_j e_k)");
            }

        const CMatrix lu = left_of(unit_);
        const CMatrix ru = right_of(unit_);
        const CMatrix id = CMatrix::Identity(n_, n_);
        for (int i = 0; i < n_; ++i) {
            if ((lu.col(i) - id.col(i)).cwiseAbs().maxCoeff() > eps)
                fail(ErrorKind::BadUnit, "1 e_" + std::to_string(i) + " != e_" + std::to_string(i));
            if ((ru.col(i) - id.col(i)).cwiseAbs().maxCoeff() > eps)
                fail(ErrorKind::BadUnit, "e_" + std::to_string(i) + " 1 != e_" + std::to_string(i));
        }

        const CMatrix twice = sigma_ * sigma_.conjugate();
        for (int i = 0; i < n_; ++i)
            if ((twice.col(i) - id.col(i)).cwiseAbs().maxCoeff() > eps)
                fail(ErrorKind::BadStar, "e_" + std::to_string(i) + "** != e_" + std::to_string(i));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const CVector lhs = star(left_[i].col(j));
                const CVector rhs = left_of(sigma_.col(j)) * sigma_.col(i);
                if ((lhs - rhs).cwiseAbs().maxCoeff() > eps)
                    fail(ErrorKind::BadStar, "(e_" + std::to_string(i) + " e_" + std::to_string(j) + ")* != e_" +
                                                 std::to_string(j) + "* e_" + std::to_string(i) + "*");
            }
    }

    int n_ = 0;
    std::vector<CMatrix> left_;
    std::vector<CMatrix> right_;
    CVector unit_;
    CMatrix sigma_;
};

using AlgebraPtr = std::shared_ptr<const FDStarAlgebra>;

inline AlgebraPtr share(FDStarAlgebra a) { return std::make_shared<const FDStarAlgebra>(std::move(a)); }

/// Elements of the center, as orthonormal coordinate columns.
inline CMatrix center_basis(const FDStarAlgebra& a, const Tolerance& tol = {}) {
    const int n = a.dim();
    CMatrix stacked(n * n, n);
    for (int i = 0; i < n; ++i) stacked.middleRows(i * n, n) = a.left(i) - a.right(i);
    return nullspace(stacked, tol);
}

struct CStarCheck {
    CMatrix gram;  ///< G(i, j) = tau(e_i* e_j)
    bool is_cstar = false;
};

/// Regular-trace Gram form; A is C*-able iff it is Hermitian positive definite.
inline CStarCheck check_cstar(const FDStarAlgebra& a, const Tolerance& tol = {}) {
    const int n = a.dim();
    const CVector tau = a.regular_trace();
    CMatrix m(n, n);  // m(k, j) = tau(e_k e_j)
    for (int k = 0; k < n; ++k) m.row(k) = tau.transpose() * a.left(k);
    CStarCheck out;
    out.gram = a.sigma().transpose() * m;
    if (!is_hermitian(out.gram, tol.eps_rank)) return out;
    const auto es = Eigen::SelfAdjointEigenSolver<CMatrix>((out.gram + out.gram.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    out.is_cstar = es.eigenvalues()(0) > tol.eps_rank * top;
    return out;
}

inline CMatrix require_cstar(const FDStarAlgebra& a, const Tolerance& tol = {}) {
    auto c = check_cstar(a, tol);
    if (!c.is_cstar) fail(ErrorKind::NotCStar, "regular-trace Gram form is not positive definite");
    return c.gram;
}

/// x is positive iff R L_x R^{-1} is Hermitian psd, where G = R^* R.
inline bool is_positive(const FDStarAlgebra& a, const CVector& x, const Tolerance& tol = {}) {
    const CMatrix r = orthonormalizer(require_cstar(a, tol), tol);
    const CMatrix m = r * a.left_of(x) * r.inverse();
    const double scale = std::max(1.0, max_abs(m));
    if (max_abs(m - m.adjoint()) > 1e2 * tol.eps_rank * scale) return false;
    const auto es = Eigen::SelfAdjointEigenSolver<CMatrix>((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -tol.eps_eig * scale;
}

/// Linear map S with S(ab) = S(b) S(a) and S(S(a)*)* = a.
class AntiAlgebraMap {
public:
    AntiAlgebraMap(const FDStarAlgebra& a, CMatrix matrix, const Tolerance& tol = {}) : m_(std::move(matrix)) {
        const int n = a.dim();
        if (m_.rows() != n || m_.cols() != n) fail(ErrorKind::NotAntiMap, "matrix has the wrong shape");
        if (!m_.allFinite()) fail(ErrorKind::NotAntiMap, "matrix has non-finite entries");
        const double scale = std::max(1.0, max_abs(m_));
        const double eps = 10.0 * tol.eps_rank * scale * scale;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const CVector lhs = m_ * a.left(i).col(j);
                const CVector rhs = a.multiply(m_.col(j), m_.col(i));
                if ((lhs - rhs).cwiseAbs().maxCoeff() > eps * detail::rel(max_abs(a.left(i))))
                    fail(ErrorKind::NotAntiMap, "S(e_" + std::to_string(i) + " e_" + std::to_string(j) +
                                                    ") != S(e_" + std::to_string(j) + ") S(e_" + std::to_string(i) + ")");
            }
        k_ = a.sigma() * m_.conjugate();
        const CMatrix twice = k_ * k_.conjugate();
        if (max_abs(twice - CMatrix::Identity(n, n)) > eps)
            fail(ErrorKind::NotAntiMap, "S(S(a)*)* != a on the basis");
    }

    const CMatrix& matrix() const { return m_; }
    /// a -> S(a)* is conjugation(): a -> K conj(a).
    const CMatrix& conjugation() const { return k_; }

    CVector apply(const CVector& a) const { return m_ * a; }

private:
    CMatrix m_;
    CMatrix k_;
};

/// A0 = {a : S(a)* = a}, stored through the antilinear operator a -> K conj(a).
struct RealForm {
    CMatrix conjugation;  ///< K
    CMatrix basis;        ///< R-basis of A0 as complex columns

    CVector bar(const CVector& a) const { return conjugation * a.conjugate(); }

    bool contains(const CVector& a, double eps) const { return (bar(a) - a).cwiseAbs().maxCoeff() <= eps; }
};

inline RealForm real_form_from_conjugation(const CMatrix& k, const Tolerance& tol = {}) {
    RealForm rf;
    rf.conjugation = k;
    rf.basis = antilinear_fixed_space(k, tol);
    if (rf.basis.cols() != k.rows())
        fail(ErrorKind::InternalConsistency, "real form has R-dimension " + std::to_string(rf.basis.cols()) +
                                                 " instead of " + std::to_string(k.rows()));
    return rf;
}

inline RealForm real_form_from_S(const AntiAlgebraMap& s, const Tolerance& tol = {}) {
    return real_form_from_conjugation(s.conjugation(), tol);
}

/// (S, g): g invertible, S(g) = g^{-1}, S^2(a) = g a g^{-1}.
struct DualStructureData {
    AntiAlgebraMap S;
    CVector g;

    DualStructureData(const FDStarAlgebra& a, AntiAlgebraMap s, CVector g_, const Tolerance& tol = {})
        : S(std::move(s)), g(std::move(g_)) {
        const int n = a.dim();
        if (g.size() != n) fail(ErrorKind::BadDualStructure, "g has the wrong dimension");
        const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
        const double eps = 1e3 * tol.eps_rank * scale * detail::rel(max_abs(S.matrix()));
        if ((a.multiply(S.apply(g), g) - a.unit()).cwiseAbs().maxCoeff() > eps)
            fail(ErrorKind::BadDualStructure, "S(g) g != 1");
        const CMatrix s2 = S.matrix() * S.matrix();
        const CMatrix lg = a.left_of(g);
        const CMatrix rg = a.right_of(g);
        for (int i = 0; i < n; ++i)
            if ((rg * s2.col(i) - lg.col(i)).cwiseAbs().maxCoeff() > eps * detail::rel(max_abs(s2)))
                fail(ErrorKind::BadDualStructure, "S^2(e_" + std::to_string(i) + ") g != g e_" + std::to_string(i));
    }
};

/// Sum_m x_m (x) y_m with sum x_m y_m = 1 and a x_m (x) y_m = x_m (x) y_m a.
struct SeparabilityIdempotent {
    std::vector<std::pair<CVector, CVector>> pairs;

    /// n x n coefficient matrix T with E = sum T(p, q) e_p (x) e_q.
    CMatrix tensor() const {
        const Eigen::Index n = pairs.empty() ? 0 : pairs.front().first.size();
        CMatrix t = CMatrix::Zero(n, n);
        for (const auto& [x, y] : pairs) t += x * y.transpose();
        return t;
    }
};

/// Max defect over both defining identities.
inline double separability_defect(const FDStarAlgebra& a, const SeparabilityIdempotent& e) {
    CVector sum = CVector::Zero(a.dim());
    for (const auto& [x, y] : e.pairs) sum += a.multiply(x, y);
    double d = (sum - a.unit()).cwiseAbs().maxCoeff();
    const CMatrix t = e.tensor();
    for (int i = 0; i < a.dim(); ++i) d = std::max(d, max_abs(a.left(i) * t - t * a.right(i).transpose()));
    return d;
}

inline void validate_separability(const FDStarAlgebra& a, const SeparabilityIdempotent& e, double eps = 1e-8) {
    const double d = separability_defect(a, e);
    if (d > eps) fail(ErrorKind::InternalConsistency, "separability idempotent defect " + std::to_string(d));
}

/// E = sum f_i (x) f_i* v^{-1} over an orthonormal basis for <x|y> = tau(x* y c),
/// with c positive central (c = 1 when absent).
inline SeparabilityIdempotent separability_idempotent(const FDStarAlgebra& a, const std::optional<CVector>& weight = {},
                                                      const Tolerance& tol = {}) {
    const int n = a.dim();
    CMatrix gram = require_cstar(a, tol);
    if (weight) {
        const CVector& c = *weight;
        if (c.size() != n) fail(ErrorKind::InvalidArgument, "weight has the wrong dimension");
        const CVector tau = a.regular_trace();
        const CMatrix rc = a.right_of(c);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) = (tau.transpose() * a.multiply(a.star(a.basis(i)), rc.col(j)))(0);
    }
    const CMatrix r = orthonormalizer(gram, tol);
    const CMatrix w = r.triangularView<Eigen::Upper>().solve(CMatrix::Identity(n, n));

    CVector v = CVector::Zero(n);
    std::vector<CVector> f(n), fs(n);
    for (int i = 0; i < n; ++i) {
        f[i] = w.col(i);
        fs[i] = a.star(f[i]);
        v += a.multiply(f[i], fs[i]);
    }
    const CVector vinv = a.inverse(v, tol);
    SeparabilityIdempotent e;
    for (int i = 0; i < n; ++i) e.pairs.emplace_back(f[i], a.multiply(fs[i], vinv));
    return e;
}

/// Random positive central element h^2 + 1 with h a random Hermitian central element.
inline CVector random_positive_central(const FDStarAlgebra& a, CounterRng& rng, const Tolerance& tol = {}) {
    const CMatrix z = center_basis(a, tol);
    CVector h = CVector::Zero(a.dim());
    for (Eigen::Index c = 0; c < z.cols(); ++c) h += rng.normal() * z.col(c);
    h = 0.5 * (h + a.star(h));
    return a.multiply(h, h) + a.unit();
}

}  // namespace fsind
