#pragma once

// Finite-dimensional *-coalgebras, corepresentations and the coalgebra /
// compact quantum group indicators. Everything is routed through the dual
// algebra C^*, whose basis is dual to the coalgebra basis c^0..c^{n-1}.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsind/constructors.hpp"
#include "fsind/error.hpp"
#include "fsind/indicator.hpp"
#include "fsind/matrix_core.hpp"
#include "fsind/representation.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind {

/// Coproduct as an n^2 x n matrix (row i * n + j is the coefficient of c^i (x) c^j),
/// counit as coordinates, star c* = sigma conj(c).
struct FDStarCoalgebra {
    int n = 0;
    CMatrix delta;
    CVector counit;
    CMatrix sigma;

    CMatrix coproduct(const CVector& c) const {
        const CVector flat = delta * c;
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
        return m;
    }

    CVector star(const CVector& c) const { return sigma * c.conjugate(); }
};

/// Coassociativity, counit laws, c** = c and Delta(c*) = (c_(2))* (x) (c_(1))*.
inline void validate(const FDStarCoalgebra& c, const Tolerance& tol = {}) {
    const int n = c.n;
    if (n <= 0 || n > kMaxAlgebraDim) fail(ErrorKind::BadCoalgebra, "dimension out of range");
    if (c.delta.rows() != n * n || c.delta.cols() != n || c.counit.size() != n || c.sigma.rows() != n ||
        c.sigma.cols() != n)
        fail(ErrorKind::BadCoalgebra, "structure has the wrong shape");
    if (!c.delta.allFinite() || !c.counit.allFinite() || !c.sigma.allFinite())
        fail(ErrorKind::BadCoalgebra, "non-finite entries");
    const double eps = 1e3 * tol.eps_rank * std::max(1.0, max_abs(c.delta)) * std::max(1.0, max_abs(c.sigma));
    std::vector<CMatrix> d(n);
    for (int k = 0; k < n; ++k) d[k] = c.coproduct(CVector::Unit(n, k));
    for (int k = 0; k < n; ++k) {
        std::vector<CMatrix> lhs(n, CMatrix::Zero(n, n)), rhs(n, CMatrix::Zero(n, n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx v = d[k](i, j);
                if (v == cplx(0.0)) continue;
                lhs[j] += v * d[i];
                for (int l = 0; l < n; ++l) rhs[l].row(i) += v * d[j].col(l).transpose();
            }
        for (int j = 0; j < n; ++j)
            if (max_abs(lhs[j] - rhs[j]) > eps)
                fail(ErrorKind::BadCoalgebra, "coproduct is not coassociative at c^" + std::to_string(k));
        if ((d[k].transpose() * c.counit - CVector::Unit(n, k)).cwiseAbs().maxCoeff() > eps ||
            (d[k] * c.counit - CVector::Unit(n, k)).cwiseAbs().maxCoeff() > eps)
            fail(ErrorKind::BadCoalgebra, "counit law fails at c^" + std::to_string(k));
        CMatrix of_star = CMatrix::Zero(n, n);
        for (int m = 0; m < n; ++m)
            if (c.sigma(m, k) != cplx(0.0)) of_star += c.sigma(m, k) * d[m];
        const CMatrix flipped = c.sigma * d[k].transpose().conjugate() * c.sigma.transpose();
        if (max_abs(of_star - flipped) > eps)
            fail(ErrorKind::BadCoalgebra, "Delta(c*) != c_(2)* (x) c_(1)* at c^" + std::to_string(k));
    }
    if (max_abs(c.sigma * c.sigma.conjugate() - CMatrix::Identity(n, n)) > eps)
        fail(ErrorKind::BadCoalgebra, "star is not involutive");
}

/// Dual coalgebra of A on the dual basis: Delta(c^k) = sum c[i][j][k] c^i (x) c^j,
/// counit = unit coordinates, star from <a*, c> = conj <a, c*>.
inline FDStarCoalgebra dualize(const FDStarAlgebra& a) {
    const int n = a.dim();
    FDStarCoalgebra c;
    c.n = n;
    c.delta.resize(n * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) c.delta(i * n + j, k) = a.structure(i, j, k);
    c.counit = a.unit();
    c.sigma = a.sigma().adjoint();
    return c;
}

/// Dual algebra C^*; inverse of `dualize` on the nose.
inline FDStarAlgebra dualize_co(const FDStarCoalgebra& c, const Tolerance& tol = {}) {
    validate(c, tol);
    const int n = c.n;
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) left[i](k, j) = c.delta(i * n + j, k);
    return FDStarAlgebra::from_left(std::move(left), c.counit, c.sigma.adjoint(), tol);
}

/// Matrix corepresentation: c_ij = sum_k coeff[k](i, j) c^k. The same matrices
/// are the representation Phi(V) of the dual algebra.
struct Corepresentation {
    std::vector<CMatrix> coeff;
    std::optional<CMatrix> gram;

    int dim() const { return coeff.empty() ? 0 : static_cast<int>(coeff.front().rows()); }

    /// t_V = sum_i c_ii in coalgebra coordinates.
    CVector character() const {
        CVector t(static_cast<Eigen::Index>(coeff.size()));
        for (std::size_t k = 0; k < coeff.size(); ++k) t(k) = coeff[k].trace();
        return t;
    }

    /// Coalgebra coordinates of c_ij.
    CVector entry(int i, int j) const {
        CVector c(static_cast<Eigen::Index>(coeff.size()));
        for (std::size_t k = 0; k < coeff.size(); ++k) c(k) = coeff[k](i, j);
        return c;
    }
};

/// Delta(c_ij) = sum_l c_il (x) c_lj and eps(c_ij) = delta_ij.
inline void validate(const FDStarCoalgebra& c, const Corepresentation& v, const Tolerance& tol = {}) {
    const int n = c.n;
    const int d = v.dim();
    if (static_cast<int>(v.coeff.size()) != n) fail(ErrorKind::BadRepresentation, "need one matrix per coalgebra basis element");
    const double eps = 1e3 * tol.eps_rank;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            CMatrix lhs = CMatrix::Zero(d, d);
            for (int k = 0; k < n; ++k)
                if (c.delta(a * n + b, k) != cplx(0.0)) lhs += c.delta(a * n + b, k) * v.coeff[k];
            if (max_abs(lhs - v.coeff[a] * v.coeff[b]) > eps * std::max(1.0, max_abs(lhs)))
                fail(ErrorKind::BadRepresentation, "Delta(c_ij) != sum c_il (x) c_lj");
        }
    CMatrix e = CMatrix::Zero(d, d);
    for (int k = 0; k < n; ++k) e += c.counit(k) * v.coeff[k];
    if (max_abs(e - CMatrix::Identity(d, d)) > eps) fail(ErrorKind::BadRepresentation, "eps(c_ij) != delta_ij");
}

inline Representation phi(const AlgebraPtr& dual, const Corepresentation& v) {
    Representation r;
    r.algebra = dual;
    r.rho = v.coeff;
    r.gram = v.gram;
    return r;
}

inline Corepresentation corep_from(const Representation& r) { return {r.rho, r.gram}; }

/// Bilinear form E(x, y) = x^T form y.
struct CoseparabilityIdempotent {
    CMatrix form;

    cplx operator()(const CVector& x, const CVector& y) const { return (x.transpose() * form * y)(0); }
};

/// Max defect of E(c_(1), c_(2)) = eps(c) and c_(1) E(c_(2), d) = E(c, d_(1)) d_(2).
inline double coseparability_defect(const FDStarCoalgebra& c, const CoseparabilityIdempotent& e) {
    const int n = c.n;
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const CMatrix dk = c.coproduct(CVector::Unit(n, k));
        worst = std::max(worst, std::abs((dk.cwiseProduct(e.form)).sum() - c.counit(k)));
    }
    // c_(1) E(c_(2), d) as coordinates: sum_ij D_c(i,j) E(j, d) e_i = D_c E[:, d].
    for (int x = 0; x < n; ++x) {
        const CMatrix dx = c.coproduct(CVector::Unit(n, x));
        for (int y = 0; y < n; ++y) {
            const CMatrix dy = c.coproduct(CVector::Unit(n, y));
            const CVector lhs = dx * e.form.col(y);
            const CVector rhs = dy.transpose() * e.form.row(x).transpose();
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

struct CompactDecomposition {
    AlgebraPtr dual;                       ///< C^*
    std::vector<IrrepComponent> irreps;    ///< irreducible *-representations of C^*
    std::vector<Corepresentation> coreps;  ///< matching irreducible *-corepresentations
    CMatrix block_basis;                   ///< columns: coordinates of e_ij^(a), blocks in irrep order, (i, j) row-major
    CoseparabilityIdempotent E;
};

/// Splits C into matrix *-coalgebras through its dual algebra.
///
/// E is fixed on the block bases by E(e_ij^(a), e_kl^(b)) = delta_ab delta_il delta_jk / n_a.
inline CompactDecomposition compact_decompose(const FDStarCoalgebra& c, std::uint64_t seed, const Tolerance& tol = {}) {
    CompactDecomposition out;
    out.dual = share(dualize_co(c, tol));
    if (!check_cstar(*out.dual, tol).is_cstar) fail(ErrorKind::NotCompact, "dual algebra is not a C*-algebra");
    out.irreps = decompose(regular_representation(out.dual, tol), seed, tol);
    const int n = c.n;
    out.block_basis.resize(n, n);
    CMatrix ee = CMatrix::Zero(n, n);
    int col = 0;
    for (const auto& comp : out.irreps) {
        const Corepresentation v = corep_from(comp.irrep);
        const int d = v.dim();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.block_basis.col(col + i * d + j) = v.entry(i, j);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) ee(col + i * d + j, col + j * d + i) = 1.0 / d;
        col += d * d;
        out.coreps.push_back(v);
    }
    if (col != n) fail(ErrorKind::InternalConsistency, "matrix blocks do not exhaust the coalgebra");
    Eigen::FullPivLU<CMatrix> lu(out.block_basis);
    if (!lu.isInvertible()) fail(ErrorKind::InternalConsistency, "matrix coefficients are not a basis");
    const CMatrix binv = lu.inverse();
    out.E.form = binv.transpose() * ee * binv;
    const double defect = coseparability_defect(c, out.E);
    if (defect > 1e-8) fail(ErrorKind::InternalConsistency, "coseparability defect " + std::to_string(defect));
    const CMatrix pos = c.sigma.transpose() * out.E.form;
    if (!is_hermitian(pos, 1e-8)) fail(ErrorKind::NotCompact, "E(c*, d) is not Hermitian");
    Eigen::LLT<CMatrix> llt((pos + pos.adjoint()) * 0.5);
    if (llt.info() != Eigen::Success) fail(ErrorKind::NotCompact, "E(c*, c) is not positive");
    return out;
}

/// Anti-coalgebra map varsigma with varsigma(varsigma(c*)*) = c, read on the
/// dual algebra as S = varsigma^T.
inline AntiAlgebraMap varsigma_as_antipode(const FDStarAlgebra& dual, const CMatrix& varsigma, const Tolerance& tol = {}) {
    try {
        return AntiAlgebraMap(dual, varsigma.transpose(), tol);
    } catch (const Error& e) {
        fail(ErrorKind::BadVarsigma, e.detail());
    }
}

/// Real form C0 = {c : varsigma(c*) = c}, as the conjugation c -> varsigma sigma conj(c).
inline RealForm coalgebra_real_form(const FDStarCoalgebra& c, const CMatrix& varsigma, const Tolerance& tol = {}) {
    return real_form_from_conjugation(varsigma * c.sigma, tol);
}

/// gamma in C^* (coordinates gamma(c^k)); checks gamma o varsigma = gamma^{-1} and
/// varsigma^2(c) = gamma(c_(1)) c_(2) gamma^{-1}(c_(3)).
inline CVector gamma(const FDStarCoalgebra& c, const CMatrix& varsigma, const std::vector<IrrepComponent>& irreps,
                     const AlgebraPtr& dual, const Tolerance& tol = {}) {
    const AntiAlgebraMap s = varsigma_as_antipode(*dual, varsigma, tol);
    const CanonicalElement ce = canonical_g(*dual, s, irreps, tol);
    const CVector& g = ce.g;
    const CVector ginv = dual->inverse(g, tol);
    const double eps = 1e3 * tol.eps_rank * std::max(1.0, g.cwiseAbs().maxCoeff()) * std::max(1.0, ginv.cwiseAbs().maxCoeff());
    if ((varsigma.transpose() * g - ginv).cwiseAbs().maxCoeff() > eps)
        fail(ErrorKind::BadVarsigma, "gamma o varsigma != gamma^{-1}");
    const int n = c.n;
    const CMatrix s2 = varsigma * varsigma;
    for (int k = 0; k < n; ++k) {
        const CMatrix dk = c.coproduct(CVector::Unit(n, k));
        CVector acc = CVector::Zero(n);
        for (int a = 0; a < n; ++a) {
            if (g(a) == cplx(0.0)) continue;
            for (int b = 0; b < n; ++b)
                if (dk(a, b) != cplx(0.0)) acc += g(a) * dk(a, b) * (c.coproduct(CVector::Unit(n, b)) * ginv);
        }
        if ((acc - s2.col(k)).cwiseAbs().maxCoeff() > eps)
            fail(ErrorKind::BadVarsigma, "varsigma^2 is not conjugation by gamma at c^" + std::to_string(k));
    }
    if (!is_positive(*dual, g, tol)) fail(ErrorKind::BadVarsigma, "gamma is not positive in the dual C*-algebra");
    return g;
}

/// gamma(t_(2)) E(varsigma(t_(1)), t_(3)).
inline double corep_indicator(const FDStarCoalgebra& c, const Corepresentation& v, const CMatrix& varsigma,
                              const CVector& gam, const CoseparabilityIdempotent& e, const Tolerance& tol = {}) {
    const int n = c.n;
    const CMatrix w = c.coproduct(v.character());
    const CMatrix m = varsigma.transpose() * e.form;
    cplx val = 0.0;
    for (int a = 0; a < n; ++a) {
        const CVector colw = w.row(a).transpose();
        if (colw.cwiseAbs().maxCoeff() == 0.0) continue;
        const CVector u = c.coproduct(CVector::Unit(n, a)) * gam;
        val += (u.transpose() * m * colw)(0);
    }
    if (std::abs(val.imag()) >= tol.eps_round) fail(ErrorKind::ComplexResult, "corepresentation indicator is not real");
    return val.real();
}

struct CorepEntry {
    int dim = 0;
    CVector character;  ///< t_V in coalgebra coordinates
    double indicator = 0.0;
    int sigma = 0;
    SignatureWitness witness;
};

struct CoalgebraReport {
    CompactDecomposition decomposition;
    CVector gamma;
    std::vector<CorepEntry> entries;
};

/// Coalgebra-side indicator for every irreducible corepresentation, plus sigma of Phi(V)
/// with respect to the real form of C^* dual to C0.
inline CoalgebraReport coalgebra_report(const FDStarCoalgebra& c, const CMatrix& varsigma, std::uint64_t seed,
                                        const Tolerance& tol = {}) {
    CoalgebraReport rep;
    rep.decomposition = compact_decompose(c, seed, tol);
    const auto& dec = rep.decomposition;
    rep.gamma = gamma(c, varsigma, dec.irreps, dec.dual, tol);
    const AntiAlgebraMap s = varsigma_as_antipode(*dec.dual, varsigma, tol);
    const RealForm rf = real_form_from_S(s, tol);
    for (std::size_t i = 0; i < dec.coreps.size(); ++i) {
        CorepEntry en;
        en.dim = dec.coreps[i].dim();
        en.character = dec.coreps[i].character();
        en.indicator = corep_indicator(c, dec.coreps[i], varsigma, rep.gamma, dec.E, tol);
        const auto sg = classify_sigma(dec.irreps[i].irrep, rf, tol);
        en.sigma = sg.sigma;
        en.witness = sg.witness;
        rep.entries.push_back(std::move(en));
    }
    return rep;
}

/// R-basis of {c : a(c) in R for all a in A0}, given an R-basis of A0 in dual coordinates.
inline CMatrix annihilator_real_form(const CMatrix& a0, const Tolerance& tol = {}) {
    const Eigen::Index n = a0.rows();
    RMatrix m(a0.cols(), 2 * n);
    for (Eigen::Index r = 0; r < a0.cols(); ++r) {
        m.row(r).head(n) = a0.col(r).imag().transpose();
        m.row(r).tail(n) = a0.col(r).real().transpose();
    }
    const RMatrix basis = real_nullspace(m, tol);
    CMatrix out(n, basis.cols());
    out.real() = basis.topRows(n);
    out.imag() = basis.bottomRows(n);
    return out;
}

/// R-rank of the columns of x (as real 2n-vectors).
inline int real_rank(const CMatrix& x, double eps = 1e-9) {
    RMatrix m(2 * x.rows(), x.cols());
    m << x.real(), x.imag();
    Eigen::JacobiSVD<RMatrix> svd(m);
    const auto& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > eps * std::max(1.0, s(0))) ++r;
    return r;
}

/// Coalgebra structure of a Hopf *-algebra seen as a dagger-coalgebra: star a -> S(a)*.
inline FDStarCoalgebra dagger_coalgebra(const WeakHopfData& h) {
    FDStarCoalgebra c;
    c.n = h.dim();
    c.delta = h.delta;
    c.counit = h.counit;
    c.sigma = h.S.conjugation();
    return c;
}

/// Haar functional on H: the Haar integral of the dual Hopf algebra, read as h(e_k).
inline CVector haar_functional(const WeakHopfData& h, const Tolerance& tol = {}) {
    const auto dual = dual_hopf(h, tol);
    return *dual.haar;
}

struct CqgEntry {
    int dim = 0;
    double h_value = 0.0;     ///< h(t_(1) t_(2))
    double indicator = 0.0;   ///< (gamma(t) / eps(t)) h(t_(1) t_(2))
    double corep_value = 0.0;
    int sigma = 0;
};

/// Indicator of every irreducible unitary corepresentation of a finite-dimensional Hopf *-algebra.
inline std::vector<CqgEntry> cqg_report(const WeakHopfData& h, std::uint64_t seed, const Tolerance& tol = {}) {
    const int n = h.dim();
    const CMatrix d1 = h.coproduct(h.algebra->unit());
    const CMatrix one = h.algebra->unit() * h.algebra->unit().transpose();
    if (max_abs(d1 - one) > 1e3 * tol.eps_rank) fail(ErrorKind::NotHopf, "Delta(1) != 1 (x) 1");
    const FDStarCoalgebra c = dagger_coalgebra(h);
    const CMatrix varsigma = h.S.matrix();
    const CVector hf = haar_functional(h, tol);
    const CoalgebraReport rep = coalgebra_report(c, varsigma, seed, tol);
    std::vector<CqgEntry> out;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const CVector t = rep.entries[i].character;
        const CMatrix w = h.coproduct(t);
        CVector prod = CVector::Zero(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (w(a, b) != cplx(0.0)) prod += w(a, b) * h.algebra->multiply(CVector::Unit(n, a), CVector::Unit(n, b));
        const cplx hv = hf.transpose() * prod;
        const cplx gt = rep.gamma.transpose() * t;
        const cplx et = h.counit.transpose() * t;
        const cplx val = gt / et * hv;
        if (std::abs(val.imag()) >= tol.eps_round) fail(ErrorKind::ComplexResult, "CQG indicator is not real");
        CqgEntry en;
        en.dim = rep.entries[i].dim;
        en.h_value = hv.real();
        en.indicator = val.real();
        en.corep_value = rep.entries[i].indicator;
        en.sigma = rep.entries[i].sigma;
        out.push_back(en);
    }
    return out;
}

}  // namespace fsind
