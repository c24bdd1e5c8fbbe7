#pragma once

// Canonical element g, Frobenius-Schur indicators (formula and trace forms),
// the J-signature with its witnesses, and the per-irreducible report.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fsind/error.hpp"
#include "fsind/matrix_core.hpp"
#include "fsind/representation.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind {

struct CanonicalElement {
    CVector g;
    std::vector<CMatrix> per_irrep;  ///< g acting on each irreducible, in its own (orthonormal) coordinates
};

namespace detail {

inline std::vector<CMatrix> compose_with(const Representation& v, const CMatrix& map) {
    std::vector<CMatrix> out;
    out.reserve(map.cols());
    for (Eigen::Index i = 0; i < map.cols(); ++i) out.push_back(v.of(map.col(i)));
    return out;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace detail

/// Unique positive g with S(g) = g^{-1}, S^2(a) = g a g^{-1} and tr g_i = tr g_i^{-1}
/// on every irreducible. `irreps` must exhaust the regular representation.
inline CanonicalElement canonical_g(const FDStarAlgebra& a, const AntiAlgebraMap& s,
                                    const std::vector<IrrepComponent>& irreps, const Tolerance& tol = {}) {
    require_cstar(a, tol);
    const int n = a.dim();
    const CMatrix s2 = s.matrix() * s.matrix();
    CanonicalElement out;
    int rows = 0;
    for (const auto& c : irreps) rows += c.irrep.dim() * c.irrep.dim();
    if (rows != n)
        fail(ErrorKind::InvalidArgument, "irreducibles do not exhaust the algebra (sum of d^2 = " + std::to_string(rows) + ")");

    CMatrix system(n, n);
    CVector rhs(n);
    int row = 0;
    for (const auto& c : irreps) {
        const Representation& v = c.irrep;
        const int d = v.dim();
        const auto twisted = detail::compose_with(v, s2);
        const auto hom = solve_intertwining(v.rho, twisted, tol);
        if (hom.empty()) fail(ErrorKind::NoTwistedMap, "no intertwiner from rho to rho o S^2");
        if (hom.size() > 1) fail(ErrorKind::InternalConsistency, "twisted intertwiner space is not one-dimensional");
        CMatrix t = hom.front();
        const cplx tr = t.trace();
        if (std::abs(tr) <= tol.eps_rank) fail(ErrorKind::NoTwistedMap, "twisted intertwiner has zero trace");
        t *= std::conj(tr) / std::abs(tr);
        if (!is_hermitian(t, std::sqrt(tol.eps_rank)))
            fail(ErrorKind::NotHermitian, "twisted intertwiner is not Hermitian after phase fixing");
        t = (t + t.adjoint()) * 0.5;
        const auto es = Eigen::SelfAdjointEigenSolver<CMatrix>(t, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) <= tol.eps_rank * es.eigenvalues()(d - 1))
            fail(ErrorKind::NegativeSpectrum, "twisted intertwiner has mixed-sign spectrum after phase fixing");
        const double trg = t.trace().real();
        const double trinv = t.inverse().trace().real();
        CMatrix gi = std::sqrt(trinv / trg) * t;
        out.per_irrep.push_back(gi);
        for (int cc = 0; cc < d; ++cc)
            for (int rr = 0; rr < d; ++rr, ++row) {
                for (int k = 0; k < n; ++k) system(row, k) = v.rho[k](rr, cc);
                rhs(row) = gi(rr, cc);
            }
    }
    Eigen::FullPivLU<CMatrix> lu(system);
    if (!lu.isInvertible()) fail(ErrorKind::InternalConsistency, "irreducibles do not separate the algebra");
    out.g = lu.solve(rhs);
    DualStructureData check(a, s, out.g, tol);
    if (!is_positive(a, out.g, tol)) fail(ErrorKind::InternalConsistency, "reconstructed g is not positive");
    return out;
}

/// sum_m chi_V(S(x_m) g y_m).
inline double fs_indicator_formula(const Representation& v, const AntiAlgebraMap& s, const CVector& g,
                                   const SeparabilityIdempotent& e, const Tolerance& tol = {}) {
    const FDStarAlgebra& a = *v.algebra;
    CVector z = CVector::Zero(a.dim());
    const CMatrix lg = a.left_of(g);
    for (const auto& [x, y] : e.pairs) z += a.multiply(s.apply(x), lg * y);
    const cplx nu = character_at(v, z);
    if (std::abs(nu.imag()) >= tol.eps_round)
        fail(ErrorKind::ComplexResult, "indicator has imaginary part " + std::to_string(nu.imag()));
    return nu.real();
}

/// Trace of f -> D(f) o eta on Hom(V, D(V)); in coordinates F -> F^T rho(g).
inline double fs_indicator_trace(const Representation& v, const AntiAlgebraMap& s, const CVector& g,
                                 const Tolerance& tol = {}) {
    const FDStarAlgebra& a = *v.algebra;
    std::vector<CMatrix> dual;
    for (int i = 0; i < a.dim(); ++i) dual.push_back(v.of(s.matrix().col(i)).transpose());
    const auto hom = solve_intertwining(v.rho, dual, tol);
    const CMatrix rg = v.of(g);
    cplx tr = 0.0;
    for (const auto& f : hom) tr += (f.adjoint() * (f.transpose() * rg)).trace();
    return tr.real();
}

enum class WitnessKind { None, RealBasis, QuaternionMap };

inline std::string_view to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::None: return "none";
        case WitnessKind::RealBasis: return "real_basis";
        case WitnessKind::QuaternionMap: return "quaternion_map";
    }
    return "none";
}

struct SignatureWitness {
    WitnessKind kind = WitnessKind::None;
    CMatrix data;  ///< change of basis P (real) or J with J conj(J) = -I (quaternionic)
};

/// Largest imaginary entry of P^{-1} rho(a) P over the R-basis of A0.
inline double real_basis_defect(const Representation& v, const RealForm& rf, const CMatrix& p) {
    const CMatrix pinv = p.inverse();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < rf.basis.cols(); ++c) {
        const CMatrix m = pinv * v.of(rf.basis.col(c)) * p;
        worst = std::max(worst, m.imag().cwiseAbs().maxCoeff());
    }
    return worst;
}

/// Max of |J conj(J) + I| and the intertwining defect J conj(rho(a)) - rho(bar a) J.
inline double quaternion_map_defect(const Representation& v, const RealForm& rf, const CMatrix& j) {
    const int d = v.dim();
    double worst = max_abs(j * j.conjugate() + CMatrix::Identity(d, d));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.rho.size()); ++i)
        worst = std::max(worst, max_abs(j * v.rho[i].conjugate() - v.of(rf.conjugation.col(i)) * j));
    return worst;
}

struct SigmaResult {
    int sigma = 0;
    double alpha = 0.0;
    SignatureWitness witness;
};

/// J-signature from an A-map F: V -> J(V), F conj(rho(a)) = rho(bar a) F.
inline SigmaResult classify_sigma(const Representation& v, const RealForm& rf, const Tolerance& tol = {}) {
    const int d = v.dim();
    std::vector<CMatrix> lhs, rhs;
    for (std::size_t i = 0; i < v.rho.size(); ++i) {
        lhs.push_back(v.rho[i].conjugate());
        rhs.push_back(v.of(rf.conjugation.col(static_cast<Eigen::Index>(i))));
    }
    const auto sol = solve_intertwining(lhs, rhs, tol);
    SigmaResult out;
    if (sol.empty()) return out;
    if (sol.size() > 1) fail(ErrorKind::InternalConsistency, "antilinear intertwiner space is not one-dimensional");
    const CMatrix& f = sol.front();
    const CMatrix ffc = f * f.conjugate();
    const cplx alpha = ffc.trace() / static_cast<double>(d);
    if (std::abs(alpha.imag()) >= tol.eps_round)
        fail(ErrorKind::InconsistentAlpha, "alpha has imaginary part " + std::to_string(alpha.imag()));
    if (max_abs(ffc - alpha * CMatrix::Identity(d, d)) >= tol.eps_round)
        fail(ErrorKind::InconsistentAlpha, "F conj(F) is not scalar");
    if (std::abs(alpha) <= tol.eps_rank) fail(ErrorKind::InconsistentAlpha, "alpha vanishes");
    out.alpha = alpha.real();
    out.sigma = out.alpha > 0 ? 1 : -1;
    const CMatrix j = f / std::sqrt(std::abs(out.alpha));
    if (out.sigma > 0) {
        out.witness.kind = WitnessKind::RealBasis;
        CMatrix p = antilinear_fixed_space(j, tol);
        if (p.cols() != d) fail(ErrorKind::InternalConsistency, "real structure has the wrong R-dimension");
        // Orthonormalize over R so the columns stay inside the fixed space.
        RMatrix stacked(2 * d, d);
        stacked << p.real(), p.imag();
        Eigen::HouseholderQR<RMatrix> rqr(stacked);
        const RMatrix q = rqr.householderQ() * RMatrix::Identity(2 * d, d);
        CMatrix pq(d, d);
        pq.real() = q.topRows(d);
        pq.imag() = q.bottomRows(d);
        out.witness.data = pq;
    } else {
        out.witness.kind = WitnessKind::QuaternionMap;
        out.witness.data = j;
    }
    return out;
}

/// R-dimension of End_{A0}(V): linear and antilinear parts solved separately.
inline int endo_real_dimension(const Representation& v, const RealForm& rf, const Tolerance& tol = {}) {
    std::vector<CMatrix> r, rc;
    for (Eigen::Index c = 0; c < rf.basis.cols(); ++c) {
        r.push_back(v.of(rf.basis.col(c)));
        rc.push_back(r.back().conjugate());
    }
    const auto lin = solve_intertwining(r, r, tol);
    const auto anti = solve_intertwining(rc, r, tol);
    const int dim = 2 * static_cast<int>(lin.size() + anti.size());
    if (dim != 2 && dim != 4)
        fail(ErrorKind::UnexpectedDimension, "End_A0(V) has R-dimension " + std::to_string(dim));
    return dim;
}

inline std::string_view label_of(int sigma) { return sigma > 0 ? "real" : sigma < 0 ? "quaternionic" : "complex"; }

struct IndicatorEntry {
    int dim = 0;
    int multiplicity = 0;
    CVector chi;
    Fingerprint print;
    double nu_formula = 0.0;
    double nu_trace = 0.0;
    int sigma = 0;
    double alpha = 0.0;
    std::string label;
    SignatureWitness witness;
    int endo_dim = 0;
};

struct IndicatorReport {
    std::vector<IndicatorEntry> entries;
    CanonicalElement canonical;
    std::vector<IrrepComponent> irreps;
};

struct ReportOptions {
    int threads = 1;
    std::optional<CVector> weight;  ///< positive central weight for the separability idempotent
};

inline int rounded(double x) { return static_cast<int>(std::lround(x)); }

/// Decomposes the regular representation and evaluates every indicator per
/// irreducible; AgreementFailure if the two indicators or sigma disagree.
inline IndicatorReport full_report(const AlgebraPtr& a, const AntiAlgebraMap& s, std::uint64_t seed,
                                   const Tolerance& tol = {}, const ReportOptions& opt = {}) {
    require_cstar(*a, tol);
    IndicatorReport rep;
    rep.irreps = decompose(regular_representation(a, tol), seed, tol);
    rep.canonical = canonical_g(*a, s, rep.irreps, tol);
    const auto e = separability_idempotent(*a, opt.weight, tol);
    const RealForm rf = real_form_from_S(s, tol);
    rep.entries.resize(rep.irreps.size());
    detail::parallel_for(static_cast<int>(rep.irreps.size()), opt.threads, [&](int idx) {
        const auto& c = rep.irreps[idx];
        IndicatorEntry& en = rep.entries[idx];
        en.dim = c.irrep.dim();
        en.multiplicity = c.multiplicity;
        en.chi = c.chi;
        en.print = c.print;
        en.nu_formula = fs_indicator_formula(c.irrep, s, rep.canonical.g, e, tol);
        en.nu_trace = fs_indicator_trace(c.irrep, s, rep.canonical.g, tol);
        const auto sg = classify_sigma(c.irrep, rf, tol);
        en.sigma = sg.sigma;
        en.alpha = sg.alpha;
        en.witness = sg.witness;
        en.label = std::string(label_of(en.sigma));
        en.endo_dim = endo_real_dimension(c.irrep, rf, tol);
    });
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& en = rep.entries[i];
        const std::string where = "irreducible #" + std::to_string(i) + " (dim " + std::to_string(en.dim) + ")";
        if (std::abs(en.nu_formula - rounded(en.nu_formula)) >= tol.eps_round ||
            std::abs(en.nu_trace - rounded(en.nu_trace)) >= tol.eps_round)
            fail(ErrorKind::AgreementFailure, where + ": indicator is not near an integer");
        if (rounded(en.nu_formula) != en.sigma || rounded(en.nu_trace) != en.sigma)
            fail(ErrorKind::AgreementFailure, where + ": nu_formula " + std::to_string(en.nu_formula) + ", nu_trace " +
                                                  std::to_string(en.nu_trace) + ", sigma " + std::to_string(en.sigma));
        if ((en.endo_dim == 2) != (en.sigma == 0))
            fail(ErrorKind::AgreementFailure, where + ": endomorphism dimension contradicts sigma");
    }
    return rep;
}

}  // namespace fsind
