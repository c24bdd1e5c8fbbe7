#pragma once

// Representations of FDStarAlgebra: validation, characters, regular
// representation, intertwiners, irreducible decomposition, dual and
// conjugate representations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsind/error.hpp"
#include "fsind/matrix_core.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind {

/// rho[i] is the matrix of e_i; `gram` H (if present) gives <x|y> = x^* H y.
struct Representation {
    AlgebraPtr algebra;
    std::vector<CMatrix> rho;
    std::optional<CMatrix> gram;

    int dim() const { return rho.empty() ? 0 : static_cast<int>(rho.front().rows()); }

    CMatrix of(const CVector& a) const {
        CMatrix m = CMatrix::Zero(dim(), dim());
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a(i) != cplx(0.0)) m += a(i) * rho[i];
        return m;
    }
};

/// chi_i = tr rho(e_i).
inline CVector character(const Representation& v) {
    CVector chi(static_cast<Eigen::Index>(v.rho.size()));
    for (std::size_t i = 0; i < v.rho.size(); ++i) chi(i) = v.rho[i].trace();
    return chi;
}

inline cplx character_at(const Representation& v, const CVector& a) { return character(v).transpose() * a; }

/// Checks the homomorphism and unit identities, and the *-identity
/// H rho(a) = rho(a*)^* H when a gram form is present.
inline void validate(const Representation& v, const Tolerance& tol = {}) {
    if (!v.algebra) fail(ErrorKind::BadRepresentation, "representation has no algebra");
    const FDStarAlgebra& a = *v.algebra;
    const int n = a.dim();
    if (static_cast<int>(v.rho.size()) != n) fail(ErrorKind::BadRepresentation, "need one matrix per basis element");
    const int d = v.dim();
    double scale = 1.0;
    for (const auto& m : v.rho) {
        if (m.rows() != d || m.cols() != d) fail(ErrorKind::BadRepresentation, "matrices must be square of equal size");
        if (!m.allFinite()) fail(ErrorKind::BadRepresentation, "matrix has non-finite entries");
        scale = std::max(scale, max_abs(m));
    }
    const double eps = 100.0 * tol.eps_rank * scale * scale;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (max_abs(v.rho[i] * v.rho[j] - v.of(a.left(i).col(j))) > eps)
                fail(ErrorKind::BadRepresentation,
                     "rho(e_" + std::to_string(i) + ") rho(e_" + std::to_string(j) + ") != rho(e_i e_j)");
    if (max_abs(v.of(a.unit()) - CMatrix::Identity(d, d)) > eps)
        fail(ErrorKind::BadRepresentation, "rho(1) != I");
    if (v.gram) {
        const CMatrix& h = *v.gram;
        if (h.rows() != d || h.cols() != d) fail(ErrorKind::NotStarRep, "gram form has the wrong shape");
        if (!is_hermitian(h, tol.eps_rank)) fail(ErrorKind::NotStarRep, "gram form is not Hermitian");
        Eigen::LLT<CMatrix> llt((h + h.adjoint()) * 0.5);
        if (llt.info() != Eigen::Success) fail(ErrorKind::NotStarRep, "gram form is not positive definite");
        const double hs = std::max(1.0, max_abs(h));
        for (int i = 0; i < n; ++i)
            if (max_abs(h * v.rho[i] - v.of(a.star(a.basis(i))).adjoint() * h) > eps * hs)
                fail(ErrorKind::NotStarRep, "<x|e_" + std::to_string(i) + " y> != <e_" + std::to_string(i) + "* x|y>");
    }
}

/// Left regular representation, with the regular-trace Gram form when A is C*-able.
inline Representation regular_representation(const AlgebraPtr& a, const Tolerance& tol = {}) {
    Representation v;
    v.algebra = a;
    v.rho = a->lefts();
    const auto c = check_cstar(*a, tol);
    if (c.is_cstar) v.gram = c.gram;
    return v;
}

/// Orthonormal basis of {T : T rho_V(e_i) = rho_W(e_i) T}.
inline std::vector<CMatrix> intertwiners(const Representation& v, const Representation& w, const Tolerance& tol = {}) {
    if (v.algebra.get() != w.algebra.get() && v.rho.size() != w.rho.size())
        fail(ErrorKind::InvalidArgument, "representations of different algebras");
    if (v.dim() == 0 || w.dim() == 0) return {};
    return solve_intertwining(v.rho, w.rho, tol);
}

/// Change of coordinates: new rho = P^{-1} rho P, gram P^* H P.
inline Representation transform(const Representation& v, const CMatrix& p) {
    Representation out;
    out.algebra = v.algebra;
    const CMatrix pinv = p.inverse();
    for (const auto& m : v.rho) out.rho.push_back(pinv * m * p);
    if (v.gram) out.gram = p.adjoint() * *v.gram * p;
    return out;
}

using Fingerprint = std::vector<std::pair<std::int64_t, std::int64_t>>;

/// Character values rounded to 1e-6, by basis index.
inline Fingerprint fingerprint(const CVector& chi) {
    Fingerprint f;
    f.reserve(chi.size());
    auto q = [](double x) {
        const auto r = std::llround(x * 1e6);
        return r == 0 ? std::int64_t{0} : static_cast<std::int64_t>(r);
    };
    for (Eigen::Index i = 0; i < chi.size(); ++i) f.emplace_back(q(chi(i).real()), q(chi(i).imag()));
    return f;
}

struct IrrepComponent {
    Representation irrep;            ///< orthonormal coordinates, gram = I
    int multiplicity = 0;
    std::vector<CMatrix> embeddings;  ///< one per copy: columns in the coordinates of the input
    CVector chi;
    Fingerprint print;
};

struct DecomposeOptions {
    int max_retries = 8;
    bool central_presplit = true;
};

namespace detail {

/// Restriction of a unitary-frame representation to the orthonormal columns q.
inline std::vector<CMatrix> restrict_to(const std::vector<CMatrix>& rho, const CMatrix& q) {
    std::vector<CMatrix> out;
    out.reserve(rho.size());
    for (const auto& m : rho) out.push_back(q.adjoint() * m * q);
    return out;
}

/// Splits orthonormal columns q by the eigenspaces of Hermitian h (given in q-coordinates).
inline std::vector<CMatrix> eigen_split(const CMatrix& q, const CMatrix& h, const Tolerance& tol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5);
    std::vector<CMatrix> parts;
    for (auto [start, count] : cluster_eigenvalues(es.eigenvalues(), tol.eps_eig)) {
        CMatrix u = es.eigenvectors().middleCols(start, count);
        parts.push_back(q * u);
    }
    return parts;
}

inline CMatrix random_hermitian_combination(const std::vector<CMatrix>& basis, CounterRng& rng) {
    CMatrix x = CMatrix::Zero(basis.front().rows(), basis.front().cols());
    for (const auto& b : basis) x += rng.complex_normal() * b;
    CMatrix h = (x + x.adjoint()) * 0.5;
    const double s = max_abs(h);
    return s > 0.0 ? CMatrix(h / s) : h;
}

inline void split_irreducible(const std::vector<CMatrix>& rho, const CMatrix& q, CounterRng& rng,
                              const DecomposeOptions& opt, const Tolerance& tol, std::vector<CMatrix>& out) {
    if (q.cols() == 1) {
        out.push_back(q);
        return;
    }
    const auto sub = restrict_to(rho, q);
    const auto comm = solve_intertwining(sub, sub, tol);
    if (comm.empty()) fail(ErrorKind::InternalConsistency, "commutant lost the identity");
    if (comm.size() == 1) {
        out.push_back(q);
        return;
    }
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
        const CMatrix h = random_hermitian_combination(comm, rng);
        auto parts = eigen_split(CMatrix::Identity(q.cols(), q.cols()), h, tol);
        if (parts.size() < 2) continue;
        for (const auto& p : parts) split_irreducible(rho, q * p, rng, opt, tol, out);
        return;
    }
    fail(ErrorKind::InternalConsistency, "commutant split stayed degenerate after retries");
}

}  // namespace detail

/// Splits a *-representation into irreducible *-subrepresentations.
///
/// Works in the unitary frame of the gram form. A random Hermitian central
/// element first separates isotypic blocks; each block is split further by
/// random Hermitian elements of its commutant until the commutant is scalar.
/// Copies are grouped by intertwiner tests and sorted by (dim, fingerprint).
inline std::vector<IrrepComponent> decompose(const Representation& v, std::uint64_t seed,
                                             const Tolerance& tol = {}, const DecomposeOptions& opt = {}) {
    if (!v.gram) fail(ErrorKind::NotStarRep, "decompose needs a gram form");
    validate(v, tol);
    const FDStarAlgebra& a = *v.algebra;
    const int d = v.dim();
    const CMatrix r = orthonormalizer(*v.gram, tol);
    const CMatrix rinv = r.triangularView<Eigen::Upper>().solve(CMatrix::Identity(d, d));
    std::vector<CMatrix> rho;
    rho.reserve(v.rho.size());
    for (const auto& m : v.rho) rho.push_back(r * m * rinv);

    CounterRng rng(seed, 0xDEC0);
    std::vector<CMatrix> blocks{CMatrix::Identity(d, d)};
    if (opt.central_presplit) {
        const CMatrix z = center_basis(a, tol);
        if (z.cols() > 1) {
            for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
                CVector c = CVector::Zero(a.dim());
                for (Eigen::Index k = 0; k < z.cols(); ++k) c += rng.normal() * z.col(k);
                c = 0.5 * (c + a.star(c));
                CMatrix h = CMatrix::Zero(d, d);
                for (int i = 0; i < a.dim(); ++i)
                    if (c(i) != cplx(0.0)) h += c(i) * rho[i];
                const double s = max_abs(h);
                if (s == 0.0) continue;
                auto parts = detail::eigen_split(CMatrix::Identity(d, d), h / s, tol);
                if (parts.size() > 1 || attempt == opt.max_retries) {
                    blocks = std::move(parts);
                    break;
                }
            }
        }
    }

    std::vector<CMatrix> pieces;
    for (const auto& q : blocks) detail::split_irreducible(rho, q, rng, opt, tol, pieces);

    std::vector<IrrepComponent> comps;
    int total = 0;
    for (const auto& q : pieces) {
        Representation w;
        w.algebra = v.algebra;
        w.rho = detail::restrict_to(rho, q);
        w.gram = CMatrix::Identity(q.cols(), q.cols());
        const CMatrix emb = rinv * q;
        total += static_cast<int>(q.cols());
        bool placed = false;
        for (auto& c : comps) {
            if (c.irrep.dim() != w.dim()) continue;
            const auto hom = solve_intertwining(w.rho, c.irrep.rho, tol);
            if (hom.size() > 1)
                fail(ErrorKind::InternalConsistency, "irreducible pieces share a multi-dimensional Hom space");
            if (hom.size() == 1) {
                const CMatrix& t = hom[0];
                const double scale = std::sqrt((t.adjoint() * t).trace().real() / t.cols());
                ++c.multiplicity;
                c.embeddings.push_back(emb * (t / scale).adjoint());
                placed = true;
                break;
            }
        }
        if (!placed) {
            IrrepComponent c;
            c.chi = character(w);
            c.print = fingerprint(c.chi);
            c.irrep = std::move(w);
            c.multiplicity = 1;
            c.embeddings.push_back(emb);
            comps.push_back(std::move(c));
        }
    }
    if (total != d) fail(ErrorKind::InternalConsistency, "decomposition dimensions do not add up");
    std::stable_sort(comps.begin(), comps.end(), [](const IrrepComponent& x, const IrrepComponent& y) {
        if (x.irrep.dim() != y.irrep.dim()) return x.irrep.dim() < y.irrep.dim();
        return x.print < y.print;
    });
    return comps;
}

/// D(V): rho_D(a) = rho(S(a))^T on the dual basis, gram H^{-T} rho(g)^T so
/// that <phi_x|phi_y> = <y|g x>.
inline Representation dual_representation(const Representation& v, const DualStructureData& ds,
                                          const Tolerance& tol = {}) {
    if (!v.gram) fail(ErrorKind::NotStarRep, "dual representation needs a gram form");
    const FDStarAlgebra& a = *v.algebra;
    if (!is_positive(a, ds.g, tol)) fail(ErrorKind::BadDualStructure, "g is not positive");
    Representation out;
    out.algebra = v.algebra;
    for (int i = 0; i < a.dim(); ++i) out.rho.push_back(v.of(ds.S.matrix().col(i)).transpose());
    const CMatrix& h = *v.gram;
    CMatrix hd = h.transpose().inverse() * v.of(ds.g).transpose();
    out.gram = (hd + hd.adjoint()) * 0.5;
    return out;
}

/// J(V): rho_J(e_i) = conj(rho(bar e_i)), gram (H rho(g))^T so that
/// <bar x|bar y> = <y|g x>. Without g the plain conj(H) is used.
inline Representation conjugate_representation(const Representation& v, const RealForm& rf,
                                               const std::optional<CVector>& g = {}) {
    const FDStarAlgebra& a = *v.algebra;
    Representation out;
    out.algebra = v.algebra;
    for (int i = 0; i < a.dim(); ++i) out.rho.push_back(v.of(rf.conjugation.col(i)).conjugate());
    if (v.gram) {
        CMatrix hj = g ? CMatrix((*v.gram * v.of(*g)).transpose()) : CMatrix(v.gram->conjugate());
        out.gram = (hj + hj.adjoint()) * 0.5;
    }
    return out;
}

/// Coordinates of the Riesz map J(V) -> D(V), bar x -> <x| . >.
inline CMatrix riesz_map(const Representation& v) {
    if (!v.gram) fail(ErrorKind::NotStarRep, "Riesz map needs a gram form");
    return v.gram->conjugate();
}

}  // namespace fsind
