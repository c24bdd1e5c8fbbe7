#pragma once

// Builders for concrete *-algebras: group algebras, table algebras and
// association schemes, groupoid weak Hopf algebras, Drinfeld doubles and dual
// Hopf algebras, together with the specialised indicator formulas.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsind/error.hpp"
#include "fsind/indicator.hpp"
#include "fsind/matrix_core.hpp"
#include "fsind/representation.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind {

// ---------------------------------------------------------------- groups

struct GroupTable {
    int order = 0;
    std::vector<std::vector<int>> table;  ///< table[a][b] = a b
    int identity = 0;
    std::vector<int> inverse;

    int mul(int a, int b) const { return table[a][b]; }
};

/// Validates closure, associativity, identity and inverses exhaustively.
/// A missing inverse list is derived from the table.
inline GroupTable make_group(std::vector<std::vector<int>> table, std::vector<int> inverse = {}) {
    GroupTable g;
    g.order = static_cast<int>(table.size());
    if (g.order == 0) fail(ErrorKind::BadGroup, "group must be nonempty");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != g.order) fail(ErrorKind::BadGroup, "table must be square");
        for (int x : row)
            if (x < 0 || x >= g.order) fail(ErrorKind::BadGroup, "table entry out of range");
    }
    g.table = std::move(table);
    const int n = g.order;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
                    fail(ErrorKind::BadGroup, "not associative at " + detail::triple(a, b, c));
    int e = -1;
    for (int a = 0; a < n && e < 0; ++a) {
        bool ok = true;
        for (int b = 0; b < n && ok; ++b) ok = g.mul(a, b) == b && g.mul(b, a) == b;
        if (ok) e = a;
    }
    if (e < 0) fail(ErrorKind::BadGroup, "no identity element");
    g.identity = e;
    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.mul(a, b) == e && g.mul(b, a) == e) inv[a] = b;
    for (int a = 0; a < n; ++a)
        if (inv[a] < 0) fail(ErrorKind::BadGroup, "element " + std::to_string(a) + " has no inverse");
    if (!inverse.empty() && inverse != inv) fail(ErrorKind::BadGroup, "inverse list does not match the table");
    g.inverse = std::move(inv);
    return g;
}

inline GroupTable cyclic_group(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return make_group(std::move(t));
}

/// Group generated by the given permutations' closure, listed in discovery order
/// starting from the identity. Composition (p q)(x) = p(q(x)).
inline GroupTable permutation_group(const std::vector<std::vector<int>>& generators) {
    if (generators.empty()) fail(ErrorKind::BadGroup, "need at least one generator");
    const std::size_t deg = generators.front().size();
    std::vector<int> id(deg);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    auto compose = [](const std::vector<int>& p, const std::vector<int>& q) {
        std::vector<int> r(q.size());
        for (std::size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
        return r;
    };
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& s : generators) {
            auto r = compose(s, elems[i]);
            if (!index.count(r)) {
                index[r] = static_cast<int>(elems.size());
                elems.push_back(r);
            }
        }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
    return make_group(std::move(t));
}

inline GroupTable symmetric_group(int k) {
    std::vector<int> swap(k), cycle(k);
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[0], swap[1]);
    for (int x = 0; x < k; ++x) cycle[x] = (x + 1) % k;
    return permutation_group({swap, cycle});
}

inline GroupTable dihedral_group(int m) {
    std::vector<int> rot(m), refl(m);
    for (int x = 0; x < m; ++x) {
        rot[x] = (x + 1) % m;
        refl[x] = (m - x) % m;
    }
    return permutation_group({rot, refl});
}

/// Q8 as the regular permutation action of {+-1, +-i, +-j, +-k}.
inline GroupTable quaternion_group() {
    // Elements 0..7 = 1, i, j, k, -1, -i, -j, -k.
    auto mul = [](int a, int b) {
        static const int base[4][4] = {{0, 1, 2, 3}, {1, 4, 3, 6}, {2, 7, 4, 1}, {3, 2, 5, 4}};
        int r = base[a % 4][b % 4];
        if ((a >= 4) != (b >= 4)) r = (r + 4) % 8;
        return r;
    };
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) t[a][b] = mul(a, b);
    return make_group(std::move(t));
}

struct GroupAlgebraData {
    AlgebraPtr algebra;
    AntiAlgebraMap S;
    SeparabilityIdempotent haar_idempotent;  ///< (1/n) sum g^{-1} (x) g
};

/// C[G] with g* = g^{-1} (antilinear) and S(g) = g^{-1} (linear).
inline GroupAlgebraData group_algebra(const GroupTable& g, const Tolerance& tol = {}) {
    const int n = g.order;
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) left[a](g.mul(a, b), b) = 1.0;
    CMatrix inv = CMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) inv(g.inverse[a], a) = 1.0;
    auto alg = share(FDStarAlgebra::from_left(std::move(left), CVector::Unit(n, g.identity), inv, tol));
    AntiAlgebraMap s(*alg, inv, tol);
    SeparabilityIdempotent e;
    for (int a = 0; a < n; ++a) e.pairs.emplace_back(CVector::Unit(n, g.inverse[a]) / double(n), CVector::Unit(n, a));
    return {alg, std::move(s), std::move(e)};
}

/// Checks that `tau` is an involutive automorphism of G.
inline void validate_group_involution(const GroupTable& g, const std::vector<int>& tau) {
    const int n = g.order;
    if (static_cast<int>(tau.size()) != n) fail(ErrorKind::NotInvolution, "permutation has the wrong length");
    for (int a = 0; a < n; ++a) {
        if (tau[a] < 0 || tau[a] >= n) fail(ErrorKind::NotInvolution, "permutation entry out of range");
        if (tau[tau[a]] != a) fail(ErrorKind::NotInvolution, "tau^2 != id at " + std::to_string(a));
        for (int b = 0; b < n; ++b)
            if (tau[g.mul(a, b)] != g.mul(tau[a], tau[b]))
                fail(ErrorKind::NotInvolution, "tau is not multiplicative at (" + std::to_string(a) + "," +
                                                   std::to_string(b) + ")");
    }
}

inline CMatrix permutation_matrix(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    CMatrix p = CMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) p(perm[a], a) = 1.0;
    return p;
}

/// (1/|G|) sum_h chi_V(tau(h) h).
inline double twisted_indicator(const GroupTable& g, const std::vector<int>& tau, const Representation& v,
                                const Tolerance& tol = {}) {
    validate_group_involution(g, tau);
    const CVector chi = character(v);
    cplx s = 0.0;
    for (int h = 0; h < g.order; ++h) s += chi(g.mul(tau[h], h));
    s /= double(g.order);
    if (std::abs(s.imag()) >= tol.eps_round) fail(ErrorKind::ComplexResult, "twisted indicator is not real");
    return s.real();
}

// ---------------------------------------------------------- table algebras

struct TableAlgebraData {
    int r = 0;               ///< number of basis elements b_0..b_{r-1}; b_0 = 1
    std::vector<double> p;   ///< p[(i * r + j) * r + k]: b_i b_j = sum_k p b_k
    std::vector<int> star;   ///< i -> i*

    double at(int i, int j, int k) const { return p[(static_cast<std::size_t>(i) * r + j) * r + k]; }
};

/// Axioms T0-T2 and the involution; AxiomViolation names the failing axiom.
inline void validate_table(const TableAlgebraData& t, double eps = 1e-9) {
    const int r = t.r;
    if (r <= 0) fail(ErrorKind::AxiomViolation, "(T0) empty basis");
    if (static_cast<int>(t.p.size()) != r * r * r) fail(ErrorKind::AxiomViolation, "(T1) p has the wrong size");
    if (static_cast<int>(t.star.size()) != r) fail(ErrorKind::AxiomViolation, "(T2) star has the wrong size");
    for (double x : t.p)
        if (!std::isfinite(x)) fail(ErrorKind::AxiomViolation, "(T1) non-finite structure constant");
    for (int i = 0; i < r; ++i) {
        const int s = t.star[i];
        if (s < 0 || s >= r || t.star[s] != i)
            fail(ErrorKind::AxiomViolation, "(T2) i -> i* is not an involution at " + std::to_string(i));
    }
    if (t.star[0] != 0) fail(ErrorKind::AxiomViolation, "(T0) 0* != 0");
    for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) {
            const double d = j == k ? 1.0 : 0.0;
            if (std::abs(t.at(0, j, k) - d) > eps || std::abs(t.at(j, 0, k) - d) > eps)
                fail(ErrorKind::AxiomViolation, "(T0) b_0 is not the unit at " + detail::triple(0, j, k));
        }
    for (int i = 0; i < r; ++i) {
        const int s = t.star[i];
        if (!(t.at(i, s, 0) > eps) || std::abs(t.at(i, s, 0) - t.at(s, i, 0)) > eps)
            fail(ErrorKind::AxiomViolation, "(T2) p[" + std::to_string(i) + "][" + std::to_string(s) +
                                                "][0] must equal p[i*][i][0] and be positive");
        for (int j = 0; j < r; ++j)
            if (j != s && std::abs(t.at(i, j, 0)) > eps)
                fail(ErrorKind::AxiomViolation, "(T2) p[" + std::to_string(i) + "][" + std::to_string(j) + "][0] != 0");
    }
}

/// Intersection numbers from 0/1 relation matrices A_0 = I, ..., A_{r-1}.
inline TableAlgebraData table_from_relations(const std::vector<RMatrix>& rel) {
    const int r = static_cast<int>(rel.size());
    if (r == 0) fail(ErrorKind::AxiomViolation, "(T0) no relations");
    const Eigen::Index n = rel.front().rows();
    RMatrix sum = RMatrix::Zero(n, n);
    for (const auto& a : rel) {
        if (a.rows() != n || a.cols() != n) fail(ErrorKind::AxiomViolation, "relation matrices differ in size");
        for (Eigen::Index x = 0; x < a.size(); ++x)
            if (a.data()[x] != 0.0 && a.data()[x] != 1.0) fail(ErrorKind::AxiomViolation, "relation matrix is not 0/1");
        sum += a;
    }
    if (!sum.isApprox(RMatrix::Ones(n, n))) fail(ErrorKind::AxiomViolation, "relations do not partition X x X");
    if (!rel.front().isApprox(RMatrix::Identity(n, n))) fail(ErrorKind::AxiomViolation, "(T0) A_0 is not the identity");
    TableAlgebraData t;
    t.r = r;
    t.star.assign(r, -1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (rel[i].transpose() == rel[j]) t.star[i] = j;
    for (int i = 0; i < r; ++i)
        if (t.star[i] < 0) fail(ErrorKind::AxiomViolation, "(T2) transpose of relation " + std::to_string(i) + " missing");
    t.p.assign(static_cast<std::size_t>(r) * r * r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const RMatrix prod = rel[i] * rel[j];
            RMatrix rebuilt = RMatrix::Zero(n, n);
            for (int k = 0; k < r; ++k) {
                Eigen::Index x = 0, y = 0;
                for (Eigen::Index c = 0; c < n * n; ++c)
                    if (rel[k](c % n, c / n) == 1.0) {
                        x = c % n;
                        y = c / n;
                        break;
                    }
                t.p[(static_cast<std::size_t>(i) * r + j) * r + k] = prod(x, y);
                rebuilt += prod(x, y) * rel[k];
            }
            if (!prod.isApprox(rebuilt))
                fail(ErrorKind::AxiomViolation, "A_i A_j is not in the span of the relations at (" + std::to_string(i) +
                                                    "," + std::to_string(j) + ")");
        }
    return t;
}

struct TableAlgebraResult {
    AlgebraPtr algebra;
    AntiAlgebraMap S;  ///< linear extension of b_i -> b_{i*}; real form span_R(B)
    SeparabilityIdempotent idempotent;
    CVector v;
};

inline TableAlgebraResult table_algebra(const TableAlgebraData& t, const Tolerance& tol = {}) {
    validate_table(t);
    const int r = t.r;
    std::vector<CMatrix> left(r, CMatrix::Zero(r, r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) left[i](k, j) = t.at(i, j, k);
    const CMatrix sigma = permutation_matrix(t.star);
    auto alg = share(FDStarAlgebra::from_left(std::move(left), CVector::Unit(r, 0), sigma, tol));
    AntiAlgebraMap s(*alg, sigma, tol);
    CVector v = CVector::Zero(r);
    for (int i = 0; i < r; ++i) {
        const int is = t.star[i];
        v += alg->multiply(alg->basis(is), alg->basis(i)) / t.at(i, is, 0);
    }
    const double eps = 1e-8 * std::max(1.0, v.cwiseAbs().maxCoeff());
    for (int i = 0; i < r; ++i)
        if ((alg->multiply(v, alg->basis(i)) - alg->multiply(alg->basis(i), v)).cwiseAbs().maxCoeff() > eps)
            fail(ErrorKind::AxiomViolation, "v is not central");
    if (!is_positive(*alg, v, tol)) fail(ErrorKind::AxiomViolation, "v is not positive");
    const CVector vinv = alg->inverse(v, tol);
    SeparabilityIdempotent e;
    for (int i = 0; i < r; ++i) {
        const int is = t.star[i];
        e.pairs.emplace_back(alg->basis(is) / t.at(i, is, 0), alg->multiply(alg->basis(i), vinv));
    }
    validate_separability(*alg, e);
    return {alg, std::move(s), std::move(e), v};
}

/// Checks that tau is an involutive automorphism of the table algebra.
inline void validate_table_involution(const TableAlgebraData& t, const std::vector<int>& tau, double eps = 1e-9) {
    const int r = t.r;
    if (static_cast<int>(tau.size()) != r) fail(ErrorKind::NotInvolution, "permutation has the wrong length");
    for (int i = 0; i < r; ++i)
        if (tau[i] < 0 || tau[i] >= r || tau[tau[i]] != i) fail(ErrorKind::NotInvolution, "tau^2 != id");
    if (tau[0] != 0) fail(ErrorKind::NotInvolution, "tau(b_0) != b_0");
    for (int i = 0; i < r; ++i) {
        if (tau[t.star[i]] != t.star[tau[i]]) fail(ErrorKind::NotInvolution, "tau does not commute with *");
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                if (std::abs(t.at(tau[i], tau[j], tau[k]) - t.at(i, j, k)) > eps)
                    fail(ErrorKind::NotInvolution, "tau is not multiplicative at " + detail::triple(i, j, k));
    }
}

struct TableIndicator {
    double raw = 0.0;    ///< sum_i (1/p_{i i*}^0) chi(b_{tau(i)} b_i)
    double ratio = 0.0;  ///< chi(v) / chi(1)
    double value = 0.0;  ///< raw / ratio
};

inline TableIndicator table_indicator(const TableAlgebraData& t, const TableAlgebraResult& ta, const Representation& v,
                                      const std::optional<std::vector<int>>& tau = {}, const Tolerance& tol = {}) {
    std::vector<int> tt(t.r);
    std::iota(tt.begin(), tt.end(), 0);
    if (tau) {
        validate_table_involution(t, *tau);
        tt = *tau;
    }
    const FDStarAlgebra& a = *ta.algebra;
    cplx raw = 0.0;
    for (int i = 0; i < t.r; ++i)
        raw += character_at(v, a.multiply(a.basis(tt[i]), a.basis(i))) / t.at(i, t.star[i], 0);
    const cplx chiv = character_at(v, ta.v);
    const cplx chi1 = character_at(v, a.unit());
    if (std::abs(raw.imag()) >= tol.eps_round || std::abs(chiv.imag()) >= tol.eps_round)
        fail(ErrorKind::ComplexResult, "table-algebra indicator is not real");
    TableIndicator out;
    out.raw = raw.real();
    out.ratio = chiv.real() / chi1.real();
    out.value = out.raw / out.ratio;
    return out;
}

// ------------------------------------------------------------- weak Hopf

/// Coproduct stored as an n^2 x n matrix: column k holds Delta(e_k) with row i * n + j
/// the coefficient of e_i (x) e_j.
struct WeakHopfData {
    AlgebraPtr algebra;
    CMatrix delta;
    CVector counit;  ///< counit(i) = eps(e_i)
    AntiAlgebraMap S;
    std::optional<CVector> haar;

    int dim() const { return algebra->dim(); }

    /// Delta(a) as an n x n coefficient matrix.
    CMatrix coproduct(const CVector& a) const {
        const int n = dim();
        const CVector flat = delta * a;
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
        return m;
    }

    /// P(a, b) = eps(e_a e_b).
    CMatrix counit_pairing() const {
        const int n = dim();
        CMatrix p(n, n);
        for (int a = 0; a < n; ++a) p.row(a) = counit.transpose() * algebra->left(a);
        return p;
    }

    /// Column a holds eps_L(e_a) = eps(1_(1) e_a) 1_(2).
    CMatrix epsilon_L() const { return coproduct(algebra->unit()).transpose() * counit_pairing(); }

    /// Column a holds eps_R(e_a) = 1_(1) eps(e_a 1_(2)).
    CMatrix epsilon_R() const { return coproduct(algebra->unit()) * counit_pairing().transpose(); }
};

namespace detail {

inline CMatrix tensor_product_in(const FDStarAlgebra& a, const CMatrix& x, const CMatrix& y) {
    // (sum x_ij e_i (x) e_j)(sum y_kl e_k (x) e_l) = sum x_ij L_i y L_j^T.
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (x(i, j) != cplx(0.0)) out += x(i, j) * a.left(int(i)) * y * a.left(int(j)).transpose();
    return out;
}

}  // namespace detail

/// Checks coassociativity, counit laws, multiplicativity of Delta, the weak
/// counit identities consumed by eps_L/eps_R, and Delta(a*) = Delta(a)^{* (x) *}.
inline void validate_weak_hopf(const WeakHopfData& w, const Tolerance& tol = {}) {
    const FDStarAlgebra& a = *w.algebra;
    const int n = a.dim();
    if (w.delta.rows() != n * n || w.delta.cols() != n || w.counit.size() != n)
        fail(ErrorKind::BadWeakHopf, "coproduct or counit has the wrong shape");
    const double eps = 1e3 * tol.eps_rank * std::max(1.0, max_abs(w.delta));
    std::vector<CMatrix> d(n);
    for (int k = 0; k < n; ++k) d[k] = w.coproduct(CVector::Unit(n, k));

    for (int k = 0; k < n; ++k) {
        // (Delta (x) id) Delta vs (id (x) Delta) Delta, as n x n^2 slices indexed by the last leg.
        std::vector<CMatrix> lhs(n, CMatrix::Zero(n, n)), rhs(n, CMatrix::Zero(n, n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx c = d[k](i, j);
                if (c == cplx(0.0)) continue;
                lhs[j] += c * d[i];
                for (int l = 0; l < n; ++l) rhs[l].row(i) += c * d[j].col(l).transpose();
            }
        for (int j = 0; j < n; ++j)
            if (max_abs(lhs[j] - rhs[j]) > eps) fail(ErrorKind::BadWeakHopf, "coproduct is not coassociative at e_" + std::to_string(k));
        const CVector left_counit = d[k].transpose() * w.counit;
        const CVector right_counit = d[k] * w.counit;
        if ((left_counit - CVector::Unit(n, k)).cwiseAbs().maxCoeff() > eps ||
            (right_counit - CVector::Unit(n, k)).cwiseAbs().maxCoeff() > eps)
            fail(ErrorKind::BadWeakHopf, "counit law fails at e_" + std::to_string(k));
        const CMatrix starred = a.sigma() * d[k].conjugate() * a.sigma().transpose();
        CMatrix of_star = CMatrix::Zero(n, n);
        for (int m = 0; m < n; ++m)
            if (a.sigma()(m, k) != cplx(0.0)) of_star += a.sigma()(m, k) * d[m];
        if (max_abs(starred - of_star) > eps) fail(ErrorKind::BadWeakHopf, "Delta(a*) != Delta(a)* at e_" + std::to_string(k));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CMatrix prod = CMatrix::Zero(n, n);
            for (int k = 0; k < n; ++k)
                if (a.left(i)(k, j) != cplx(0.0)) prod += a.left(i)(k, j) * d[k];
            if (max_abs(prod - detail::tensor_product_in(a, d[i], d[j])) > eps)
                fail(ErrorKind::BadWeakHopf, "Delta is not multiplicative at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    const CMatrix p = w.counit_pairing();
    for (int b = 0; b < n; ++b) {
        const CMatrix lhs = a.right(b).transpose() * p;
        if (max_abs(lhs - p * d[b] * p) > eps || max_abs(lhs - p * d[b].transpose() * p) > eps)
            fail(ErrorKind::BadWeakHopf, "weak counit identity fails at e_" + std::to_string(b));
    }
}

/// Unique Lambda with eps_L(Lambda) = 1 = eps_R(Lambda), a Lambda = eps_L(a) Lambda,
/// Lambda a = Lambda eps_R(a); solved as one stacked linear system.
inline CVector haar_integral(const WeakHopfData& w, const Tolerance& tol = {}) {
    const FDStarAlgebra& a = *w.algebra;
    const int n = a.dim();
    const CMatrix el = w.epsilon_L();
    const CMatrix er = w.epsilon_R();
    CMatrix m(2 * n + 2 * n * n, n);
    CVector rhs = CVector::Zero(m.rows());
    m.topRows(n) = el;
    m.middleRows(n, n) = er;
    rhs.head(n) = a.unit();
    rhs.segment(n, n) = a.unit();
    for (int i = 0; i < n; ++i) {
        m.middleRows(2 * n + i * n, n) = a.left(i) - a.left_of(el.col(i));
        m.middleRows(2 * n + n * n + i * n, n) = a.right(i) - a.right_of(er.col(i));
    }
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol.eps_rank);
    const CVector x = svd.solve(rhs);
    const double resid = (m * x - rhs).norm();
    if (resid > 1e3 * tol.eps_rank * std::max(1.0, rhs.norm()))
        fail(ErrorKind::NoHaar, "Haar equations are inconsistent (residual " + std::to_string(resid) + ")");
    if (svd.rank() < n) fail(ErrorKind::NonUniqueHaar, "Haar solution space has dimension " + std::to_string(n - svd.rank()));
    return x;
}

/// tau(Lambda_(1)) Lambda_(2); tau = id when absent.
inline CVector twisted_haar_element(const WeakHopfData& w, const CVector& haar, const std::optional<CMatrix>& tau = {}) {
    const FDStarAlgebra& a = *w.algebra;
    const int n = a.dim();
    const CMatrix d = w.coproduct(haar);
    const CMatrix t = tau ? *tau : CMatrix::Identity(n, n);
    CVector out = CVector::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d(i, j) != cplx(0.0)) out += d(i, j) * a.multiply(t.col(i), a.basis(j));
    return out;
}

/// (chi(g) / chi(1)) chi(tau(Lambda_(1)) Lambda_(2)).
inline double weak_hopf_indicator(const WeakHopfData& w, const CVector& haar, const CVector& g, const Representation& v,
                                  const std::optional<CMatrix>& tau = {}, const Tolerance& tol = {}) {
    const cplx val = character_at(v, g) / character_at(v, w.algebra->unit()) *
                     character_at(v, twisted_haar_element(w, haar, tau));
    if (std::abs(val.imag()) >= tol.eps_round) fail(ErrorKind::ComplexResult, "weak Hopf indicator is not real");
    return val.real();
}

/// E = S(Lambda_(1)) (x) Lambda_(2).
inline SeparabilityIdempotent haar_separability_idempotent(const WeakHopfData& w, const CVector& haar) {
    const int n = w.dim();
    const CMatrix d = w.coproduct(haar);
    SeparabilityIdempotent e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d(i, j) != cplx(0.0)) e.pairs.emplace_back(d(i, j) * w.S.apply(w.algebra->basis(i)), w.algebra->basis(j));
    return e;
}

/// C[G] as a Hopf *-algebra: Delta(g) = g (x) g, eps(g) = 1, S(g) = g^{-1}.
inline WeakHopfData group_hopf(const GroupTable& g, const Tolerance& tol = {}) {
    auto ga = group_algebra(g, tol);
    const int n = g.order;
    CMatrix delta = CMatrix::Zero(n * n, n);
    for (int a = 0; a < n; ++a) delta(a * n + a, a) = 1.0;
    WeakHopfData w{ga.algebra, std::move(delta), CVector::Ones(n), ga.S, std::nullopt};
    validate_weak_hopf(w, tol);
    w.haar = haar_integral(w, tol);
    return w;
}

struct GroupoidData {
    int objects = 0;
    std::vector<std::pair<int, int>> arrows;      ///< (source, target)
    std::map<std::pair<int, int>, int> compose;   ///< (a, b) -> a b, defined iff source(a) = target(b)
};

struct GroupoidInfo {
    std::vector<int> identity;  ///< per object
    std::vector<int> inverse;   ///< per arrow
};

inline GroupoidInfo validate_groupoid(const GroupoidData& gd) {
    const int m = static_cast<int>(gd.arrows.size());
    if (gd.objects <= 0 || m == 0) fail(ErrorKind::BadGroupoid, "groupoid must have objects and arrows");
    for (auto [s, t] : gd.arrows)
        if (s < 0 || t < 0 || s >= gd.objects || t >= gd.objects) fail(ErrorKind::BadGroupoid, "arrow endpoint out of range");
    for (const auto& [ab, c] : gd.compose) {
        auto [x, y] = ab;
        if (x < 0 || y < 0 || c < 0 || x >= m || y >= m || c >= m) fail(ErrorKind::BadGroupoid, "composition index out of range");
        if (gd.arrows[x].first != gd.arrows[y].second)
            fail(ErrorKind::BadGroupoid, "composition given for a non-composable pair");
        if (gd.arrows[c].first != gd.arrows[y].first || gd.arrows[c].second != gd.arrows[x].second)
            fail(ErrorKind::BadGroupoid, "composite has wrong endpoints");
    }
    auto comp = [&](int x, int y) {
        auto it = gd.compose.find({x, y});
        if (it == gd.compose.end())
            fail(ErrorKind::BadGroupoid, "missing composite of arrows " + std::to_string(x) + " and " + std::to_string(y));
        return it->second;
    };
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (gd.arrows[x].first == gd.arrows[y].second) comp(x, y);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int z = 0; z < m; ++z)
                if (gd.arrows[x].first == gd.arrows[y].second && gd.arrows[y].first == gd.arrows[z].second &&
                    comp(comp(x, y), z) != comp(x, comp(y, z)))
                    fail(ErrorKind::BadGroupoid, "composition is not associative at " + detail::triple(x, y, z));
    GroupoidInfo info;
    info.identity.assign(gd.objects, -1);
    for (int x = 0; x < m; ++x) {
        auto [s, t] = gd.arrows[x];
        if (s != t) continue;
        bool ok = true;
        for (int y = 0; y < m && ok; ++y) {
            if (gd.arrows[y].second == s) ok = comp(x, y) == y;
            if (ok && gd.arrows[y].first == s) ok = comp(y, x) == y;
        }
        if (ok) info.identity[s] = x;
    }
    for (int o = 0; o < gd.objects; ++o)
        if (info.identity[o] < 0) fail(ErrorKind::BadGroupoid, "object " + std::to_string(o) + " has no identity arrow");
    info.inverse.assign(m, -1);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            auto [s, t] = gd.arrows[x];
            if (gd.arrows[y].first == t && gd.arrows[y].second == s && comp(y, x) == info.identity[s] &&
                comp(x, y) == info.identity[t])
                info.inverse[x] = y;
        }
    for (int x = 0; x < m; ++x)
        if (info.inverse[x] < 0) fail(ErrorKind::BadGroupoid, "arrow " + std::to_string(x) + " has no inverse");
    return info;
}

/// Groupoid algebra with Delta(a) = a (x) a, eps = 1, S(a) = a* = a^{-1}; Haar integral attached.
inline WeakHopfData groupoid_weak_hopf(const GroupoidData& gd, const Tolerance& tol = {}) {
    const auto info = validate_groupoid(gd);
    const int n = static_cast<int>(gd.arrows.size());
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (const auto& [ab, c] : gd.compose) left[ab.first](c, ab.second) = 1.0;
    CVector unit = CVector::Zero(n);
    for (int id : info.identity) unit(id) = 1.0;
    const CMatrix inv = permutation_matrix(info.inverse);
    auto alg = share(FDStarAlgebra::from_left(std::move(left), unit, inv, tol));
    CMatrix delta = CMatrix::Zero(n * n, n);
    for (int a = 0; a < n; ++a) delta(a * n + a, a) = 1.0;
    WeakHopfData w{alg, std::move(delta), CVector::Ones(n), AntiAlgebraMap(*alg, inv, tol), std::nullopt};
    validate_weak_hopf(w, tol);
    w.haar = haar_integral(w, tol);
    return w;
}

/// Pair groupoid on k objects: one arrow (s -> t) for every ordered pair.
inline GroupoidData pair_groupoid(int k) {
    GroupoidData gd;
    gd.objects = k;
    for (int t = 0; t < k; ++t)
        for (int s = 0; s < k; ++s) gd.arrows.emplace_back(s, t);
    auto idx = [k](int s, int t) { return t * k + s; };
    for (int t = 0; t < k; ++t)
        for (int m = 0; m < k; ++m)
            for (int s = 0; s < k; ++s) gd.compose[{idx(m, t), idx(s, m)}] = idx(s, t);
    return gd;
}

/// Disjoint union of one-object groupoids given by groups.
inline GroupoidData groupoid_from_groups(const std::vector<GroupTable>& groups) {
    GroupoidData gd;
    int offset = 0;
    for (const auto& g : groups) {
        const int o = gd.objects++;
        for (int a = 0; a < g.order; ++a) gd.arrows.emplace_back(o, o);
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b) gd.compose[{offset + a, offset + b}] = offset + g.mul(a, b);
        offset += g.order;
    }
    return gd;
}

/// Product of the pair groupoid on k objects with a group.
inline GroupoidData pair_times_group(int k, const GroupTable& g) {
    const GroupoidData p = pair_groupoid(k);
    GroupoidData gd;
    gd.objects = k;
    const int m = static_cast<int>(p.arrows.size());
    for (int x = 0; x < m; ++x)
        for (int a = 0; a < g.order; ++a) gd.arrows.push_back(p.arrows[x]);
    for (const auto& [xy, z] : p.compose)
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b)
                gd.compose[{xy.first * g.order + a, xy.second * g.order + b}] = z * g.order + g.mul(a, b);
    return gd;
}

/// D(G) on the basis delta_g (x) h, index g |G| + h.
inline WeakHopfData drinfeld_double(const GroupTable& grp, const Tolerance& tol = {}) {
    const int m = grp.order;
    const int n = m * m;
    auto idx = [m](int g, int h) { return g * m + h; };
    auto conj_by = [&](int h, int x) { return grp.mul(grp.mul(h, x), grp.inverse[h]); };  // h x h^{-1}
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h)
            for (int g2 = 0; g2 < m; ++g2)
                for (int h2 = 0; h2 < m; ++h2)
                    if (g == conj_by(h, g2)) left[idx(g, h)](idx(g, grp.mul(h, h2)), idx(g2, h2)) = 1.0;
    CVector unit = CVector::Zero(n);
    for (int g = 0; g < m; ++g) unit(idx(g, grp.identity)) = 1.0;
    CMatrix sigma = CMatrix::Zero(n, n), s = CMatrix::Zero(n, n);
    CVector counit = CVector::Zero(n);
    CMatrix delta = CMatrix::Zero(n * n, n);
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h) {
            const int hi = grp.inverse[h];
            sigma(idx(conj_by(hi, g), hi), idx(g, h)) = 1.0;
            s(idx(conj_by(hi, grp.inverse[g]), hi), idx(g, h)) = 1.0;
            if (g == grp.identity) counit(idx(g, h)) = 1.0;
            for (int a = 0; a < m; ++a) {
                const int b = grp.mul(grp.inverse[a], g);
                delta(idx(a, h) * n + idx(b, h), idx(g, h)) = 1.0;
            }
        }
    auto alg = share(FDStarAlgebra::from_left(std::move(left), unit, sigma, tol));
    WeakHopfData w{alg, std::move(delta), counit, AntiAlgebraMap(*alg, s, tol), std::nullopt};
    validate_weak_hopf(w, tol);
    w.haar = haar_integral(w, tol);
    return w;
}

/// Dual Hopf *-algebra H* on the dual basis: multiplication from Delta,
/// Delta from multiplication, unit = eps, counit = unit coordinates, antipode S^T,
/// star from <f*, a> = conj <f, S(a)*>.
inline WeakHopfData dual_hopf(const WeakHopfData& h, const Tolerance& tol = {}) {
    const FDStarAlgebra& a = *h.algebra;
    const int n = a.dim();
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) left[i](k, j) = h.delta(i * n + j, k);
    const CMatrix sigma = h.S.conjugation().adjoint();
    auto alg = share(FDStarAlgebra::from_left(std::move(left), h.counit, sigma, tol));
    CMatrix delta(n * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) delta(i * n + j, k) = a.structure(i, j, k);
    WeakHopfData w{alg, std::move(delta), a.unit(), AntiAlgebraMap(*alg, h.S.matrix().transpose(), tol), std::nullopt};
    validate_weak_hopf(w, tol);
    w.haar = haar_integral(w, tol);
    return w;
}

}  // namespace fsind
