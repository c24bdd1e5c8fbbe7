#pragma once

// Fixtures and independent oracles shared by the unit tests and the acceptance run.

#include <algorithm>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsind/fsind.hpp"

namespace fsind::testing {

#ifndef FSIND_DATA_DIR
#define FSIND_DATA_DIR "data"
#endif

inline std::string data_path(const std::string& rel) { return std::string(FSIND_DATA_DIR) + "/" + rel; }

/// M_n(C) on matrix units e_ij (index i * n + j), e_ij* = e_ji.
inline AlgebraPtr matrix_units(int n) {
    std::vector<StructureEntry> st;
    std::vector<StarEntry> star;
    CVector unit = CVector::Zero(n * n);
    for (int i = 0; i < n; ++i) {
        unit(i * n + i) = 1.0;
        for (int j = 0; j < n; ++j) {
            star.push_back({i * n + j, j * n + i, 1.0});
            for (int l = 0; l < n; ++l) st.push_back({i * n + j, j * n + l, i * n + l, 1.0});
        }
    }
    return share(FDStarAlgebra::build(n * n, st, unit, star));
}

inline AlgebraPtr complex_numbers() {
    return share(FDStarAlgebra::build(1, {{0, 0, 0, 1.0}}, CVector::Ones(1), {{0, 0, 1.0}}));
}

/// Matrix of a -> left a^T right on the matrix units of M_2.
inline CMatrix m2_transpose_map(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right) {
    CMatrix s = CMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
            e(j, i) = 1.0;
            const Eigen::Matrix2cd img = left * e * right;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) s(r * 2 + c, i * 2 + j) = img(r, c);
        }
    return s;
}

inline Eigen::Matrix2cd mat2(cplx a, cplx b, cplx c, cplx d) {
    Eigen::Matrix2cd m;
    m << a, b, c, d;
    return m;
}

/// Coordinates of a 2x2 matrix in the matrix-unit basis.
inline CVector m2_coords(const Eigen::Matrix2cd& m) {
    CVector v(4);
    v << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    return v;
}

inline Eigen::Matrix2cd m2_matrix(const CVector& v) { return mat2(v(0), v(1), v(2), v(3)); }

// ------------------------------------------------------------------ group oracle

/// Character table by Burnside's class-sum method: characters read off the
/// common eigenvectors of the class multiplication matrices. Independent of
/// the decomposition engine. Rows: irreducible characters as functions on G.
inline std::vector<CVector> burnside_characters(const GroupTable& g) {
    const int n = g.order;
    std::vector<int> cls(n, -1);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < n; ++a) {
        if (cls[a] >= 0) continue;
        std::vector<int> c;
        for (int x = 0; x < n; ++x) {
            const int y = g.mul(g.mul(x, a), g.inverse[x]);
            if (cls[y] < 0) {
                cls[y] = static_cast<int>(classes.size());
                c.push_back(y);
            }
        }
        classes.push_back(c);
    }
    const int r = static_cast<int>(classes.size());
    // a[j](i, k): number of ways an element of class k is x y with x in C_j, y in C_i.
    std::vector<Eigen::MatrixXd> mats(r, Eigen::MatrixXd::Zero(r, r));
    for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) {
            const int z = classes[k].front();
            for (int x : classes[j]) {
                const int y = g.mul(g.inverse[x], z);
                mats[j](cls[y], k) += 1.0;
            }
        }
    // omega(C_j) omega(C_i) = sum_k a_jik omega(C_k): w is a common eigenvector of every mats[j].
    Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(r, r);
    for (int j = 0; j < r; ++j) comb += (1.0 + 0.6180339887 * j + 0.1 * j * j) * mats[j];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comb.cast<cplx>());
    const int id_class = cls[g.identity];
    std::vector<CVector> chars;
    for (int e = 0; e < r; ++e) {
        CVector w = es.eigenvectors().col(e);
        w /= w(id_class);
        // w(j) = omega(C_j) = |C_j| chi(g_j) / chi(1);  sum |C_j| |chi(g_j)|^2 = |G|.
        double s = 0.0;
        for (int j = 0; j < r; ++j) s += std::norm(w(j)) / classes[j].size();
        const double deg = std::sqrt(n / s);
        CVector chi(n);
        for (int x = 0; x < n; ++x) chi(x) = deg * w(cls[x]) / double(classes[cls[x]].size());
        chars.push_back(chi);
    }
    return chars;
}

/// (1/|G|) sum_h chi(tau(h) h); tau = id when empty.
inline cplx classical_indicator(const GroupTable& g, const CVector& chi, const std::vector<int>& tau = {}) {
    cplx s = 0.0;
    for (int h = 0; h < g.order; ++h) s += chi(g.mul(tau.empty() ? h : tau[h], h));
    return s / double(g.order);
}

/// Multiset of rounded classical indicators.
inline std::vector<int> classical_multiset(const GroupTable& g, const std::vector<int>& tau = {}) {
    std::vector<int> out;
    for (const auto& chi : burnside_characters(g)) out.push_back(static_cast<int>(std::lround(classical_indicator(g, chi, tau).real())));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> sorted_sigmas(const IndicatorReport& rep) {
    std::vector<int> out;
    for (const auto& e : rep.entries) out.push_back(e.sigma);
    std::sort(out.begin(), out.end());
    return out;
}

/// Named corpus instances (algebra + S) used by several property tests.
struct CorpusCase {
    std::string name;
    AlgebraPtr algebra;
    AntiAlgebraMap S;
    std::optional<GroupTable> group;
    std::optional<WeakHopfData> hopf;
};

inline std::vector<CorpusCase> small_corpus() {
    std::vector<CorpusCase> out;
    auto add_group = [&](const std::string& name, const GroupTable& g) {
        auto ga = group_algebra(g);
        out.push_back({name, ga.algebra, ga.S, g, group_hopf(g)});
    };
    for (int n : {2, 3, 4, 5}) add_group("Z" + std::to_string(n), cyclic_group(n));
    add_group("S3", symmetric_group(3));
    add_group("Q8", quaternion_group());
    add_group("D4", dihedral_group(4));
    {
        auto w = groupoid_weak_hopf(pair_groupoid(2));
        out.push_back({"pair2", w.algebra, w.S, std::nullopt, w});
    }
    {
        auto w = drinfeld_double(cyclic_group(2));
        out.push_back({"D(Z2)", w.algebra, w.S, std::nullopt, w});
    }
    auto m2 = matrix_units(2);
    out.push_back({"M2-u", m2, AntiAlgebraMap(*m2, m2_transpose_map(mat2(0, 0.5, 2, 0), mat2(0, 0.5, 2, 0))),
                   std::nullopt, std::nullopt});
    out.push_back({"M2-v", m2, AntiAlgebraMap(*m2, m2_transpose_map(mat2(0, 1, -1, 0), mat2(0, -1, 1, 0))),
                   std::nullopt, std::nullopt});
    return out;
}

}  // namespace fsind::testing
