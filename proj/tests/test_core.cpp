#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "test_support.hpp"

using namespace fsind;
using namespace fsind::testing;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an fsind::Error";
    return ErrorKind::InternalConsistency;
}

CMatrix cm(std::initializer_list<std::initializer_list<cplx>> rows) {
    CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (cplx x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

CMatrix random_psd(int n, CounterRng& rng) {
    const CMatrix x = random_complex_matrix(n, n, rng);
    return x * x.adjoint() + 0.1 * CMatrix::Identity(n, n);
}

}  // namespace

// ------------------------------------------------------------------ matrix core

TEST(MatrixCore, PolarUnitaryExamples) {
    EXPECT_LT(max_abs(polar_unitary(CMatrix::Identity(2, 2)) - CMatrix::Identity(2, 2)), 1e-12);
    const CMatrix f = cm({{0, 2}, {1, 0}});
    EXPECT_LT(max_abs(polar_unitary(f) - cm({{0, 1}, {1, 0}})), 1e-12);
    EXPECT_LT(max_abs(absolute_value(f) - cm({{1, 0}, {0, 2}})), 1e-12);
    CounterRng rng(7);
    const CMatrix u = random_unitary(4, rng);
    EXPECT_LT(max_abs(polar_unitary(u) - u), 1e-10);
}

TEST(MatrixCore, PolarUnitaryRejectsSingular) {
    EXPECT_EQ(kind_of([] { polar_unitary(cm({{1, 1}, {1, 1}})); }), ErrorKind::SingularInput);
}

TEST(MatrixCore, PolarUnitaryProperties) {
    const Tolerance tol;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CounterRng rng(seed);
        const int n = 2 + static_cast<int>(seed % 5);
        const CMatrix f = random_complex_matrix(n, n, rng);
        const CMatrix u = polar_unitary(f);
        EXPECT_LT(max_abs(u.adjoint() * u - CMatrix::Identity(n, n)), 10 * tol.eps_rank);
        const CMatrix abs_fstar = absolute_value(f.adjoint());
        EXPECT_LT(max_abs(u - abs_fstar.inverse() * f), 10 * tol.eps_rank * std::max(1.0, max_abs(f)));
    }
}

TEST(MatrixCore, MatrixFunctionExamples) {
    auto sq = [](double t) { return std::sqrt(t); };
    EXPECT_LT(max_abs(matrix_function(cm({{4, 0}, {0, 9}}), sq) - cm({{2, 0}, {0, 3}})), 1e-12);
    EXPECT_LT(max_abs(matrix_function(CMatrix::Zero(2, 2), sq)), 1e-12);
    const CMatrix a = cm({{2, 1}, {1, 2}});
    const CMatrix r = matrix_function(a, sq);
    EXPECT_LT(max_abs(r * r - a), 1e-10);
}

TEST(MatrixCore, MatrixFunctionErrors) {
    auto sq = [](double t) { return std::sqrt(t); };
    EXPECT_EQ(kind_of([&] { matrix_function(cm({{0, 1}, {0, 0}}), sq); }), ErrorKind::NotHermitian);
    EXPECT_EQ(kind_of([&] { matrix_function(cm({{-1, 0}, {0, 1}}), sq); }), ErrorKind::NegativeSpectrum);
}

TEST(MatrixCore, MatrixFunctionIdentityIsIdentity) {
    CounterRng rng(3);
    const CMatrix a = random_psd(5, rng);
    EXPECT_LT(max_abs(matrix_function(a, [](double t) { return t; }) - a), 1e-12 * std::max(1.0, max_abs(a)) * 100);
}

TEST(MatrixCore, FunctionalCalculusIsNatural) {
    const std::vector<std::function<double(double)>> fns{[](double t) { return std::sqrt(t); },
                                                         [](double t) { return t * t; },
                                                         [](double t) { return 1.0 / std::sqrt(t); }};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CounterRng rng(seed, 1);
        const CMatrix a = random_psd(4, rng);
        // Unitary s: b = s a s*.
        const CMatrix s = random_unitary(4, rng);
        const CMatrix b = s * a * s.adjoint();
        // Projection t = [I 0] onto a block of a block-diagonal matrix.
        CMatrix big = CMatrix::Zero(6, 6);
        big.topLeftCorner(4, 4) = a;
        big.bottomRightCorner(2, 2) = random_psd(2, rng);
        CMatrix t = CMatrix::Zero(4, 6);
        t.leftCols(4) = CMatrix::Identity(4, 4);
        for (const auto& fn : fns) {
            EXPECT_LT(max_abs(s * matrix_function(a, fn) - matrix_function(b, fn) * s), 1e-8);
            EXPECT_LT(max_abs(t * matrix_function(big, fn) - matrix_function(a, fn) * t), 1e-8);
        }
    }
}

TEST(MatrixCore, NullspaceExamples) {
    EXPECT_EQ(nullspace(CMatrix::Identity(2, 2)).cols(), 0);
    EXPECT_EQ(nullspace(CMatrix::Zero(2, 2)).cols(), 2);
    const CMatrix k = nullspace(cm({{1, 1}, {1, 1}}));
    ASSERT_EQ(k.cols(), 1);
    const cplx phase = k(0, 0) / std::abs(k(0, 0));
    CMatrix expect(2, 1);
    expect << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    EXPECT_LT(max_abs(k / phase - expect), 1e-12);
}

TEST(MatrixCore, CounterRngIsReproducible) {
    CounterRng a(42, 5), b(42, 5), c(43, 5);
    for (int i = 0; i < 8; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
    }
    CounterRng f1 = a.fork(1), f2 = a.fork(2);
    EXPECT_NE(f1.next_u64(), f2.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(MatrixCore, ToleranceValidation) {
    Tolerance t;
    EXPECT_NO_THROW(t.validate());
    t.eps_rank = 0.0;
    EXPECT_EQ(kind_of([&] { t.validate(); }), ErrorKind::InvalidArgument);
}

TEST(MatrixCore, IntertwinerSolve) {
    CounterRng rng(9);
    const CMatrix p = random_unitary(3, rng);
    std::vector<CMatrix> left{cm({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}})};
    std::vector<CMatrix> right{p * left[0] * p.adjoint()};
    const auto sol = solve_intertwining(left, right);
    // Distinct eigenvalues: the solution space is three-dimensional.
    ASSERT_EQ(sol.size(), 3u);
    for (const auto& x : sol) EXPECT_LT(max_abs(x * left[0] - right[0] * x), 1e-9);
}

// ------------------------------------------------------------------ star algebra

TEST(StarAlgebra, ComplexNumbersAndMatrixUnitsAreValid) {
    EXPECT_NO_THROW(complex_numbers());
    EXPECT_NO_THROW(matrix_units(2));
    EXPECT_NO_THROW(matrix_units(3));
}

TEST(StarAlgebra, BrokenUnitIsRejected) {
    EXPECT_EQ(kind_of([] { FDStarAlgebra::build(1, {{0, 0, 0, 2.0}}, CVector::Ones(1), {{0, 0, 1.0}}); }),
              ErrorKind::BadUnit);
}

TEST(StarAlgebra, NonAssociativeAndBadStarAreRejected) {
    // C[x]/(x^2 - x - 1) with e1* = e0: associative and unital, star not involutive.
    EXPECT_EQ(kind_of([] {
                  FDStarAlgebra::build(2, {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 0, 1, 1.0}, {1, 1, 0, 1.0}, {1, 1, 1, 1.0}},
                                       CVector::Unit(2, 0), {{0, 0, 1.0}, {1, 0, 1.0}});
              }),
              ErrorKind::BadStar);
    // e0 e1 = e1 but e1 e0 = 0, e1 e1 = e0 + e1: (e1 e0) e1 != e1 (e0 e1).
    EXPECT_EQ(kind_of([] {
                  CVector unit(2);
                  unit << 1.0, 0.0;
                  FDStarAlgebra::build(2, {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 1, 1, 1.0}, {1, 1, 0, 1.0}}, unit,
                                       {{0, 0, 1.0}, {1, 1, 1.0}});
              }),
              ErrorKind::NotAssociative);
}

TEST(StarAlgebra, CStarCheckExamples) {
    const auto c = check_cstar(*complex_numbers());
    EXPECT_TRUE(c.is_cstar);
    EXPECT_NEAR(c.gram(0, 0).real(), 1.0, 1e-12);
    const auto m = check_cstar(*matrix_units(2));
    EXPECT_TRUE(m.is_cstar);
    EXPECT_LT(max_abs(m.gram - 2.0 * CMatrix::Identity(4, 4)), 1e-12);
    // C[x]/(x^2), x* = x.
    auto dual_numbers = FDStarAlgebra::build(2, {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 0, 1, 1.0}}, CVector::Unit(2, 0),
                                             {{0, 0, 1.0}, {1, 1, 1.0}});
    EXPECT_FALSE(check_cstar(dual_numbers).is_cstar);
    EXPECT_EQ(kind_of([&] { require_cstar(dual_numbers); }), ErrorKind::NotCStar);
}

TEST(StarAlgebra, GroupAlgebrasAreCStar) {
    for (const auto& g : {cyclic_group(6), symmetric_group(3), quaternion_group(), dihedral_group(4)})
        EXPECT_TRUE(check_cstar(*group_algebra(g).algebra).is_cstar);
}

TEST(StarAlgebra, GroupRealFormIsRealSpan) {
    const auto ga = group_algebra(symmetric_group(3));
    const RealForm rf = real_form_from_S(ga.S);
    EXPECT_EQ(rf.basis.cols(), 6);
    for (int i = 0; i < 6; ++i) EXPECT_TRUE(rf.contains(ga.algebra->basis(i), 1e-12));
    EXPECT_FALSE(rf.contains(cplx(0, 1) * ga.algebra->basis(0), 1e-12));
    // Every basis vector of A0 is real in the group basis.
    for (Eigen::Index c = 0; c < rf.basis.cols(); ++c) {
        CVector b = rf.basis.col(c);
        EXPECT_LT(max_abs(b.imag()), 1e-10);
    }
}

TEST(StarAlgebra, QuaternionRealFormOfM2) {
    const auto m2 = matrix_units(2);
    const AntiAlgebraMap s(*m2, m2_transpose_map(mat2(0, 1, -1, 0), mat2(0, -1, 1, 0)));
    const RealForm rf = real_form_from_S(s);
    ASSERT_EQ(rf.basis.cols(), 4);
    for (Eigen::Index c = 0; c < 4; ++c) {
        const auto m = m2_matrix(rf.basis.col(c));
        EXPECT_LT(std::abs(m(1, 1) - std::conj(m(0, 0))), 1e-10);
        EXPECT_LT(std::abs(m(1, 0) + std::conj(m(0, 1))), 1e-10);
    }
}

TEST(StarAlgebra, SplitRealFormOfM2WithSingularElements) {
    const auto m2 = matrix_units(2);
    const Eigen::Matrix2cd u = mat2(0, 0.5, 2, 0);
    const AntiAlgebraMap s(*m2, m2_transpose_map(u, u));
    const RealForm rf = real_form_from_S(s);
    ASSERT_EQ(rf.basis.cols(), 4);
    for (Eigen::Index c = 0; c < 4; ++c) {
        const auto m = m2_matrix(rf.basis.col(c));
        EXPECT_LT(std::abs(m(1, 1) - std::conj(m(0, 0))), 1e-10);
        EXPECT_LT(std::abs(m(0, 1) - 4.0 * std::conj(m(1, 0))), 1e-10);
    }
    // [[0, 4], [1, 0]] lies in A0 and [[1, 0], [0, 1]] + [[0, 4], [1, 0]] / 2 is singular.
    const CVector sing = m2_coords(mat2(1, 2, 0.5, 1));
    EXPECT_TRUE(rf.contains(sing, 1e-12));
    EXPECT_LT(std::abs(m2_matrix(sing).determinant()), 1e-12);
}

TEST(StarAlgebra, AntiAlgebraMapRejectsHomomorphisms) {
    // S = id on M2 is multiplicative, not anti-multiplicative.
    const auto m2 = matrix_units(2);
    EXPECT_EQ(kind_of([&] { AntiAlgebraMap(*m2, CMatrix::Identity(4, 4)); }), ErrorKind::NotAntiMap);
}

TEST(StarAlgebra, DualStructureRejectsWrongG) {
    const auto ga = group_algebra(cyclic_group(3));
    EXPECT_NO_THROW(DualStructureData(*ga.algebra, ga.S, ga.algebra->unit()));
    EXPECT_EQ(kind_of([&] { DualStructureData(*ga.algebra, ga.S, 2.0 * ga.algebra->unit()); }),
              ErrorKind::BadDualStructure);
}

TEST(StarAlgebra, SeparabilityIdempotentExamples) {
    const auto c = complex_numbers();
    const auto e1 = separability_idempotent(*c);
    EXPECT_LT(std::abs(e1.tensor()(0, 0) - 1.0), 1e-12);
    const auto z2 = group_algebra(cyclic_group(2));
    const auto e2 = separability_idempotent(*z2.algebra);
    EXPECT_LT(max_abs(e2.tensor() - 0.5 * CMatrix::Identity(2, 2)), 1e-12);
    const auto m3 = matrix_units(3);
    EXPECT_LT(separability_defect(*m3, separability_idempotent(*m3)), 1e-10);
}

TEST(StarAlgebra, SeparabilityInvariantsOnCorpus) {
    for (const auto& cc : small_corpus()) {
        const FDStarAlgebra& a = *cc.algebra;
        CounterRng rng(11);
        for (const auto& w : {std::optional<CVector>{}, std::optional<CVector>{random_positive_central(a, rng)}}) {
            const auto e = separability_idempotent(a, w);
            EXPECT_LT(separability_defect(a, e), 1e-8) << cc.name;
            CVector v = CVector::Zero(a.dim());
            for (const auto& pr : e.pairs) v += a.multiply(pr.first, a.star(pr.first));
            for (int i = 0; i < a.dim(); ++i)
                EXPECT_LT((a.multiply(v, a.basis(i)) - a.multiply(a.basis(i), v)).cwiseAbs().maxCoeff(), 1e-8) << cc.name;
            EXPECT_TRUE(is_positive(a, v)) << cc.name;
            EXPECT_TRUE(is_positive(a, v - 1e-6 * a.unit())) << cc.name;
        }
    }
}

TEST(StarAlgebra, RealFormDimensionEqualsComplexDimension) {
    for (const auto& cc : small_corpus()) EXPECT_EQ(real_form_from_S(cc.S).basis.cols(), cc.algebra->dim()) << cc.name;
}

// ------------------------------------------------------------------ representations

TEST(Representation, RegularExamples) {
    const auto c = regular_representation(complex_numbers());
    EXPECT_EQ(c.dim(), 1);
    const auto z2 = group_algebra(cyclic_group(2));
    const auto r = regular_representation(z2.algebra);
    EXPECT_LT(max_abs(r.rho[1] - cm({{0, 1}, {1, 0}})), 1e-15);
    const auto m = regular_representation(matrix_units(2));
    const CVector chi = character(m);
    EXPECT_LT(std::abs(chi(0) - 2.0) + std::abs(chi(3) - 2.0) + std::abs(chi(1)) + std::abs(chi(2)), 1e-12);
}

TEST(Representation, DecomposeCyclicThree) {
    const auto ga = group_algebra(cyclic_group(3));
    const auto irr = decompose(regular_representation(ga.algebra), 0);
    ASSERT_EQ(irr.size(), 3u);
    std::vector<cplx> values;
    for (const auto& c : irr) {
        EXPECT_EQ(c.irrep.dim(), 1);
        EXPECT_EQ(c.multiplicity, 1);
        values.push_back(c.chi(1));
    }
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    for (cplx target : {cplx(1.0), w, w * w}) {
        const bool found = std::any_of(values.begin(), values.end(), [&](cplx x) { return std::abs(x - target) < 1e-9; });
        EXPECT_TRUE(found) << target;
    }
}

TEST(Representation, DecomposeMatrixAndS3) {
    const auto m = decompose(regular_representation(matrix_units(2)), 0);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].irrep.dim(), 2);
    EXPECT_EQ(m[0].multiplicity, 2);
    const auto s = decompose(regular_representation(group_algebra(symmetric_group(3)).algebra), 0);
    std::vector<std::pair<int, int>> dm;
    for (const auto& c : s) dm.emplace_back(c.irrep.dim(), c.multiplicity);
    std::sort(dm.begin(), dm.end());
    EXPECT_EQ(dm, (std::vector<std::pair<int, int>>{{1, 1}, {1, 1}, {2, 2}}));
}

TEST(Representation, DecomposeInvariants) {
    for (const auto& cc : small_corpus()) {
        const auto reg = regular_representation(cc.algebra);
        std::vector<std::pair<int, Fingerprint>> first;
        for (std::uint64_t seed : {0u, 1u, 17u}) {
            const auto irr = decompose(reg, seed);
            int total = 0;
            std::vector<std::pair<int, Fingerprint>> prints;
            for (const auto& c : irr) {
                total += c.multiplicity * c.irrep.dim();
                prints.emplace_back(c.irrep.dim(), c.print);
                EXPECT_EQ(intertwiners(c.irrep, c.irrep).size(), 1u) << cc.name;
                EXPECT_NO_THROW(validate(c.irrep)) << cc.name;
                for (const auto& emb : c.embeddings)
                    for (int i = 0; i < cc.algebra->dim(); ++i)
                        EXPECT_LT(max_abs(reg.rho[i] * emb - emb * c.irrep.rho[i]), 1e-8) << cc.name;
            }
            EXPECT_EQ(total, cc.algebra->dim()) << cc.name;
            std::sort(prints.begin(), prints.end());
            if (first.empty()) first = prints;
            EXPECT_EQ(prints, first) << cc.name << " seed " << seed;
        }
    }
}

TEST(Representation, IntertwinerExamples) {
    const auto ga = group_algebra(cyclic_group(3));
    const auto irr = decompose(regular_representation(ga.algebra), 0);
    EXPECT_EQ(intertwiners(irr[0].irrep, irr[0].irrep).size(), 1u);
    EXPECT_TRUE(intertwiners(irr[0].irrep, irr[1].irrep).empty());
    const auto z2 = regular_representation(group_algebra(cyclic_group(2)).algebra);
    EXPECT_EQ(intertwiners(z2, z2).size(), 2u);
}

TEST(Representation, DualExamples) {
    const auto ga = group_algebra(cyclic_group(3));
    const DualStructureData ds(*ga.algebra, ga.S, ga.algebra->unit());
    const auto irr = decompose(regular_representation(ga.algebra), 0);
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    for (const auto& c : irr) {
        const auto d = dual_representation(c.irrep, ds);
        EXPECT_LT(std::abs(character(d)(1) - std::conj(c.chi(1))), 1e-9);
        if (std::abs(c.chi(1) - w) < 1e-9) {
            EXPECT_LT(std::abs(character(d)(1) - w * w), 1e-9);
        }
        if (std::abs(c.chi(1) - 1.0) < 1e-9) {
            EXPECT_LT(std::abs(character(d)(1) - 1.0), 1e-9);
        }
    }
    // M2 with S(a) = a^T and g = 1: the 2-dim irreducible is self-dual.
    const auto m2 = matrix_units(2);
    const AntiAlgebraMap st(*m2, m2_transpose_map(Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity()));
    const DualStructureData dm(*m2, st, m2->unit());
    const auto mi = decompose(regular_representation(m2), 0);
    EXPECT_EQ(intertwiners(mi[0].irrep, dual_representation(mi[0].irrep, dm)).size(), 1u);
}

TEST(Representation, ConjugateExamples) {
    const auto ga = group_algebra(cyclic_group(5));
    const RealForm rf = real_form_from_S(ga.S);
    const auto irr = decompose(regular_representation(ga.algebra), 0);
    for (const auto& c : irr) {
        const auto j = conjugate_representation(c.irrep, rf);
        EXPECT_LT(std::abs(character(j)(1) - std::conj(c.chi(1))), 1e-9);
        const cplx z = c.chi(1);
        EXPECT_LT(std::abs(character(j)(1) - z * z * z * z), 1e-9);
    }
    // Permutation matrices are real: J(V) has the same matrices on A0 = R[G].
    const auto reg = regular_representation(ga.algebra);
    const auto jr = conjugate_representation(reg, rf);
    for (int i = 0; i < 5; ++i) EXPECT_LT(max_abs(jr.rho[i] - reg.rho[i]), 1e-15);
}

TEST(Representation, ConjugateCharacterAndSelfConjugacy) {
    for (const auto& cc : small_corpus()) {
        const RealForm rf = real_form_from_S(cc.S);
        const auto irr = decompose(regular_representation(cc.algebra), 0);
        for (const auto& c : irr) {
            const auto j = conjugate_representation(c.irrep, rf);
            const CVector chij = character(j);
            for (int i = 0; i < cc.algebra->dim(); ++i) {
                const cplx want = std::conj(character_at(c.irrep, rf.bar(cc.algebra->basis(i))));
                EXPECT_LT(std::abs(chij(i) - want), 1e-8) << cc.name;
            }
            double worst_imag = 0.0;
            for (Eigen::Index k = 0; k < rf.basis.cols(); ++k)
                worst_imag = std::max(worst_imag, std::abs(character_at(c.irrep, rf.basis.col(k)).imag()));
            EXPECT_EQ(!intertwiners(c.irrep, j).empty(), worst_imag < 1e-8) << cc.name;
        }
    }
}

TEST(Representation, RieszMapIsUnitaryIntertwiner) {
    for (const auto& cc : small_corpus()) {
        const RealForm rf = real_form_from_S(cc.S);
        const auto irr = decompose(regular_representation(cc.algebra), 0);
        const auto g = canonical_g(*cc.algebra, cc.S, irr).g;
        const DualStructureData ds(*cc.algebra, cc.S, g);
        for (const auto& c : irr) {
            const auto jv = conjugate_representation(c.irrep, rf, g);
            const auto dv = dual_representation(c.irrep, ds);
            const CMatrix t = riesz_map(c.irrep);
            for (int i = 0; i < cc.algebra->dim(); ++i)
                EXPECT_LT(max_abs(t * jv.rho[i] - dv.rho[i] * t), 1e-8) << cc.name;
            EXPECT_LT(max_abs(t.adjoint() * *dv.gram * t - *jv.gram), 1e-8) << cc.name;
        }
    }
}
