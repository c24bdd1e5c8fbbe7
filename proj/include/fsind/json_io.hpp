#pragma once

// Strict JSON ingestion (unknown fields are rejected) and report serialization.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsind/coalgebra.hpp"
#include "fsind/constructors.hpp"
#include "fsind/error.hpp"
#include "fsind/indicator.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schema(const std::string& name, const std::string& what) {
    fail(ErrorKind::SchemaError, name + ": " + what);
}

/// Only `allowed` keys (plus an optional matching "schema" tag) may appear.
inline void check_keys(const json& j, const std::string& name, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) schema(name, "top level must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "schema") {
            if (!it->is_string() || it->get<std::string>() != name)
                schema(name, "schema tag must be \"" + name + "\"");
            continue;
        }
        if (!ok.count(it.key())) schema(name, "unknown field \"" + it.key() + "\"");
    }
}

inline const json& need(const json& j, const std::string& name, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) schema(name, std::string("missing field \"") + key + "\"");
    return *it;
}

inline int get_int(const json& j, const std::string& name, const char* what) {
    if (!j.is_number_integer()) schema(name, std::string(what) + " must be an integer");
    return j.get<int>();
}

inline double get_real(const json& j, const std::string& name, const char* what) {
    if (!j.is_number()) schema(name, std::string(what) + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) schema(name, std::string(what) + " must be finite");
    return x;
}

inline std::vector<int> int_list(const json& j, const std::string& name, const char* what) {
    if (!j.is_array()) schema(name, std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& x : j) out.push_back(get_int(x, name, what));
    return out;
}

inline CVector pairs(const json& j, int dim, const std::string& name, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        schema(name, std::string(what) + " must hold " + std::to_string(dim) + " [re, im] pairs");
    CVector v(dim);
    for (int i = 0; i < dim; ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2) schema(name, std::string(what) + " entries must be [re, im]");
        v(i) = cplx(get_real(p[0], name, what), get_real(p[1], name, what));
    }
    return v;
}

inline cplx entry_value(const json& e, const std::string& name) {
    return {get_real(need(e, name, "re"), name, "re"), e.contains("im") ? get_real(e["im"], name, "im") : 0.0};
}

inline int get_dim(const json& j, const std::string& name) {
    const int n = get_int(need(j, name, "dim"), name, "dim");
    if (n <= 0 || n > kMaxAlgebraDim) schema(name, "dim must lie in [1, " + std::to_string(kMaxAlgebraDim) + "]");
    return n;
}

/// [{i, j, k, re, im}] into an n^2 x n matrix indexed (i * n + j, k).
inline CMatrix triples(const json& arr, int n, const std::string& name, const char* what) {
    if (!arr.is_array()) schema(name, std::string(what) + " must be an array");
    CMatrix m = CMatrix::Zero(n * n, n);
    for (const auto& e : arr) {
        check_keys(e, name, {"i", "j", "k", "re", "im"});
        const int i = get_int(need(e, name, "i"), name, "i");
        const int jj = get_int(need(e, name, "j"), name, "j");
        const int k = get_int(need(e, name, "k"), name, "k");
        if (i < 0 || jj < 0 || k < 0 || i >= n || jj >= n || k >= n) schema(name, std::string(what) + " index out of range");
        m(i * n + jj, k) += entry_value(e, name);
    }
    return m;
}

/// [{i, k, re, im}] into an n x n matrix with (k, i) the coefficient of e_k in the image of e_i.
inline CMatrix doubles(const json& arr, int n, const std::string& name, const char* what) {
    if (!arr.is_array()) schema(name, std::string(what) + " must be an array");
    CMatrix m = CMatrix::Zero(n, n);
    for (const auto& e : arr) {
        check_keys(e, name, {"i", "k", "re", "im"});
        const int i = get_int(need(e, name, "i"), name, "i");
        const int k = get_int(need(e, name, "k"), name, "k");
        if (i < 0 || k < 0 || i >= n || k >= n) schema(name, std::string(what) + " index out of range");
        m(k, i) += entry_value(e, name);
    }
    return m;
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

/// Clears -0 and sub-noise values so identical inputs print identically.
inline double clean(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

}  // namespace detail

inline json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, path + ": " + e.what());
    }
}

inline FDStarAlgebra parse_algebra(const json& j, const Tolerance& tol = {}) {
    const std::string name = "algebra.v1";
    detail::check_keys(j, name, {"dim", "unit", "structure", "star"});
    const int n = detail::get_dim(j, name);
    const CVector unit = detail::pairs(detail::need(j, name, "unit"), n, name, "unit");
    const CMatrix t = detail::triples(detail::need(j, name, "structure"), n, name, "structure");
    const CMatrix sigma = detail::doubles(detail::need(j, name, "star"), n, name, "star");
    std::vector<CMatrix> left(n, CMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) left[i].col(jj) = t.row(i * n + jj).transpose();
    return FDStarAlgebra::from_left(std::move(left), unit, sigma, tol);
}

inline FDStarCoalgebra parse_coalgebra(const json& j) {
    const std::string name = "coalgebra.v1";
    detail::check_keys(j, name, {"dim", "counit", "delta", "star"});
    FDStarCoalgebra c;
    c.n = detail::get_dim(j, name);
    c.counit = detail::pairs(detail::need(j, name, "counit"), c.n, name, "counit");
    c.delta = detail::triples(detail::need(j, name, "delta"), c.n, name, "delta");
    c.sigma = detail::doubles(detail::need(j, name, "star"), c.n, name, "star");
    return c;
}

/// Linear map given by images of basis vectors; used for S (algebras) and varsigma (coalgebras).
inline CMatrix parse_antimap(const json& j, int expected_dim) {
    const std::string name = "antimap.v1";
    detail::check_keys(j, name, {"dim", "matrix"});
    const int n = detail::get_dim(j, name);
    if (n != expected_dim) detail::schema(name, "dim does not match the input");
    return detail::doubles(detail::need(j, name, "matrix"), n, name, "matrix");
}

inline GroupTable parse_group(const json& j) {
    const std::string name = "group.v1";
    detail::check_keys(j, name, {"order", "table", "inverse"});
    const int n = detail::get_int(detail::need(j, name, "order"), name, "order");
    if (n <= 0 || n > kMaxAlgebraDim) detail::schema(name, "order out of range");
    const auto& tab = detail::need(j, name, "table");
    if (!tab.is_array() || static_cast<int>(tab.size()) != n) detail::schema(name, "table must have `order` rows");
    std::vector<std::vector<int>> table;
    for (const auto& row : tab) {
        auto r = detail::int_list(row, name, "table row");
        if (static_cast<int>(r.size()) != n) detail::schema(name, "table rows must have `order` entries");
        table.push_back(std::move(r));
    }
    std::vector<int> inverse;
    if (j.contains("inverse")) inverse = detail::int_list(j["inverse"], name, "inverse");
    return make_group(std::move(table), std::move(inverse));
}

/// Either 0/1 relation matrices or intersection numbers p[i][j][k]; star read off p[i][j][0].
inline TableAlgebraData parse_scheme(const json& j) {
    const std::string name = "scheme.v1";
    detail::check_keys(j, name, {"classes", "matrices", "p"});
    const int r = detail::get_int(detail::need(j, name, "classes"), name, "classes");
    if (r <= 0 || r > kMaxAlgebraDim) detail::schema(name, "classes out of range");
    const bool has_m = j.contains("matrices"), has_p = j.contains("p");
    if (has_m == has_p) detail::schema(name, "exactly one of \"matrices\" and \"p\" is required");
    if (has_m) {
        const auto& ms = j["matrices"];
        if (!ms.is_array() || static_cast<int>(ms.size()) != r) detail::schema(name, "need one matrix per class");
        std::vector<RMatrix> rel;
        for (const auto& m : ms) {
            if (!m.is_array() || m.empty()) detail::schema(name, "relation matrices must be non-empty arrays");
            const Eigen::Index n = static_cast<Eigen::Index>(m.size());
            RMatrix a(n, n);
            for (Eigen::Index x = 0; x < n; ++x) {
                const auto row = detail::int_list(m[x], name, "relation row");
                if (static_cast<Eigen::Index>(row.size()) != n) detail::schema(name, "relation matrices must be square");
                for (Eigen::Index y = 0; y < n; ++y) a(x, y) = row[y];
            }
            rel.push_back(std::move(a));
        }
        return table_from_relations(rel);
    }
    const auto& p = j["p"];
    TableAlgebraData t;
    t.r = r;
    t.p.assign(static_cast<std::size_t>(r) * r * r, 0.0);
    if (!p.is_array() || static_cast<int>(p.size()) != r) detail::schema(name, "p must be r x r x r");
    for (int a = 0; a < r; ++a) {
        if (!p[a].is_array() || static_cast<int>(p[a].size()) != r) detail::schema(name, "p must be r x r x r");
        for (int b = 0; b < r; ++b) {
            if (!p[a][b].is_array() || static_cast<int>(p[a][b].size()) != r) detail::schema(name, "p must be r x r x r");
            for (int c = 0; c < r; ++c)
                t.p[(static_cast<std::size_t>(a) * r + b) * r + c] = detail::get_real(p[a][b][c], name, "p entry");
        }
    }
    t.star.assign(r, -1);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            if (t.at(a, b, 0) != 0.0) {
                if (t.star[a] >= 0) fail(ErrorKind::AxiomViolation, "(T2) p[i][j][0] != 0 for two j at i = " + std::to_string(a));
                t.star[a] = b;
            }
    for (int a = 0; a < r; ++a)
        if (t.star[a] < 0) fail(ErrorKind::AxiomViolation, "(T2) no j with p[i][j][0] != 0 at i = " + std::to_string(a));
    validate_table(t);
    return t;
}

inline GroupoidData parse_groupoid(const json& j) {
    const std::string name = "groupoid.v1";
    detail::check_keys(j, name, {"objects", "arrows", "compose"});
    GroupoidData g;
    g.objects = detail::get_int(detail::need(j, name, "objects"), name, "objects");
    const auto& arrows = detail::need(j, name, "arrows");
    if (!arrows.is_array()) detail::schema(name, "arrows must be an array");
    for (const auto& a : arrows) {
        detail::check_keys(a, name, {"src", "tgt"});
        g.arrows.emplace_back(detail::get_int(detail::need(a, name, "src"), name, "src"),
                              detail::get_int(detail::need(a, name, "tgt"), name, "tgt"));
    }
    if (static_cast<int>(g.arrows.size()) > kMaxAlgebraDim) detail::schema(name, "too many arrows");
    const auto& comp = detail::need(j, name, "compose");
    if (!comp.is_array()) detail::schema(name, "compose must be an array");
    for (const auto& c : comp) {
        detail::check_keys(c, name, {"a", "b", "ab"});
        const int a = detail::get_int(detail::need(c, name, "a"), name, "a");
        const int b = detail::get_int(detail::need(c, name, "b"), name, "b");
        const int ab = detail::get_int(detail::need(c, name, "ab"), name, "ab");
        if (!g.compose.emplace(std::make_pair(a, b), ab).second) detail::schema(name, "duplicate composite");
    }
    validate_groupoid(g);
    return g;
}

inline std::vector<int> parse_involution(const json& j) {
    const std::string name = "involution.v1";
    detail::check_keys(j, name, {"perm"});
    return detail::int_list(detail::need(j, name, "perm"), name, "perm");
}

// ---------------------------------------------------------------- output

inline json chi_json(const CVector& chi) {
    json out = json::array();
    for (Eigen::Index i = 0; i < chi.size(); ++i)
        out.push_back(json::array({detail::clean(chi(i).real()), detail::clean(chi(i).imag())}));
    return out;
}

inline json entry_json(const IndicatorEntry& e, bool with_witness) {
    json j{{"dim", e.dim},
           {"multiplicity", e.multiplicity},
           {"nu_formula", detail::clean(e.nu_formula)},
           {"nu_trace", detail::clean(e.nu_trace)},
           {"nu", rounded(e.nu_trace)},
           {"sigma", e.sigma},
           {"alpha", detail::clean(e.alpha)},
           {"label", e.label},
           {"endo_dim", e.endo_dim},
           {"character", chi_json(e.chi)}};
    if (with_witness) {
        j["witness"] = {{"kind", std::string(to_string(e.witness.kind))}};
        if (e.witness.kind != WitnessKind::None) j["witness"]["matrix"] = detail::matrix_json(e.witness.data);
    }
    return j;
}

inline json report_json(const IndicatorReport& rep, bool with_witness = false) {
    json entries = json::array();
    for (const auto& e : rep.entries) entries.push_back(entry_json(e, with_witness));
    return {{"irreducibles", entries}, {"canonical_g", chi_json(rep.canonical.g)}};
}

inline std::string fmt(double x, int prec = 10) {
    std::ostringstream os;
    os << std::setprecision(prec) << detail::clean(x);
    return os.str();
}

inline std::string report_csv(const IndicatorReport& rep) {
    std::ostringstream os;
    os << "dim,nu_formula,nu_trace,sigma,label,endo_dim\n";
    for (const auto& e : rep.entries)
        os << e.dim << "," << fmt(e.nu_formula) << "," << fmt(e.nu_trace) << "," << e.sigma << "," << e.label << ","
           << e.endo_dim << "\n";
    return os.str();
}

inline std::string matrix_text(const CMatrix& m, const std::string& indent) {
    std::ostringstream os;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << indent << "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const cplx z = m(r, c);
            os << (c ? "  " : "") << fmt(z.real(), 6);
            if (detail::clean(z.imag()) != 0.0) os << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag()), 6) << "i";
        }
        os << "]\n";
    }
    return os.str();
}

inline std::string report_text(const IndicatorReport& rep, bool with_witness = false) {
    std::ostringstream os;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& e = rep.entries[i];
        os << "#" << i << " dim " << e.dim << " mult " << e.multiplicity << "  nu " << fmt(e.nu_formula) << " / "
           << fmt(e.nu_trace) << "  sigma " << e.sigma << " (" << e.label << ")  endo_dim " << e.endo_dim << "\n";
        if (with_witness && e.witness.kind != WitnessKind::None) {
            os << "  witness " << to_string(e.witness.kind) << "\n" << matrix_text(e.witness.data, "    ");
        }
    }
    return os.str();
}

}  // namespace fsind::io
