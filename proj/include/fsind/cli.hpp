#pragma once

// fsclass front end: ingest a JSON input, run one pipeline, emit a report.
// `run` never throws; it maps errors to exit codes and writes error JSON to `err`.

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fsind/coalgebra.hpp"
#include "fsind/constructors.hpp"
#include "fsind/error.hpp"
#include "fsind/indicator.hpp"
#include "fsind/json_io.hpp"
#include "fsind/representation.hpp"
#include "fsind/star_algebra.hpp"

namespace fsind::cli {

enum class Kind { Algebra, Group, Scheme, Groupoid, Double, Coalgebra };
enum class Command { Verify, Irreps, Indicators, Classify, Duality };
enum class Format { Json, Csv, Text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAgreement = 3;

struct RunConfig {
    std::string input;
    Kind kind = Kind::Algebra;
    Command command = Command::Indicators;
    std::uint64_t seed = 0;
    Tolerance tol;
    Format format = Format::Text;
    std::string output;    ///< empty: stdout
    std::string anti_map;  ///< antimap.v1 file: S for algebras, varsigma for coalgebras
    std::string twist;     ///< involution.v1 file (group and scheme kinds)
    int threads = 1;
};

inline const std::map<std::string, Kind>& kind_names() {
    static const std::map<std::string, Kind> m{{"algebra", Kind::Algebra},   {"group", Kind::Group},
                                               {"scheme", Kind::Scheme},     {"groupoid", Kind::Groupoid},
                                               {"double", Kind::Double},     {"coalgebra", Kind::Coalgebra}};
    return m;
}

inline const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> m{{"verify", Command::Verify},
                                                  {"irreps", Command::Irreps},
                                                  {"indicators", Command::Indicators},
                                                  {"classify", Command::Classify},
                                                  {"duality", Command::Duality}};
    return m;
}

inline const std::map<std::string, Format>& format_names() {
    static const std::map<std::string, Format> m{{"json", Format::Json}, {"csv", Format::Csv}, {"text", Format::Text}};
    return m;
}

/// FSCLASS_THREADS, clamped to [1, 64]; 1 when unset or malformed.
inline int threads_from_env() {
    const char* s = std::getenv("FSCLASS_THREADS");
    if (!s) return 1;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 1) return 1;
    return static_cast<int>(std::min(v, 64L));
}

/// Everything a command may need, assembled once per input.
struct Problem {
    AlgebraPtr algebra;
    std::optional<AntiAlgebraMap> S;
    std::optional<GroupTable> group;
    std::optional<std::vector<int>> twist;
    std::optional<TableAlgebraData> table;
    std::optional<TableAlgebraResult> table_result;
    std::optional<WeakHopfData> hopf;
    std::optional<FDStarCoalgebra> coalgebra;
    CMatrix varsigma;
    std::vector<std::string> checks;  ///< human-readable list of passed validations
};

inline Problem load_problem(const RunConfig& cfg) {
    cfg.tol.validate();
    const auto& tol = cfg.tol;
    const io::json input = io::load(cfg.input);
    Problem p;
    std::optional<CMatrix> anti;
    if (!cfg.anti_map.empty()) {
        if (cfg.kind != Kind::Algebra && cfg.kind != Kind::Coalgebra)
            fail(ErrorKind::InvalidArgument, "--anti-map applies to the algebra and coalgebra kinds");
    }
    if (!cfg.twist.empty() && cfg.kind != Kind::Group && cfg.kind != Kind::Scheme)
        fail(ErrorKind::InvalidArgument, "--twist applies to the group and scheme kinds");
    if (!cfg.twist.empty()) p.twist = io::parse_involution(io::load(cfg.twist));

    switch (cfg.kind) {
        case Kind::Algebra: {
            p.algebra = share(io::parse_algebra(input, tol));
            p.checks.push_back("associativity, unit and star axioms");
            const CMatrix m = cfg.anti_map.empty() ? p.algebra->sigma()
                                                   : io::parse_antimap(io::load(cfg.anti_map), p.algebra->dim());
            p.S.emplace(*p.algebra, m, tol);
            p.checks.push_back(cfg.anti_map.empty() ? "S = linear extension of * is an anti-algebra map with S(S(a)*)* = a"
                                                    : "S is an anti-algebra map with S(S(a)*)* = a");
            break;
        }
        case Kind::Group:
        case Kind::Double: {
            p.group = io::parse_group(input);
            p.checks.push_back("group axioms");
            if (cfg.kind == Kind::Group) {
                auto ga = group_algebra(*p.group, tol);
                p.algebra = ga.algebra;
                if (p.twist) {
                    validate_group_involution(*p.group, *p.twist);
                    p.checks.push_back("tau is an involutive automorphism");
                    std::vector<int> st(p.group->order);
                    for (int a = 0; a < p.group->order; ++a) st[a] = (*p.twist)[p.group->inverse[a]];
                    p.S.emplace(*p.algebra, permutation_matrix(st), tol);
                } else {
                    p.S.emplace(ga.S);
                }
                p.hopf = group_hopf(*p.group, tol);
            } else {
                p.hopf = drinfeld_double(*p.group, tol);
                p.algebra = p.hopf->algebra;
                p.S.emplace(p.hopf->S);
            }
            p.checks.push_back("Hopf axioms (coassociativity, multiplicative Delta, counit)");
            p.checks.push_back("Haar integral exists and is unique");
            break;
        }
        case Kind::Scheme: {
            p.table = io::parse_scheme(input);
            p.checks.push_back("table algebra axioms T0-T2");
            p.table_result = table_algebra(*p.table, tol);
            p.algebra = p.table_result->algebra;
            p.checks.push_back("v = sum b_i* b_i / p_ii*^0 is central and positive");
            if (p.twist) {
                validate_table_involution(*p.table, *p.twist);
                p.checks.push_back("tau is an involutive automorphism");
                std::vector<int> st(p.table->r);
                for (int i = 0; i < p.table->r; ++i) st[i] = (*p.twist)[p.table->star[i]];
                p.S.emplace(*p.algebra, permutation_matrix(st), tol);
            } else {
                p.S.emplace(p.table_result->S);
            }
            break;
        }
        case Kind::Groupoid: {
            const auto gd = io::parse_groupoid(input);
            p.checks.push_back("groupoid axioms");
            p.hopf = groupoid_weak_hopf(gd, tol);
            p.algebra = p.hopf->algebra;
            p.S.emplace(p.hopf->S);
            p.checks.push_back("weak Hopf axioms (coassociativity, multiplicative Delta, weak counit)");
            p.checks.push_back("Haar integral exists and is unique");
            break;
        }
        case Kind::Coalgebra: {
            p.coalgebra = io::parse_coalgebra(input);
            validate(*p.coalgebra, tol);
            p.checks.push_back("coassociativity, counit and star axioms");
            p.varsigma = cfg.anti_map.empty() ? p.coalgebra->sigma
                                              : io::parse_antimap(io::load(cfg.anti_map), p.coalgebra->n);
            p.algebra = share(dualize_co(*p.coalgebra, tol));
            p.S.emplace(varsigma_as_antipode(*p.algebra, p.varsigma, tol));
            p.checks.push_back("varsigma is an anti-coalgebra map with varsigma(varsigma(c*)*) = c");
            break;
        }
    }
    require_cstar(*p.algebra, tol);
    p.checks.push_back(cfg.kind == Kind::Coalgebra ? "dual algebra is a C*-algebra (compact coalgebra)"
                                                   : "C*-algebra (positive definite regular trace form)");
    return p;
}

/// Family-specific closed formula per irreducible, when the input has one.
inline std::optional<double> family_value(const Problem& p, const IndicatorReport& rep, std::size_t i,
                                          const Tolerance& tol) {
    const auto& v = rep.irreps[i].irrep;
    if (p.table) return table_indicator(*p.table, *p.table_result, v, p.twist, tol).value;
    if (p.group && p.twist) return twisted_indicator(*p.group, *p.twist, v, tol);
    if (p.hopf) return weak_hopf_indicator(*p.hopf, *p.hopf->haar, rep.canonical.g, v, std::nullopt, tol);
    return std::nullopt;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + cfg.output);
    f << text;
}

inline std::string run_verify(const RunConfig& cfg, const Problem& p) {
    std::vector<std::string> checks = p.checks;
    const auto irreps = decompose(regular_representation(p.algebra, cfg.tol), cfg.seed, cfg.tol);
    checks.push_back("decomposition into " + std::to_string(irreps.size()) + " irreducible *-representations");
    canonical_g(*p.algebra, *p.S, irreps, cfg.tol);
    checks.push_back("canonical g: S(g) = g^-1, S^2(a) = g a g^-1, g positive");
    if (p.coalgebra) {
        const auto dec = compact_decompose(*p.coalgebra, cfg.seed, cfg.tol);
        checks.push_back("coseparability idempotent with E(c*, c) > 0");
        gamma(*p.coalgebra, p.varsigma, dec.irreps, dec.dual, cfg.tol);
        checks.push_back("gamma: gamma o varsigma = gamma^-1, varsigma^2 = gamma-conjugation, gamma positive");
    }
    if (cfg.format == Format::Json) {
        io::json j{{"valid", true}, {"checks", checks}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& c : checks) os << "ok  " << c << "\n";
    return os.str();
}

inline std::string run_irreps(const RunConfig& cfg, const Problem& p) {
    const auto irreps = decompose(regular_representation(p.algebra, cfg.tol), cfg.seed, cfg.tol);
    std::ostringstream os;
    if (cfg.format == Format::Json) {
        io::json arr = io::json::array();
        for (const auto& c : irreps)
            arr.push_back({{"dim", c.irrep.dim()}, {"multiplicity", c.multiplicity}, {"character", io::chi_json(c.chi)}});
        os << io::json{{"irreducibles", arr}}.dump(2) << "\n";
    } else if (cfg.format == Format::Csv) {
        os << "dim,multiplicity,character\n";
        for (const auto& c : irreps) {
            os << c.irrep.dim() << "," << c.multiplicity << ",\"";
            for (Eigen::Index k = 0; k < c.chi.size(); ++k)
                os << (k ? " " : "") << io::fmt(c.chi(k).real(), 8) << (c.chi(k).imag() < 0 ? "-" : "+")
                   << io::fmt(std::abs(c.chi(k).imag()), 8) << "i";
            os << "\"\n";
        }
    } else {
        for (std::size_t i = 0; i < irreps.size(); ++i) {
            const auto& c = irreps[i];
            os << "#" << i << " dim " << c.irrep.dim() << " mult " << c.multiplicity << "  chi =";
            for (Eigen::Index k = 0; k < c.chi.size(); ++k) {
                const cplx z = c.chi(k);
                os << " " << io::fmt(z.real(), 6);
                if (io::detail::clean(z.imag()) != 0.0) os << (z.imag() < 0 ? "-" : "+") << io::fmt(std::abs(z.imag()), 6) << "i";
            }
            os << "\n";
        }
    }
    return os.str();
}

inline std::string run_indicators(const RunConfig& cfg, const Problem& p, bool witnesses) {
    ReportOptions opt;
    opt.threads = cfg.threads;
    const auto rep = full_report(p.algebra, *p.S, cfg.seed, cfg.tol, opt);
    if (cfg.format == Format::Csv) {
        if (!witnesses) return io::report_csv(rep);
        std::ostringstream os;
        os << "dim,sigma,label,witness\n";
        for (const auto& e : rep.entries) os << e.dim << "," << e.sigma << "," << e.label << "," << to_string(e.witness.kind) << "\n";
        return os.str();
    }
    if (cfg.format == Format::Json) {
        io::json j = io::report_json(rep, witnesses);
        for (std::size_t i = 0; i < rep.entries.size(); ++i)
            if (auto f = family_value(p, rep, i, cfg.tol)) j["irreducibles"][i]["family_indicator"] = io::detail::clean(*f);
        return j.dump(2) + "\n";
    }
    std::string text = io::report_text(rep, witnesses);
    if (!witnesses) {
        std::ostringstream os;
        for (std::size_t i = 0; i < rep.entries.size(); ++i)
            if (auto f = family_value(p, rep, i, cfg.tol)) os << "#" << i << " family indicator " << io::fmt(*f) << "\n";
        text += os.str();
    }
    return text;
}

struct DualityOutcome {
    int agree = 0;
    int total = 0;
    std::string text;
};

/// Coalgebra-side indicators against the algebra side, matched by character.
inline DualityOutcome run_duality(const RunConfig& cfg, const Problem& p) {
    FDStarCoalgebra c;
    CMatrix varsigma;
    if (p.coalgebra) {
        c = *p.coalgebra;
        varsigma = p.varsigma;
    } else {
        c = dualize(*p.algebra);
        varsigma = p.S->matrix().transpose();
    }
    const auto alg = full_report(p.algebra, *p.S, cfg.seed, cfg.tol);
    const auto co = coalgebra_report(c, varsigma, cfg.seed, cfg.tol);
    DualityOutcome out;
    out.total = static_cast<int>(alg.entries.size());
    std::ostringstream os;
    std::vector<bool> used(co.entries.size(), false);
    for (std::size_t i = 0; i < alg.entries.size(); ++i) {
        const auto& e = alg.entries[i];
        bool ok = false;
        for (std::size_t k = 0; k < co.entries.size() && !ok; ++k) {
            if (used[k] || fingerprint(co.entries[k].character) != e.print) continue;
            used[k] = true;
            ok = std::abs(co.entries[k].indicator - e.nu_trace) < 1e-6 && co.entries[k].sigma == e.sigma;
            if (cfg.format == Format::Text)
                os << "#" << i << " dim " << e.dim << "  algebra " << io::fmt(e.nu_trace) << "  coalgebra "
                   << io::fmt(co.entries[k].indicator) << (ok ? "" : "  MISMATCH") << "\n";
        }
        if (ok) ++out.agree;
    }
    std::optional<std::pair<int, int>> cqg;
    if (p.hopf && !p.coalgebra && !p.twist) {
        const auto q = cqg_report(*p.hopf, cfg.seed, cfg.tol);
        int good = 0;
        for (const auto& en : q) {
            const int sign = en.h_value > cfg.tol.eps_round ? 1 : en.h_value < -cfg.tol.eps_round ? -1 : 0;
            if (sign == en.sigma && std::abs(en.indicator - en.sigma) < 1e-6) ++good;
        }
        cqg = std::make_pair(good, static_cast<int>(q.size()));
        if (good != static_cast<int>(q.size())) out.agree = -1;
    }
    const int shown = std::max(out.agree, 0);
    if (cfg.format == Format::Json) {
        io::json j{{"agree", shown}, {"total", out.total}};
        if (cqg) j["cqg_sign_agree"] = {cqg->first, cqg->second};
        out.text = j.dump(2) + "\n";
    } else {
        os << "algebra/coalgebra indicators agree: " << shown << "/" << out.total << "\n";
        if (cqg) os << "CQG sign matches label: " << cqg->first << "/" << cqg->second << "\n";
        out.text = os.str();
    }
    return out;
}

inline void write_error(std::ostream& err, const std::string& kind, const std::string& detail) {
    err << io::json{{"error", kind}, {"detail", detail}}.dump() << "\n";
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Problem p = load_problem(cfg);
        switch (cfg.command) {
            case Command::Verify: emit(cfg, out, run_verify(cfg, p)); break;
            case Command::Irreps: emit(cfg, out, run_irreps(cfg, p)); break;
            case Command::Indicators: emit(cfg, out, run_indicators(cfg, p, false)); break;
            case Command::Classify: emit(cfg, out, run_indicators(cfg, p, true)); break;
            case Command::Duality: {
                const auto d = run_duality(cfg, p);
                emit(cfg, out, d.text);
                if (d.agree != d.total) {
                    write_error(err, std::string(to_string(ErrorKind::AgreementFailure)), "duality cross-check failed");
                    return kExitAgreement;
                }
                break;
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        write_error(err, std::string(to_string(e.kind())), e.detail());
        return e.kind() == ErrorKind::AgreementFailure ? kExitAgreement : kExitValidation;
    } catch (const std::exception& e) {
        write_error(err, "InternalError", e.what());
        return kExitValidation;
    }
}

}  // namespace fsind::cli
