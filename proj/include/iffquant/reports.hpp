/**
 * @file reports.hpp
 * @brief Task configuration and report runners shared by the CLI and tests.
 *
 * A task names an algebra, a representation pair, a degree and optionally a
 * list of density shifts. Sweeps run each shift through the pure core (in
 * parallel up to IFFQUANT_THREADS) and merge records in list order, so
 * reports are byte-for-byte deterministic.
 */
#pragma once

#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "serialize.hpp"

namespace iffquant {

struct TaskConfig {
    AlgebraSignature algebra;
    std::string v1_desc = "density(0,0)";
    std::string v2_desc = "density(0,0)";
    int k = 1;
    std::vector<Rational> delta_list; ///< optional density shifts applied to V2
    std::string out_path;             ///< empty = stdout
    int max_f_degree = 3;             ///< equivariance: test arguments up to this degree
    int max_coeff_degree = 2;         ///< equivariance: symbol coefficients up to this degree
    std::optional<std::string> symbol_path; ///< quantize: serialized symbol field
};

inline int sweep_thread_cap() {
    if (const char* env = std::getenv("IFFQUANT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn over the list with bounded parallelism, preserving order.
template <class T, class Fn>
auto run_sweep(const std::vector<T>& items, Fn&& fn) {
    using R = decltype(fn(items[0]));
    std::vector<R> results(items.size());
    const int cap = sweep_thread_cap();
    size_t next = 0;
    while (next < items.size()) {
        const size_t batch = std::min(static_cast<size_t>(cap), items.size() - next);
        std::vector<std::future<R>> futs;
        for (size_t i = 0; i < batch; ++i)
            futs.push_back(std::async(std::launch::async, fn, std::cref(items[next + i])));
        for (size_t i = 0; i < batch; ++i) results[next + i] = futs[i].get();
        next += batch;
    }
    return results;
}

/// V2 twisted by an extra density(delta, 0) factor; the sweep parameter.
inline Representation shifted_v2(const GradedAlgebra& alg, const RepDescriptor& v2,
                                 const Rational& delta) {
    return build_rep(alg, RepDescriptor::tensor(v2, RepDescriptor::density(delta, 0)));
}

struct RunResult {
    json report;
    bool ok = true; ///< exit status 0 iff true
};

// ---------------------------------------------------------- verify-algebra ---

inline RunResult run_verify_algebra(const TaskConfig& cfg) {
    const GradedAlgebra alg = build_algebra(cfg.algebra);
    const StructureReport rep = verify_structure(alg);
    json j = to_json(rep);
    j["algebra"] = cfg.algebra.to_string();
    j["command"] = "verify-algebra";
    return {j, rep.all_pass()};
}

// ------------------------------------------------------------------ sweeps ---

namespace report_detail {

/// Shared sweep scaffolding: builds the pair (V1, V2 shifted by delta) and
/// collects one record per delta (a single unshifted record when no list).
template <class Fn>
RunResult sweep_records(const TaskConfig& cfg, const std::string& command, Fn&& per_delta) {
    const GradedAlgebra alg = build_algebra(cfg.algebra);
    const RepDescriptor d1 = parse_descriptor(cfg.v1_desc);
    const RepDescriptor d2 = parse_descriptor(cfg.v2_desc);
    const Representation v1 = build_rep(alg, d1);
    json j;
    j["command"] = command;
    j["algebra"] = cfg.algebra.to_string();
    j["v1"] = d1.to_string();
    j["v2"] = d2.to_string();
    j["k"] = cfg.k;
    bool ok = true;
    if (cfg.delta_list.empty()) {
        const Representation v2 = build_rep(alg, d2);
        auto [rec, rec_ok] = per_delta(alg, v1, v2, std::optional<Rational>());
        j["records"] = json::array({rec});
        ok = rec_ok;
    } else {
        auto results = run_sweep(cfg.delta_list, [&](const Rational& delta) {
            const Representation v2 = shifted_v2(alg, d2, delta);
            return per_delta(alg, v1, v2, std::optional<Rational>(delta));
        });
        json records = json::array();
        for (const auto& [rec, rec_ok] : results) {
            records.push_back(rec);
            ok = ok && rec_ok;
        }
        j["records"] = records;
    }
    return {j, ok};
}

} // namespace report_detail

inline RunResult run_spectrum(const TaskConfig& cfg) {
    return report_detail::sweep_records(
        cfg, "spectrum",
        [&](const GradedAlgebra& alg, const Representation& v1, const Representation& v2,
            const std::optional<Rational>& delta) -> std::pair<json, bool> {
            const SymbolTower tower = build_symbol_tower(alg, v1, v2, cfg.k);
            const SpectralDecomposition dec = symmetric_cflat_split(tower, cfg.k);
            json rec = to_json(dec);
            rec["space"] = "symmetric";
            rec["dim"] = static_cast<int>(multiset_count(alg.d, cfg.k)) * tower.at(cfg.k).homdim;
            if (delta) rec["delta"] = delta->to_string();
            return {rec, true};
        });
}

inline RunResult run_criticality(const TaskConfig& cfg) {
    return report_detail::sweep_records(
        cfg, "criticality",
        [&](const GradedAlgebra& alg, const Representation& v1, const Representation& v2,
            const std::optional<Rational>& delta) -> std::pair<json, bool> {
            const CriticalityReport rep = criticality_report(alg, v1, v2, cfg.k);
            json rec = to_json(rep);
            if (delta) rec["delta"] = delta->to_string();
            // critical is data here, not a failure
            return {rec, true};
        });
}

inline RunResult run_quantize(const TaskConfig& cfg) {
    std::optional<PolyTensorField> symbol;
    if (cfg.symbol_path) {
        std::ifstream is(*cfg.symbol_path);
        if (!is) throw std::runtime_error("cannot open symbol file: " + *cfg.symbol_path);
        json js;
        is >> js;
        symbol = field_from_json(js);
    }
    return report_detail::sweep_records(
        cfg, "quantize",
        [&](const GradedAlgebra& alg, const Representation& v1, const Representation& v2,
            const std::optional<Rational>& delta) -> std::pair<json, bool> {
            json rec;
            if (delta) rec["delta"] = delta->to_string();
            try {
                const Quantizer qz(alg, v1, v2, cfg.k);
                json ops = json::array();
                if (symbol) {
                    ops.push_back(json{{"symbol", to_json(*symbol)},
                                       {"operator", to_json(qz.build_operator(*symbol))}});
                } else {
                    // quantize every constant basis symbol of S^k
                    const SymbolSpace& top = qz.top();
                    const SparseMat embed = embed_symmetric_matrix(top);
                    const int nsym = embed.cols();
                    for (int b = 0; b < nsym; ++b) {
                        Vec unit(nsym, Rational(0));
                        unit[b] = Rational(1);
                        const PolyTensorField t =
                            PolyTensorField::constant(alg.d, embed.apply(unit));
                        ops.push_back(json{{"symbol_index", b},
                                           {"operator", to_json(qz.build_operator(t))}});
                    }
                }
                rec["operators"] = ops;
                return {rec, true};
            } catch (const CriticalPairError& ex) {
                rec["critical_pair_error"] = ex.what();
                return {rec, false};
            }
        });
}

inline RunResult run_equivariance(const TaskConfig& cfg) {
    return report_detail::sweep_records(
        cfg, "equivariance",
        [&](const GradedAlgebra& alg, const Representation& v1, const Representation& v2,
            const std::optional<Rational>& delta) -> std::pair<json, bool> {
            json rec;
            if (delta) rec["delta"] = delta->to_string();
            try {
                const Quantizer qz(alg, v1, v2, cfg.k);
                const SymbolSpace& top = qz.top();
                const SparseMat embed = embed_symmetric_matrix(top);
                const int nsym = embed.cols();
                const auto f_monomials = all_monomials(alg.d, cfg.max_f_degree);
                const auto coeff_monomials = all_monomials(alg.d, cfg.max_coeff_degree);
                long checked = 0, nonzero = 0;
                for (int b = 0; b < nsym; ++b) {
                    Vec unit(nsym, Rational(0));
                    unit[b] = Rational(1);
                    const Vec ambient = embed.apply(unit);
                    for (const auto& mc : coeff_monomials) {
                        const PolyTensorField t =
                            PolyTensorField::monomial_field(alg.d, mc, ambient);
                        for (const auto& mf : f_monomials) {
                            std::vector<PolyTensorField> fs;
                            for (int c = 0; c < v1.dim; ++c) {
                                Vec v(v1.dim, Rational(0));
                                v[c] = Rational(1);
                                fs.push_back(PolyTensorField::monomial_field(alg.d, mf, v));
                            }
                            for (const auto& f : fs)
                                for (int a = 0; a < alg.dim_g(); ++a) {
                                    ++checked;
                                    if (!check_equivariance(qz, t, f, alg.basis_element(a))
                                             .is_zero())
                                        ++nonzero;
                                }
                        }
                    }
                }
                rec["checked"] = checked;
                rec["nonzero_residuals"] = nonzero;
                rec["pass"] = (nonzero == 0);
                return {rec, nonzero == 0};
            } catch (const CriticalPairError& ex) {
                rec["critical_pair_error"] = ex.what();
                return {rec, false};
            }
        });
}

inline RunResult run_task(const TaskConfig& cfg, const std::string& command) {
    if (command == "verify-algebra") return run_verify_algebra(cfg);
    if (command == "spectrum") return run_spectrum(cfg);
    if (command == "criticality") return run_criticality(cfg);
    if (command == "quantize") return run_quantize(cfg);
    if (command == "equivariance") return run_equivariance(cfg);
    throw std::invalid_argument("unknown command: " + command);
}

} // namespace iffquant
