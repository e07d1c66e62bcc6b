/**
 * @file serialize.hpp
 * @brief JSON interchange for algebras, fields, operators and reports.
 *
 * All rationals travel as "num/den" strings, never as floats. Emission is
 * deterministic: object keys are sorted and arrays follow the fixed basis
 * and component orderings, so identical inputs produce identical bytes.
 */
#pragma once

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

#include "flat_quantizer.hpp"
#include "lie_core.hpp"
#include "representations.hpp"
#include "symbol_calculus.hpp"

namespace iffquant {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return r.to_string(); }

inline Rational rational_from_json(const json& j) { return Rational::parse(j.get<std::string>()); }

// ---------------------------------------------------------------- algebra ---

inline json to_json(const GradedAlgebra& alg) {
    json j;
    j["type"] = "graded_algebra";
    j["signature"] = alg.signature.to_string();
    j["d"] = alg.d;
    j["basis_labels"] = alg.labels;
    json grading = json::object();
    for (int a = 0; a < alg.dim_g(); ++a) grading[alg.labels[a]] = alg.grading[a];
    j["grading"] = grading;
    json sc = json::array();
    for (int a = 0; a < alg.dim_g(); ++a)
        for (int b = a + 1; b < alg.dim_g(); ++b) {
            const Vec& c = alg.bracket_table[a][b];
            json coords = json::array();
            for (int t = 0; t < alg.dim_g(); ++t)
                if (!c[t].is_zero()) coords.push_back(json::array({t, c[t].to_string()}));
            if (!coords.empty()) sc.push_back(json{{"a", a}, {"b", b}, {"c", coords}});
        }
    j["structure_constants"] = sc;
    return j;
}

/// Rebuilds an algebra from its serialized structure constants. The Killing
/// matrix and dual basis are recomputed (and re-validated); the matrix model
/// is not part of the interchange format, so chart-dependent operations are
/// unavailable on the result.
inline GradedAlgebra algebra_from_json(const json& j) {
    GradedAlgebra alg;
    alg.signature = parse_algebra_spec(j.at("signature").get<std::string>());
    alg.d = j.at("d").get<int>();
    alg.labels = j.at("basis_labels").get<std::vector<std::string>>();
    const int n = static_cast<int>(alg.labels.size());
    alg.dim_h0 = n - 2 * alg.d - 1;
    if (alg.dim_h0 < 0 || alg.dim_g() != n)
        throw std::invalid_argument("algebra_from_json: inconsistent dimensions");
    alg.grading.resize(n);
    for (int a = 0; a < n; ++a) alg.grading[a] = j.at("grading").at(alg.labels[a]).get<int>();
    alg.bracket_table.assign(n, std::vector<Vec>(n, Vec(n, Rational(0))));
    for (const auto& e : j.at("structure_constants")) {
        const int a = e.at("a").get<int>();
        const int b = e.at("b").get<int>();
        Vec c(n, Rational(0));
        for (const auto& pair : e.at("c"))
            c[pair.at(0).get<int>()] = Rational::parse(pair.at(1).get<std::string>());
        alg.bracket_table[a][b] = c;
        for (int t = 0; t < n; ++t) alg.bracket_table[b][a][t] = -c[t];
    }
    alg.killing = lie_detail::killing_matrix_from_constants(alg);
    alg.dual = compute_dual_basis(alg);
    return alg;
}

// ----------------------------------------------------------------- fields ---

inline json to_json(const PolyTensorField& f) {
    json j;
    j["nvars"] = f.nvars;
    j["dim"] = f.dim;
    json terms = json::array();
    for (const auto& [m, v] : f.terms) {
        json coords = json::array();
        for (const auto& x : v) coords.push_back(x.to_string());
        terms.push_back(json{{"monomial", m}, {"coords", coords}});
    }
    j["terms"] = terms;
    return j;
}

inline PolyTensorField field_from_json(const json& j) {
    PolyTensorField f(j.at("nvars").get<int>(), j.at("dim").get<int>());
    for (const auto& t : j.at("terms")) {
        const Monomial m = t.at("monomial").get<Monomial>();
        Vec v;
        for (const auto& c : t.at("coords")) v.push_back(Rational::parse(c.get<std::string>()));
        f.add_term(m, v);
    }
    return f;
}

inline json to_json(const PolyDiffOperator& op) {
    json j;
    j["order"] = op.order();
    j["nvars"] = op.nvars;
    j["v1_dim"] = op.v1dim;
    j["v2_dim"] = op.v2dim;
    json terms = json::array();
    for (const auto& [beta, coeff] : op.terms) {
        json poly = json::array();
        for (const auto& [m, gl] : coeff.terms) {
            json matrix = json::array();
            for (int r = 0; r < op.v2dim; ++r) {
                json row = json::array();
                for (int c = 0; c < op.v1dim; ++c)
                    row.push_back(gl[static_cast<size_t>(r) * op.v1dim + c].to_string());
                matrix.push_back(row);
            }
            poly.push_back(json{{"monomial", m}, {"matrix", matrix}});
        }
        terms.push_back(json{{"beta", beta}, {"coeff_poly", poly}});
    }
    j["terms"] = terms;
    return j;
}

inline PolyDiffOperator operator_from_json(const json& j) {
    PolyDiffOperator op;
    op.nvars = j.at("nvars").get<int>();
    op.v1dim = j.at("v1_dim").get<int>();
    op.v2dim = j.at("v2_dim").get<int>();
    for (const auto& t : j.at("terms")) {
        const Monomial beta = t.at("beta").get<Monomial>();
        PolyTensorField coeff(op.nvars, op.v1dim * op.v2dim);
        for (const auto& p : t.at("coeff_poly")) {
            const Monomial m = p.at("monomial").get<Monomial>();
            Vec gl(static_cast<size_t>(op.v1dim) * op.v2dim);
            const auto& matrix = p.at("matrix");
            for (int r = 0; r < op.v2dim; ++r)
                for (int c = 0; c < op.v1dim; ++c)
                    gl[static_cast<size_t>(r) * op.v1dim + c] =
                        Rational::parse(matrix.at(r).at(c).get<std::string>());
            coeff.add_term(m, gl);
        }
        op.add(beta, coeff);
    }
    return op;
}

// ---------------------------------------------------------------- reports ---

inline json to_json(const StructureReport& rep) {
    json j;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc{{"name", c.name}, {"pass", c.pass}};
        if (!c.detail.empty()) jc["detail"] = c.detail;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    j["all_pass"] = rep.all_pass();
    return j;
}

inline json to_json(const CriticalityReport& rep) {
    json j;
    j["algebra"] = rep.algebra.to_string();
    j["v1"] = rep.v1.to_string();
    j["v2"] = rep.v2.to_string();
    j["k"] = rep.k;
    json comps = json::array();
    for (const auto& c : rep.components) {
        json jc;
        jc["degree"] = c.degree;
        jc["factor"] = c.factor.to_string();
        jc["eigenvalue"] = c.eigenvalue ? json(c.eigenvalue->to_string()) : json(nullptr);
        jc["dim"] = c.dim;
        json spectra = json::array();
        for (const auto& [level, cp] : c.tree_spectra)
            spectra.push_back(json{{"level", level}, {"charpoly", cp.to_string()}});
        jc["tree_spectra"] = spectra;
        jc["critical"] = c.critical;
        comps.push_back(jc);
    }
    j["components"] = comps;
    j["overall_critical"] = rep.overall_critical;
    return j;
}

inline json to_json(const SpectralDecomposition& dec) {
    json j;
    j["minpoly"] = dec.minpoly.to_string();
    j["charpoly"] = dec.charpoly.to_string();
    json comps = json::array();
    for (const auto& c : dec.components) {
        comps.push_back(json{{"factor", c.factor.to_string()},
                             {"eigenvalue", c.eigenvalue ? json(c.eigenvalue->to_string()) : json(nullptr)},
                             {"dim", c.dim}});
    }
    j["components"] = comps;
    return j;
}

inline void write_json_file(const json& j, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << j.dump(2) << "\n";
}

} // namespace iffquant
