/**
 * @file iffquant.cpp
 * @brief Command-line front door: structure verification, Casimir spectra,
 *        criticality sweeps, quantization builds and equivariance suites,
 *        all emitting deterministic JSON reports.
 *
 * Examples:
 *   iffquant verify-algebra --algebra "conformal(1,2)"
 *   iffquant spectrum --algebra "conformal(1,2)" --v1 "density(1/3,0)" \
 *       --v2 "density(1/2,0)" --k 2
 *   iffquant criticality --algebra "conformal(1,2)" --v1 "density(1/3,0)" \
 *       --v2 "density(1/3,0)" --k 2 --delta-list 0,1/2,1,3/2
 *   iffquant quantize --algebra "projective(2)" --v1 "density(1/3,0)" \
 *       --v2 "density(1/2,0)" --k 2 --out op.json
 *   iffquant equivariance --algebra "conformal(1,2)" --v1 "density(1/3,0)" \
 *       --v2 "density(1/2,0)" --k 2
 *
 * Density sweeps (--delta-list) tensor V2 with density(delta,0) per entry.
 * IFFQUANT_THREADS caps sweep parallelism. Exit status is 0 exactly when no
 * invariant failed and no error occurred; for `criticality`, critical pairs
 * are data, not failures.
 */
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include <iffquant/reports.hpp>

namespace {

std::vector<iffquant::Rational> parse_delta_list(const std::string& s) {
    std::vector<iffquant::Rational> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const std::string item = s.substr(start, comma - start);
        if (!item.empty()) out.push_back(iffquant::Rational::parse(item));
        start = comma + 1;
        if (comma == s.size()) break;
    }
    return out;
}

void emit(const iffquant::RunResult& result, const std::string& out_path) {
    if (out_path.empty())
        std::cout << result.report.dump(2) << "\n";
    else
        iffquant::write_json_file(result.report, out_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact conformally/projectively invariant quantization toolkit"};
    app.require_subcommand(1);

    std::string algebra = "conformal(1,2)";
    std::string v1 = "density(0,0)";
    std::string v2 = "density(0,0)";
    int k = 1;
    std::string delta_list;
    std::string out_path;
    std::string symbol_path;
    int max_f_degree = 3;
    int max_coeff_degree = 2;

    auto add_common = [&](CLI::App* sub, bool reps) {
        sub->add_option("--algebra", algebra, "algebra spec: conformal(p,q) or projective(m)")
            ->required();
        sub->add_option("--out", out_path, "output path for the JSON report (default stdout)");
        if (reps) {
            sub->add_option("--v1", v1, "source module descriptor, e.g. density(1/2,0)");
            sub->add_option("--v2", v2, "target module descriptor");
            sub->add_option("--k", k, "symbol degree");
            sub->add_option("--delta-list", delta_list,
                            "comma-separated density shifts applied to V2, e.g. 0,1/2,1");
        }
    };

    CLI::App* cmd_verify = app.add_subcommand("verify-algebra", "run the structure checks");
    add_common(cmd_verify, false);
    CLI::App* cmd_spectrum =
        app.add_subcommand("spectrum", "spectral decomposition of the flat Casimir on S^k");
    add_common(cmd_spectrum, true);
    CLI::App* cmd_criticality =
        app.add_subcommand("criticality", "critical-pair detection up to degree k");
    add_common(cmd_criticality, true);
    CLI::App* cmd_quantize =
        app.add_subcommand("quantize", "build quantized operators for degree-k symbols");
    add_common(cmd_quantize, true);
    cmd_quantize->add_option("--symbol", symbol_path,
                             "serialized symbol field to quantize (default: all basis symbols)");
    CLI::App* cmd_equivariance =
        app.add_subcommand("equivariance", "equivariance residual suite for the quantization");
    add_common(cmd_equivariance, true);
    cmd_equivariance->add_option("--max-f-degree", max_f_degree,
                                 "test arguments up to this polynomial degree");
    cmd_equivariance->add_option("--max-coeff-degree", max_coeff_degree,
                                 "symbol coefficients up to this polynomial degree");

    CLI11_PARSE(app, argc, argv);

    try {
        iffquant::TaskConfig cfg;
        cfg.algebra = iffquant::parse_algebra_spec(algebra);
        cfg.v1_desc = v1;
        cfg.v2_desc = v2;
        cfg.k = k;
        cfg.out_path = out_path;
        cfg.max_f_degree = max_f_degree;
        cfg.max_coeff_degree = max_coeff_degree;
        if (!delta_list.empty()) cfg.delta_list = parse_delta_list(delta_list);
        if (!symbol_path.empty()) cfg.symbol_path = symbol_path;

        const std::string command = app.get_subcommands().front()->get_name();
        const iffquant::RunResult result = iffquant::run_task(cfg, command);
        emit(result, out_path);
        return result.ok ? 0 : 1;
    } catch (const iffquant::DescriptorParseError& ex) {
        std::cerr << "descriptor error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
