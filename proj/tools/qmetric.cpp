// command-line front end: analyze / metrize / snowflake / dyadic / gen
//
// exit codes: 0 success, 1 validation or domain failure, 2 usage, parse or
// I/O failure

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmetric/analysis.hpp"
#include "qmetric/dyadic.hpp"
#include "qmetric/harness.hpp"
#include "qmetric/io.hpp"
#include "qmetric/metrize.hpp"
#include "qmetric/space.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using qmetric::rational;

int exit_code_for(qmetric::errc c) {
    switch (c) {
        case qmetric::errc::parse_error:
        case qmetric::errc::io_error:
            return 2;
        default:
            return 1;
    }
}

ordered_json scalar_json(const rational& q) { return qmetric::to_string(q); }
ordered_json scalar_json(double x) { return x; }

ordered_json triple_json(const std::optional<std::array<int, 3>>& t) {
    if (!t) return nullptr;
    return ordered_json::array({(*t)[0], (*t)[1], (*t)[2]});
}

void print_report(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct matrix_input {
    std::string path;
    std::string digest;
    qmetric::parsed_matrix pm;
    std::vector<std::string> labels;
};

matrix_input load_input(const std::string& path, const std::string& labels_path) {
    matrix_input in;
    in.path = path;
    const std::string bytes = qmetric::read_file(path);
    in.digest = qmetric::digest_hex(bytes);
    in.pm = qmetric::parse_matrix_text(bytes);
    if (!labels_path.empty()) {
        const std::string lb = qmetric::read_file(labels_path);
        std::size_t pos = 0;
        while (pos <= lb.size()) {
            const std::size_t eol = std::min(lb.find('\n', pos), lb.size());
            std::string line(lb, pos, eol - pos);
            pos = eol + 1;
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) in.labels.push_back(std::move(line));
        }
    }
    return in;
}

ordered_json report_head(const char* command, const matrix_input& in) {
    ordered_json j;
    j["command"] = command;
    j["version"] = qmetric::version_string;
    j["input"] = in.path;
    j["input_digest"] = in.digest;
    j["mode"] = in.pm.float_mode ? "float" : "exact";
    return j;
}

// a must be an exact token: integer or ratio
rational parse_exact_value(const std::string& text) {
    const auto kind = qmetric::detail::classify_token(text, 0, 0);
    if (kind == qmetric::detail::token_kind::decimal)
        throw qmetric::error(qmetric::errc::parse_error,
                             "'" + text + "' is a decimal; this option needs an exact value like 2/5");
    return qmetric::detail::token_to_rational(text, 0, 0);
}

qmetric::dyadic::point parse_dyadic_point(const std::string& text) {
    const rational v = parse_exact_value(text);
    if (v < 0 || v > 1)
        throw qmetric::error(qmetric::errc::bad_parameter, "point " + text + " lies outside [0, 1]");
    const qmetric::bigint den = denominator(v);
    const unsigned bit = boost::multiprecision::msb(den);
    if (den != qmetric::bigint(1) << bit || bit > qmetric::dyadic::point::max_level)
        throw qmetric::error(qmetric::errc::bad_parameter,
                             "point " + text + " is not a dyadic rational of supported level");
    return qmetric::dyadic::point::make(numerator(v).convert_to<std::uint64_t>(), bit);
}

template <class S>
int run_analyze(const matrix_input& in, const std::vector<std::vector<S>>& grid) {
    const auto space = qmetric::validate_space<S>(grid, in.labels);
    const auto an = qmetric::classify(space);
    ordered_json j = report_head("analyze", in);
    j["n"] = space.size();
    j["labels"] = space.labels();
    j["K"] = scalar_json(an.quasi_constant);
    j["C"] = scalar_json(an.triangle_constant);
    j["is_metric"] = an.is_metric;
    j["is_ultrametric"] = an.is_ultrametric;
    j["worst_triple_K"] = triple_json(an.worst_triple_quasi);
    j["worst_triple_C"] = triple_json(an.worst_triple_triangle);
    print_report(j);
    return 0;
}

template <class S>
int run_metrize(const matrix_input& in, const std::vector<std::vector<S>>& grid, const std::string& output,
                bool with_oracle) {
    const auto space = qmetric::validate_space<S>(grid, in.labels);
    const auto closure = qmetric::chain_metrize(space);
    const auto rep = qmetric::frink_check(space, closure);
    qmetric::write_matrix_file(output, closure.distances());

    ordered_json j = report_head("metrize", in);
    j["n"] = space.size();
    j["K"] = scalar_json(rep.quasi_constant);
    j["applicable"] = rep.applicable;
    j["lower_ok"] = rep.lower_ok;
    j["upper_ok"] = rep.upper_ok;
    j["min_ratio"] = scalar_json(rep.min_ratio);
    j["argmin_pair"] = ordered_json::array({rep.argmin_pair.first, rep.argmin_pair.second});
    j["zero_pairs"] = static_cast<int>(closure.zero_pairs().size());
    j["output"] = output;

    bool mismatch = false;
    ordered_json oracle;
    if (with_oracle) {
        const int mi = std::max(0, space.size() - 2);
        try {
            const auto od = qmetric::chain_oracle(space, mi);
            bool agrees = true;
            qmetric::numeric_policy<S> pol;
            for (int i = 0; i < space.size() && agrees; ++i)
                for (int j2 = 0; j2 < space.size() && agrees; ++j2)
                    if (!pol.eq(od(i, j2), closure.d(i, j2))) agrees = false;
            oracle["checked"] = true;
            oracle["max_interior"] = mi;
            oracle["agrees"] = agrees;
            oracle["note"] = "";
            mismatch = !agrees;
        } catch (const qmetric::error& e) {
            if (e.code() != qmetric::errc::enumeration_budget) throw;
            oracle["checked"] = false;
            oracle["max_interior"] = mi;
            oracle["agrees"] = nullptr;
            oracle["note"] = "enumeration budget exceeded";
        }
    } else {
        oracle["checked"] = false;
        oracle["max_interior"] = nullptr;
        oracle["agrees"] = nullptr;
        oracle["note"] = "not requested";
    }
    j["oracle"] = oracle;
    print_report(j);
    if (mismatch) {
        std::cerr << "error: oracle disagrees with the closure\n";
        return 1;
    }
    return 0;
}

template <class S>
int run_snowflake(const matrix_input& in, const std::vector<std::vector<S>>& grid, const std::string& p_text,
                  const std::string& output) {
    const auto space = qmetric::validate_space<S>(grid, in.labels);
    S p;
    if constexpr (std::is_same_v<S, rational>) {
        // decimals stay parseable here so the exact-mode integer rule can
        // report them properly downstream
        const auto kind = qmetric::detail::classify_token(p_text, 0, 0);
        if (kind == qmetric::detail::token_kind::decimal)
            throw qmetric::error(qmetric::errc::non_integer_exponent,
                                 "exact mode needs an integer exponent, got " + p_text);
        p = qmetric::detail::token_to_rational(p_text, 0, 0);
    } else {
        const auto kind = qmetric::detail::classify_token(p_text, 0, 0);
        p = qmetric::detail::token_to_double(p_text, kind, 0, 0);
    }
    const auto before = qmetric::classify(space);
    const auto flaked = qmetric::snowflake(space, p);
    const auto after = qmetric::classify(flaked);
    qmetric::write_matrix_file(output, flaked.distances());

    ordered_json j = report_head("snowflake", in);
    j["n"] = space.size();
    j["p"] = scalar_json(p);
    j["K_before"] = scalar_json(before.quasi_constant);
    j["C_before"] = scalar_json(before.triangle_constant);
    j["K_after"] = scalar_json(after.quasi_constant);
    j["C_after"] = scalar_json(after.triangle_constant);
    j["output"] = output;
    print_report(j);
    return 0;
}

int run_dyadic(const std::string& a_text, int depth, bool check_facts, bool ratios, bool collapse,
               const std::string& emit_matrix, const std::string& tent_point) {
    const qmetric::dyadic::params params(parse_exact_value(a_text));
    if (depth < 0)
        throw qmetric::error(qmetric::errc::bad_parameter, "depth must be nonnegative");
    if (depth > 12)
        throw qmetric::error(qmetric::errc::depth_budget,
                             "depth " + std::to_string(depth) + " exceeds the budget 12");

    if (!tent_point.empty()) {
        // CSV rows on stdout instead of a report
        const auto z = parse_dyadic_point(tent_point);
        for (const auto& u : qmetric::dyadic::tent(z))
            std::cout << u.str() << "," << u.level() << "\n";
        return 0;
    }

    ordered_json j;
    j["command"] = "dyadic";
    j["version"] = qmetric::version_string;
    const std::string param_string =
        "dyadic a=" + qmetric::to_string(params.a()) + " depth=" + std::to_string(depth);
    j["input_digest"] = qmetric::digest_hex(param_string);
    j["a"] = qmetric::to_string(params.a());
    j["depth"] = depth;
    j["point_count"] = (std::uint64_t(1) << depth) + 1;
    j["tau_limit"] = qmetric::to_string(params.tau_limit());
    j["triangle_bound"] = qmetric::to_string(params.triangle_bound());
    ordered_json taus = ordered_json::array();
    for (int n = 1; n <= depth; ++n) taus.push_back(qmetric::to_string(params.tau(n)));
    j["tau"] = taus;

    if (check_facts) {
        const auto rep = qmetric::dyadic::verify_facts(depth);
        ordered_json f;
        f["points_checked"] = rep.points_checked;
        f["level_coverage_ok"] = rep.level_coverage_ok;
        f["neighbor_jump_ok"] = rep.neighbor_jump_ok;
        f["edge_gap_ok"] = rep.edge_gap_ok;
        f["first_failure"] = rep.first_failure;
        j["facts"] = f;
    } else {
        j["facts"] = nullptr;
    }

    if (ratios) {
        const auto rr = qmetric::harness::ratio_experiment(params, depth);
        ordered_json r;
        r["max_ratio"] = qmetric::to_string(rr.max_ratio);
        r["witness"] = ordered_json::array(
            {rr.witness[0].str(), rr.witness[1].str(), rr.witness[2].str()});
        r["bound"] = qmetric::to_string(params.triangle_bound());
        j["ratios"] = r;
    } else {
        j["ratios"] = nullptr;
    }

    if (collapse) {
        const auto rows = qmetric::harness::collapse_experiment(params, depth);
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json r;
            r["depth"] = row.depth;
            r["distance"] = qmetric::to_string(row.chain_distance);
            r["upper_bound"] = qmetric::to_string(row.upper_bound);
            r["uniform_chain_cost"] = qmetric::to_string(row.uniform_chain_cost);
            arr.push_back(r);
        }
        j["collapse"] = arr;
    } else {
        j["collapse"] = nullptr;
    }

    if (!emit_matrix.empty()) {
        const auto space = qmetric::dyadic::truncate(depth, params);
        qmetric::write_matrix_file(emit_matrix, space.distances());
        j["matrix_output"] = emit_matrix;
    } else {
        j["matrix_output"] = nullptr;
    }

    print_report(j);
    return 0;
}

int run_gen(const std::string& kind_text, int n, std::uint64_t seed, std::optional<double> p,
            const std::string& output) {
    qmetric::harness::generator_spec spec;
    std::string kind = kind_text;
    if (kind == "euclidean-metric") kind = "euclidean";
    if (kind == "snowflaked-metric") kind = "snowflaked";
    if (kind == "euclidean") spec.kind = qmetric::harness::space_kind::euclidean;
    else if (kind == "ultrametric") spec.kind = qmetric::harness::space_kind::ultrametric;
    else if (kind == "snowflaked") spec.kind = qmetric::harness::space_kind::snowflaked;
    else if (kind == "perturbed") spec.kind = qmetric::harness::space_kind::perturbed;
    else
        throw qmetric::error(qmetric::errc::bad_spec,
                             "unknown kind '" + kind_text +
                                 "'; expected euclidean, ultrametric, snowflaked or perturbed");
    spec.count = n;
    spec.seed = seed;
    spec.exponent = p;

    const auto space = qmetric::harness::generate_space(spec);
    qmetric::write_matrix_file(output, space.distances());

    double applied = 0.0;
    bool has_applied = false;
    if (spec.kind == qmetric::harness::space_kind::snowflaked) {
        applied = p.value_or(2.0);
        has_applied = true;
    } else if (spec.kind == qmetric::harness::space_kind::perturbed) {
        applied = p.value_or(0.25);
        has_applied = true;
    }

    ordered_json j;
    j["command"] = "gen";
    j["version"] = qmetric::version_string;
    std::string param_string = "gen kind=" + kind + " n=" + std::to_string(n) +
                               " seed=" + std::to_string(seed);
    if (has_applied) param_string += " p=" + qmetric::to_string(applied);
    j["input_digest"] = qmetric::digest_hex(param_string);
    j["kind"] = kind;
    j["n"] = n;
    j["seed"] = seed;
    j["p"] = has_applied ? ordered_json(applied) : ordered_json(nullptr);
    j["mode"] = "float";
    j["output"] = output;
    print_report(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chain metrization toolkit for finite quasi-metric spaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qmetric::version_string);

    std::string input, labels_path, output, p_text;
    bool oracle = false;

    auto* analyze = app.add_subcommand("analyze", "validate a matrix and report its constants");
    analyze->add_option("--input", input, "comma-separated matrix file")->required();
    analyze->add_option("--labels", labels_path, "optional file with one label per line");

    auto* metrize = app.add_subcommand("metrize", "chain-metrize a matrix and check the two-sided bound");
    metrize->add_option("--input", input, "comma-separated matrix file")->required();
    metrize->add_option("--labels", labels_path, "optional file with one label per line");
    metrize->add_option("--output", output, "where to write the closure matrix")->required();
    metrize->add_flag("--oracle", oracle, "cross-check against exhaustive chain enumeration");

    auto* snowflake = app.add_subcommand("snowflake", "raise all distances to a power");
    snowflake->add_option("--input", input, "comma-separated matrix file")->required();
    snowflake->add_option("--labels", labels_path, "optional file with one label per line");
    snowflake->add_option("--p", p_text, "exponent; exact inputs need an integer")->required();
    snowflake->add_option("--output", output, "where to write the transformed matrix")->required();

    std::string a_text, emit_matrix, tent_point;
    int depth = 0;
    bool check_facts = false, ratios = false, collapse = false;

    auto* dyadic = app.add_subcommand("dyadic", "the dyadic construction: facts, ratios, collapse, matrices");
    dyadic->add_option("--a", a_text, "base in (0, 1/2], exact, like 2/5")->required();
    dyadic->add_option("--depth", depth, "truncation depth, at most 12")->required();
    auto* facts_flag = dyadic->add_flag("--check-facts", check_facts, "verify the structural facts");
    auto* ratios_flag = dyadic->add_flag("--ratios", ratios, "scan triangle ratios (depth at most 8)");
    auto* collapse_flag = dyadic->add_flag("--collapse", collapse, "closure distance 0..1 per depth");
    auto* emit_opt = dyadic->add_option("--emit-matrix", emit_matrix, "write the truncated matrix here");
    auto* tent_opt =
        dyadic->add_option("--tent", tent_point, "print the tent rows of this point as CSV instead");
    tent_opt->excludes(facts_flag)->excludes(ratios_flag)->excludes(collapse_flag)->excludes(emit_opt);

    std::string kind_text;
    int count = 0;
    std::uint64_t seed = 0;
    double p_value = 0.0;

    auto* gen = app.add_subcommand("gen", "generate a seeded example space");
    gen->add_option("--kind", kind_text, "euclidean | ultrametric | snowflaked | perturbed")->required();
    gen->add_option("--n", count, "number of points")->required();
    gen->add_option("--seed", seed, "PRNG seed")->required();
    auto* p_opt = gen->add_option("--p", p_value, "exponent (snowflaked) or width (perturbed)");
    gen->add_option("--output", output, "where to write the matrix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) {
            const auto in = load_input(input, labels_path);
            return in.pm.float_mode ? run_analyze(in, in.pm.floating) : run_analyze(in, in.pm.exact);
        }
        if (*metrize) {
            const auto in = load_input(input, labels_path);
            return in.pm.float_mode ? run_metrize(in, in.pm.floating, output, oracle)
                                    : run_metrize(in, in.pm.exact, output, oracle);
        }
        if (*snowflake) {
            const auto in = load_input(input, labels_path);
            return in.pm.float_mode ? run_snowflake(in, in.pm.floating, p_text, output)
                                    : run_snowflake(in, in.pm.exact, p_text, output);
        }
        if (*dyadic)
            return run_dyadic(a_text, depth, check_facts, ratios, collapse, emit_matrix, tent_point);
        if (*gen)
            return run_gen(kind_text, count, seed,
                           p_opt->count() > 0 ? std::optional<double>(p_value) : std::nullopt, output);
    } catch (const qmetric::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
