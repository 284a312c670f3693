#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capdeg/acyclic.hpp"
#include "capdeg/bounds.hpp"
#include "capdeg/constructions.hpp"
#include "capdeg/degeneration.hpp"
#include "capdeg/error.hpp"
#include "capdeg/exact_solvers.hpp"
#include "capdeg/hypergraph.hpp"
#include "capdeg/io.hpp"
#include "capdeg/reproduce.hpp"
#include "capdeg/tightness.hpp"

#ifndef CAPDEG_DATA_DIR
#define CAPDEG_DATA_DIR "data"
#endif

namespace {

using namespace capdeg;

struct Global {
    double budget_secs = 1800;
    std::uint64_t budget_nodes = 100'000'000;
    std::uint64_t seed = 0;
    bool deterministic = false;
    std::string out;

    Budget budget() const {
        Budget b;
        b.max_nodes = budget_nodes;
        b.max_time = std::chrono::duration<double>(budget_secs);
        return b;
    }
};

// Writes the main artifact to --out, or to stdout when --out is absent.
void emit(const Global& global, const std::string& text) {
    if (global.out.empty()) {
        std::cout << text;
    } else {
        write_file(global.out, text);
    }
}

Hypergraph load_hypergraph(const std::string& path) { return parse_hypergraph(read_file(path)); }

std::string status_line(const std::string& name, const SolveOutcome& outcome) {
    std::ostringstream s;
    s << name << " " << outcome.value << " status " << to_string(outcome.status) << " nodes " << outcome.nodes_explored
      << " seconds " << outcome.wall_time.count() << "\n";
    return s.str();
}

std::string rows_text(const DegenerationReport& report) {
    std::ostringstream s;
    for (const auto& row : report.rows) {
        for (Vertex v : row.element) {
            s << v << " ";
        }
        for (std::int64_t u : row.evaluation) {
            s << u << " ";
        }
        s << row.sum << " " << (row.in_phi ? "phi" : "psi-phi") << (row.ok ? "" : " VIOLATION") << "\n";
    }
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capdeg: Shannon capacity bounds for directed hypergraphs"};
    app.require_subcommand(1);
    app.fallthrough();

    Global global;
    app.add_option("--budget-secs", global.budget_secs, "Wall-clock budget per search in seconds")->capture_default_str();
    app.add_option("--budget-nodes", global.budget_nodes, "Node budget per search")->capture_default_str();
    app.add_option("--seed", global.seed, "Seed for randomized commands")->capture_default_str();
    app.add_flag("--deterministic", global.deterministic, "Accepted for scripts; every command is deterministic");
    app.add_option("--out", global.out, "Write the main artifact to this file");

    int exit_code = 0;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a hypergraph");
    std::string gen_kind;
    std::string gen_group = "2";
    int gen_k = 2;
    int gen_power = 1;
    gen->add_option("kind", gen_kind, "corner | kcorner | cap")->required()->check(CLI::IsMember({"corner", "kcorner", "cap"}));
    gen->add_option("--group", gen_group, "Group moduli, e.g. 2 or 2,2")->capture_default_str();
    gen->add_option("--k", gen_k, "Corner dimension for kcorner")->capture_default_str();
    gen->add_option("--power,--n", gen_power, "Strong power")->capture_default_str();
    gen->callback([&] {
        Hypergraph h = gen_kind == "cap"      ? capset_hypergraph()
                       : gen_kind == "corner" ? corner_hypergraph(GroupSpec::parse(gen_group))
                                              : kcorner_hypergraph(GroupSpec::parse(gen_group), gen_k);
        if (gen_power > 1) {
            h = power(h, gen_power);
        }
        emit(global, serialize(h));
    });

    // alpha
    auto* alpha = app.add_subcommand("alpha", "Independence number");
    std::string alpha_file;
    std::string alpha_witness;
    alpha->add_option("hypergraph", alpha_file)->required()->check(CLI::ExistingFile);
    alpha->add_option("--witness-out", alpha_witness, "Write the independent set");
    alpha->callback([&] {
        const auto outcome = independence_number(load_hypergraph(alpha_file), global.budget());
        emit(global, status_line("alpha", outcome));
        if (!alpha_witness.empty()) {
            write_file(alpha_witness, serialize_vertex_set(outcome.witness));
        }
    });

    // im
    auto* im = app.add_subcommand("im", "Induced matching number of the adjacency support");
    std::string im_file;
    std::string im_witness;
    im->add_option("hypergraph", im_file)->required()->check(CLI::ExistingFile);
    im->add_option("--witness-out", im_witness, "Write the induced matching, one D line per element");
    im->callback([&] {
        const SupportSet phi = adjacency_support(load_hypergraph(im_file));
        const auto outcome = induced_matching_number(phi, global.budget());
        emit(global, status_line("Q_IM", outcome));
        if (!im_witness.empty()) {
            std::ostringstream s;
            for (Vertex e : outcome.witness) {
                s << "D";
                for (Vertex v : phi.elements()[e]) {
                    s << " " << v;
                }
                s << "\n";
            }
            write_file(im_witness, s.str());
        }
    });

    // beta
    auto* beta = app.add_subcommand("beta", "Search for a large combinatorial degeneration");
    std::string beta_file;
    std::string beta_cert;
    BetaOptions beta_options;
    beta->add_option("hypergraph", beta_file)->required()->check(CLI::ExistingFile);
    beta->add_option("--max-abs", beta_options.max_abs, "Box on the LP map values; 0 for the unbounded cone")
        ->capture_default_str();
    beta->add_option("--big-m", beta_options.big_m, "Cap on diagonal sums outside S; 0 for none")->capture_default_str();
    beta->add_flag("--assume-transitive", beta_options.assume_transitive, "Fix vertex 0 in S");
    beta->add_option("--cert-out", beta_cert, "Write the best certificate");
    beta->callback([&] {
        beta_options.budget = global.budget();
        const auto result = beta_search(load_hypergraph(beta_file), beta_options);
        std::ostringstream s;
        s << status_line("beta", result.search) << "lp-checks " << result.lp_checks << " nogoods " << result.nogoods
          << "\n";
        emit(global, s.str());
        if (!beta_cert.empty() && result.certificate) {
            write_file(beta_cert, serialize(*result.certificate));
        }
    });

    // verify-degen
    auto* verify = app.add_subcommand("verify-degen", "Verify a degeneration certificate");
    std::string verify_graph;
    std::string verify_cert;
    bool verify_rows = false;
    verify->add_option("hypergraph", verify_graph)->required()->check(CLI::ExistingFile);
    verify->add_option("certificate", verify_cert)->required()->check(CLI::ExistingFile);
    verify->add_flag("--rows", verify_rows, "Print every row: element, evaluation, sum, class");
    verify->callback([&] {
        const Hypergraph h = load_hypergraph(verify_graph);
        const auto cert = parse_certificate(read_file(verify_cert), h.vertex_count());
        const auto report = verify_degeneration(h, cert);
        std::string text = verify_rows ? rows_text(report) : std::string();
        text += std::string(report.valid ? "valid" : "invalid") + " |S| " + std::to_string(cert.subset.size()) +
                " violations " + std::to_string(report.violations.size()) + "\n";
        emit(global, text);
        exit_code = report.valid ? 0 : 1;
    });

    // extract
    auto* extract = app.add_subcommand("extract", "Independent set of H^n from a certificate");
    std::string extract_graph;
    std::string extract_cert;
    int extract_n = 0;
    bool extract_slices = false;
    extract->add_option("hypergraph", extract_graph)->required()->check(CLI::ExistingFile);
    extract->add_option("certificate", extract_cert)->required()->check(CLI::ExistingFile);
    extract->add_option("--n", extract_n, "Power")->required();
    extract->add_flag("--slices", extract_slices, "Count the refined zero-sum slices instead of listing strings");
    extract->callback([&] {
        const Hypergraph h = load_hypergraph(extract_graph);
        const auto cert = parse_certificate(read_file(extract_cert), h.vertex_count());
        std::ostringstream s;
        if (extract_slices) {
            const auto report = refined_slice_count(h, cert, extract_n);
            if (report.uniform) {
                s << "uniform " << report.uniform->count.get_str() << "\n";
            }
            s << "best " << report.best.count.get_str() << " sums";
            for (auto p : report.best.sums) {
                s << " " << p;
            }
            s << "\nslices " << report.slices << "\n";
        } else {
            const auto strings = extract_independent_set(h, cert, extract_n);
            s << "strings " << strings.size() << "\n";
            for (const auto& x : strings) {
                s << "x";
                for (Vertex v : x) {
                    s << " " << v;
                }
                s << "\n";
            }
        }
        emit(global, s.str());
    });

    // acyclic
    auto* acyclic = app.add_subcommand("acyclic", "Verify an acyclic set or search for a largest one");
    std::string acyclic_graph;
    std::string acyclic_set;
    acyclic->add_option("hypergraph", acyclic_graph)->required()->check(CLI::ExistingFile);
    acyclic->add_option("--set", acyclic_set, "Vertex-set file to verify")->check(CLI::ExistingFile);
    acyclic->callback([&] {
        const Hypergraph h = load_hypergraph(acyclic_graph);
        if (acyclic_set.empty()) {
            const auto outcome = max_acyclic_set(h, global.budget());
            emit(global, status_line("acyclic", outcome) + serialize_vertex_set(outcome.witness));
            return;
        }
        const auto set = parse_vertex_set(read_file(acyclic_set));
        const auto order = is_acyclic_set(h, set);
        std::ostringstream s;
        if (order) {
            s << "acyclic order";
            for (Vertex v : *order) {
                s << " " << v;
            }
            s << "\n";
        } else {
            s << "cyclic\n";
            exit_code = 1;
        }
        emit(global, s.str());
    });

    // acyclic-to-degen
    auto* to_degen = app.add_subcommand("acyclic-to-degen", "Degeneration certificate from an acyclic set");
    std::string to_degen_graph;
    std::string to_degen_set;
    to_degen->add_option("hypergraph", to_degen_graph)->required()->check(CLI::ExistingFile);
    to_degen->add_option("set", to_degen_set)->required()->check(CLI::ExistingFile);
    to_degen->callback([&] {
        const Hypergraph h = load_hypergraph(to_degen_graph);
        emit(global, serialize(acyclic_to_degeneration(h, parse_vertex_set(read_file(to_degen_set)))));
    });

    // prob-bound
    auto* prob = app.add_subcommand("prob-bound", "Probabilistic lower bound on corner-free sets");
    std::string prob_group = "2";
    int prob_n = 1;
    std::optional<int> prob_k;
    prob->add_option("--group", prob_group)->capture_default_str();
    prob->add_option("--n", prob_n)->required();
    prob->add_option("--k", prob_k, "Corner dimension (k-dimensional corners)");
    prob->callback([&] {
        const GroupSpec g = GroupSpec::parse(prob_group);
        if (prob_k && *prob_k != 2) {
            emit(global, render(kdim_prob_bound(g, prob_n, *prob_k), g, prob_n, *prob_k));
        } else {
            emit(global, render(prob_corner_bound(g, prob_n), g, prob_n));
        }
    });

    // random-cornerfree
    auto* random = app.add_subcommand("random-cornerfree", "Sample-and-prune corner-free set");
    std::string random_group = "2";
    int random_n = 1;
    int random_trials = 1;
    random->add_option("--group", random_group)->capture_default_str();
    random->add_option("--n", random_n)->required();
    random->add_option("--trials", random_trials)->capture_default_str();
    random->callback([&] {
        const auto set = randomized_cornerfree(GroupSpec::parse(random_group), random_n, global.seed, random_trials);
        emit(global, serialize(set));
        std::cerr << "size " << set.size() << "\n";
    });

    // nof
    auto* nof = app.add_subcommand("nof", "NOF communication bounds");
    std::string nof_group = "2";
    std::string nof_rate;
    std::optional<int> nof_k;
    std::int64_t nof_n = 0;
    nof->add_option("--group", nof_group)->capture_default_str();
    nof->add_option("--rate", nof_rate, "Capacity lower bound, e.g. 7 or 39^(1/3)");
    nof->add_option("--k", nof_k, "Corner dimension for the (k+1)-player bound");
    nof->add_option("--n", nof_n, "Input length for the (k+1)-player bound");
    nof->callback([&] {
        const GroupSpec g = GroupSpec::parse(nof_group);
        std::string text;
        if (!nof_rate.empty()) {
            text += render(nof_from_rate(g, RateSpec::parse(nof_rate)));
        }
        if (nof_k) {
            text += render(kplayer_nof_bound(g, nof_n, *nof_k), g, nof_n, *nof_k);
        }
        if (text.empty()) {
            throw InvalidArgument("nof needs --rate or --k with --n");
        }
        emit(global, text);
    });

    // tight
    auto* tight = app.add_subcommand("tight", "Tightness certificates");
    tight->require_subcommand(1);
    auto* tight_verify = tight->add_subcommand("verify", "Verify a tightness certificate");
    std::string tv_graph;
    std::string tv_cert;
    tight_verify->add_option("hypergraph", tv_graph)->required()->check(CLI::ExistingFile);
    tight_verify->add_option("certificate", tv_cert)->required()->check(CLI::ExistingFile);
    tight_verify->callback([&] {
        const bool ok = verify_tight(adjacency_support(load_hypergraph(tv_graph)), parse_tightness(read_file(tv_cert)));
        emit(global, ok ? "tight\n" : "not tight\n");
        exit_code = ok ? 0 : 1;
    });
    auto* tight_construct = tight->add_subcommand("construct", "Corner tightness maps");
    std::string tc_group = "2";
    tight_construct->add_option("--group", tc_group)->capture_default_str();
    tight_construct->callback([&] { emit(global, serialize(corner_tight_certificate(GroupSpec::parse(tc_group)))); });
    auto* tight_search = tight->add_subcommand("search", "Bounded search for a tightness certificate");
    std::string ts_graph;
    TightSearchOptions ts_options;
    tight_search->add_option("hypergraph", ts_graph)->required()->check(CLI::ExistingFile);
    tight_search->add_option("--bound", ts_options.value_bound, "Largest |u_i(a)|")->capture_default_str();
    tight_search->callback([&] {
        ts_options.max_nodes = global.budget_nodes;
        const auto cert = find_tight_certificate(adjacency_support(load_hypergraph(ts_graph)), ts_options);
        if (cert) {
            emit(global, serialize(*cert));
        } else {
            emit(global, "none within bound " + std::to_string(ts_options.value_bound) + "\n");
            exit_code = 1;
        }
    });

    // entropy
    auto* entropy = app.add_subcommand("entropy", "Max-min marginal entropy of the adjacency support");
    std::string entropy_graph;
    EntropyOptions entropy_options;
    entropy->add_option("hypergraph", entropy_graph)->required()->check(CLI::ExistingFile);
    entropy->add_option("--tolerance", entropy_options.tolerance)->capture_default_str();
    entropy->callback([&] {
        const Hypergraph h = load_hypergraph(entropy_graph);
        const auto report = im_barrier_report(h, std::nullopt, entropy_options);
        const SupportSet phi = adjacency_support(h);
        std::ostringstream s;
        s.precision(12);
        s << "value " << report.entropy.value << "\nexponent " << report.entropy.exponent << "\nresidual "
          << report.entropy.residual << "\niterations " << report.entropy.iterations << "\n";
        for (std::size_t e = 0; e < phi.size(); ++e) {
            if (report.entropy.distribution[e] > 0) {
                s << "P";
                for (Vertex v : phi.elements()[e]) {
                    s << " " << v;
                }
                s << " " << report.entropy.distribution[e] << "\n";
            }
        }
        s << render(report);
        emit(global, s.str());
    });

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "Re-run and check the registered results");
    std::vector<std::string> repro_targets;
    bool repro_json = false;
    std::string repro_data = CAPDEG_DATA_DIR;
    repro->add_option("targets", repro_targets, "Target names or 'all'")->required();
    repro->add_flag("--json", repro_json, "One JSON record per check");
    repro->add_option("--data-dir", repro_data, "Directory with the shipped certificates")->capture_default_str();
    repro->callback([&] {
        ReproContext context{global.budget(), repro_data};
        const auto checks = reproduce(repro_targets, context);
        emit(global, repro_json ? render_checks_json(checks) : render_checks(checks));
        const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
        exit_code = ok ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const capdeg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
