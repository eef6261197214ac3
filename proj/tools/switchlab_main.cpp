// switchlab: qubit channel simulation and classification around the quantum
// switch. Every file written carries a manifest line so a run can be
// reproduced bit for bit from its own output.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "switchlab/channel_report.hpp"
#include "switchlab/selftest.hpp"
#include "switchlab/serialize.hpp"

namespace {

using namespace switchlab;

constexpr std::uint64_t kDefaultSeed = 0x5eedba5eull;

std::uint64_t seed_from_env() {
    if (const char* env = std::getenv("SWITCHLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error("SWITCHLAB_SEED is not an unsigned integer");
        }
    }
    return kDefaultSeed;
}

struct GlobalOpts {
    std::uint64_t seed = kDefaultSeed;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    std::string out;  // empty or "-" means stdout
    std::string format = "csv";
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
}

std::vector<double> parse_csv_doubles(const std::string& text, std::size_t expected) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("expected a comma-separated list of numbers: " + text);
        }
    }
    if (vals.size() != expected)
        throw CLI::ValidationError("expected " + std::to_string(expected) + " numbers, got " +
                                   std::to_string(vals.size()));
    return vals;
}

struct ChannelSpec {
    std::string pauli;    // "l1,l2,l3"
    std::string tmatrix;  // 16 row-major entries
    std::string json_path;
    std::string preset;   // perfect | obs1 | phi:<l3> | depolarizing:<t>

    void add_options(CLI::App* cmd) {
        auto* g = cmd->add_option_group("channel", "channel specification (pick one)");
        g->add_option("--pauli", pauli,
                      "Pauli channel as lambda triple l1,l2,l3 (T = diag(1,l1,l2,l3))");
        g->add_option("--tmatrix", tmatrix, "affine form as 16 row-major entries");
        g->add_option("--channel-json", json_path,
                      "JSON file {\"kind\":\"pauli\"|\"tmatrix\"|\"kraus\", ...}");
        g->add_option("--preset", preset,
                      "named channel: perfect ((x+y)/2 flips), obs1 (half dephasing), "
                      "phi:<l3> (xy-mixing family), depolarizing:<t>");
        g->require_option(1);
    }

    Channel build() const {
        if (!pauli.empty()) {
            auto l = parse_csv_doubles(pauli, 3);
            return Channel::from_lambdas(Vec3(l[0], l[1], l[2]));
        }
        if (!tmatrix.empty()) {
            auto v = parse_csv_doubles(tmatrix, 16);
            RMat4 m;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m(i, j) = v[4 * i + j];
            return Channel::from_tmatrix(TMatrix(m));
        }
        if (!json_path.empty()) {
            std::ifstream f(json_path);
            if (!f) throw Error("cannot read channel file: " + json_path);
            return channel_from_json(json::parse(f));
        }
        if (preset == "perfect") return Channel::from_lambdas(Vec3(0, 0, -1));
        if (preset == "obs1") return Channel::from_lambdas(Vec3(0, 0, 1));
        if (preset.rfind("phi:", 0) == 0)
            return Channel::pauli(phi_family(std::stod(preset.substr(4))));
        if (preset.rfind("depolarizing:", 0) == 0)
            return Channel::depolarizing(std::stod(preset.substr(13)));
        throw CLI::ValidationError("unknown preset: " + preset);
    }
};

RunManifest make_manifest(const std::string& command, const GlobalOpts& g, json config,
                          std::chrono::steady_clock::time_point start) {
    RunManifest m;
    m.command = command;
    m.config = std::move(config);
    m.seed = g.seed;
    m.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return m;
}

json tmatrix_json(const RMat4& m) {
    std::vector<double> flat;
    flat.reserve(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) flat.push_back(m(i, j));
    return flat;
}

// ---------------------------------------------------------------------- classify

int cmd_classify(const GlobalOpts& g, const ChannelSpec& spec, const std::string& predicate) {
    auto start = std::chrono::steady_clock::now();
    Channel ch = spec.build();
    UselessPredicate pred = (predicate == "coherence") ? coherence_breaking_predicate()
                                                       : entanglement_breaking_predicate();
    ChannelClassification cls = classify_channel(ch);
    SwitchUsefulness use = switch_usefulness(ch, pred);
    json out{{"classification", to_json(cls)},
             {"usefulness", to_json(use)},
             {"useless_predicate",
              predicate == "coherence" ? "coherence_breaking" : "entanglement_breaking"},
             {"channel", to_json(ch)}};
    out["manifest"] =
        make_manifest("classify", g, json{{"predicate", predicate}}, start).to_json();
    write_output(g.out, out.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------------ switch

int cmd_switch(const GlobalOpts& g, const ChannelSpec& spec, const std::string& omega_spec,
               bool no_correction) {
    auto start = std::chrono::steady_clock::now();
    Channel ch = spec.build();
    DensityMatrix omega = DensityMatrix::plus_state();
    if (omega_spec == "zero")
        omega = DensityMatrix::from_bloch(Vec3(0, 0, 1));
    else if (omega_spec == "one")
        omega = DensityMatrix::from_bloch(Vec3(0, 0, -1));
    else if (omega_spec != "plus")
        omega = DensityMatrix::from_bloch(
            [&] {
                auto v = parse_csv_doubles(omega_spec, 3);
                return Vec3(v[0], v[1], v[2]);
            }());

    json out;
    BranchMaps b = switch_branches(ch.map());
    out["branch_plus"] = {{"trace_on_mixed", std::real(b.plus.apply(0.5 * Mat2::Identity()).trace())},
                          {"eb", is_entanglement_breaking(b.plus)}};
    out["branch_minus"] = {{"zero", b.minus.is_zero()},
                           {"trace_on_mixed",
                            std::real(b.minus.apply(0.5 * Mat2::Identity()).trace())},
                           {"eb", is_entanglement_breaking(b.minus)}};
    if (ch.pauli_form()) {
        PauliBranches pb = pauli_branches(*ch.pauli_form());
        out["q"] = pb.q;
        out["branch_plus"]["lambdas"] = {pb.c_plus.lambdas()[0], pb.c_plus.lambdas()[1],
                                         pb.c_plus.lambdas()[2]};
        if (pb.c_minus)
            out["branch_minus"]["lambdas"] = {pb.c_minus->lambdas()[0],
                                              pb.c_minus->lambdas()[1],
                                              pb.c_minus->lambdas()[2]};
        out["degenerate"] = pb.degenerate;
    }
    ControlledOp op =
        no_correction ? ControlledOp::trace_out() : ControlledOp::standard_correction();
    Channel eff = effective_channel(op, b.plus, b.minus, omega);
    out["effective_tmatrix"] = tmatrix_json(eff.tmatrix().m());
    out["effective_usefulness"] = to_json(switch_usefulness(eff));
    out["manifest"] = make_manifest("switch", g,
                                    json{{"omega", omega_spec},
                                         {"correction", no_correction ? "none" : "standard"}},
                                    start)
                          .to_json();
    write_output(g.out, out.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------- qrac/steer sweeps

int cmd_sweep(const GlobalOpts& g, const std::string& which, double lo, double hi,
              double step) {
    auto start = std::chrono::steady_clock::now();
    if (step <= 0 || hi < lo) throw CLI::ValidationError("need step > 0 and max >= min");
    QracStrategy strategy = QracStrategy::equatorial();
    DensityMatrix bell = DensityMatrix::bell_phi_plus();
    std::vector<std::string> rows;
    json jrows = json::array();
    int n = static_cast<int>(std::floor((hi - lo) / step + 0.5));
    for (int i = 0; i <= n; ++i) {
        double l3 = lo + i * step;
        Channel eff = phi_switched_effective(l3);
        double value = (which == "qrac") ? qrac_success(strategy, eff)
                                         : steering_F(steered_state(eff, bell));
        rows.push_back(format_double(l3) + "," + format_double(value));
        if (g.format == "json") jrows.push_back({{"lambda3", l3}, {"value", value}});
    }
    double threshold = (which == "qrac")
                           ? bisect([&](double l) { return qrac_success(strategy,
                                                        phi_switched_effective(l)); },
                                    0.0, 1.0, qrac_classical_bound(2), 1e-12)
                           : bisect([&](double l) { return steering_F(steered_state(
                                                        phi_switched_effective(l), bell)); },
                                    0.5, 1.0, 1.0, 1e-12);
    json config{{"min", lo}, {"max", hi}, {"step", step}, {"threshold_root", threshold}};
    RunManifest manifest = make_manifest(which, g, config, start);
    if (g.format == "json") {
        json out{{"rows", jrows}, {"threshold_root", threshold},
                 {"manifest", manifest.to_json()}};
        write_output(g.out, out.dump(2) + "\n");
    } else {
        std::string header = (which == "qrac") ? "lambda3,success" : "lambda3,F";
        write_output(g.out, csv_document(manifest, header, rows));
    }
    return 0;
}

// --------------------------------------------------------------------- coherence

int cmd_coherence(const GlobalOpts& g, double lambda, double t, double theta, double phi1,
                  double phi2) {
    auto start = std::chrono::steady_clock::now();
    TMatrix eff = coherence_effective_channel(lambda, t, theta, phi1, phi2);
    TMatrix plain = coherence_plain_trace_out(lambda, t);
    CoherenceEffectiveForm closed =
        CoherenceEffectiveForm::closed_form(lambda, t, theta, phi1, phi2);
    json out{{"effective_tmatrix", tmatrix_json(eff.m())},
             {"closed_form_tmatrix", tmatrix_json(closed.assemble())},
             {"closed_form_max_deviation", max_abs_diff(eff.m(), closed.assemble())},
             {"plain_trace_out_tmatrix", tmatrix_json(plain.m())},
             {"effective_coherence_breaking", is_coherence_breaking(eff)},
             {"plain_trace_out_coherence_breaking", is_coherence_breaking(plain)}};
    out["manifest"] = make_manifest("coherence", g,
                                    json{{"lambda", lambda},
                                         {"t", t},
                                         {"theta", theta},
                                         {"phi1", phi1},
                                         {"phi2", phi2}},
                                    start)
                          .to_json();
    write_output(g.out, out.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------------- noisy

int cmd_noisy(const GlobalOpts& g, const ChannelSpec& spec, int steps) {
    auto start = std::chrono::steady_clock::now();
    if (steps < 2) throw CLI::ValidationError("need at least 2 steps");
    Channel ch = spec.build();
    double lo = -1.0 / 3.0, hi = 1.0;
    std::vector<std::string> rows;
    for (int i = 0; i < steps; ++i) {
        double t = lo + (hi - lo) * i / (steps - 1);
        Channel eff = noisy_control_effective(ch.map(), t, ControlledOp::standard_correction(),
                                              DensityMatrix::plus_state());
        const RMat4& m = eff.tmatrix().m();
        rows.push_back(format_double(t) + "," + format_double(m(1, 1)) + "," +
                       format_double(m(2, 2)) + "," + format_double(m(3, 3)));
    }
    RunManifest manifest = make_manifest("noisy", g, json{{"steps", steps}}, start);
    write_output(g.out, csv_document(manifest, "noise_t,txx,tyy,tzz", rows));
    return 0;
}

// -------------------------------------------------------------------------- scan

int cmd_scan_octahedron(const GlobalOpts& g, const std::string& branch_name,
                        std::uint64_t samples) {
    auto start = std::chrono::steady_clock::now();
    Branch branch = (branch_name == "minus") ? Branch::minus : Branch::plus;
    auto data = octahedron_mapping_dataset(g.seed, samples, branch);
    std::vector<std::string> rows;
    rows.reserve(data.size());
    for (const auto& r : data) {
        std::string row;
        for (int k = 0; k < 3; ++k) row += format_double(r.lambda_in[k]) + ",";
        for (int k = 0; k < 3; ++k) row += format_double(r.lambda_out[k]) + ",";
        row += std::string(r.zero_branch ? "1" : "0") + "," + (r.useful ? "1" : "0");
        rows.push_back(std::move(row));
    }
    RunManifest manifest = make_manifest(
        "scan octahedron", g, json{{"branch", to_string(branch)}, {"samples", samples}}, start);
    write_output(g.out,
                 csv_document(manifest,
                              "lambda1_in,lambda2_in,lambda3_in,lambda1_out,lambda2_out,"
                              "lambda3_out,zero_branch,useful",
                              rows));
    return 0;
}

int cmd_scan_census(const GlobalOpts& g, const std::string& family_name, std::uint64_t pairs,
                    std::uint64_t record_limit, const std::string& records_out) {
    auto start = std::chrono::steady_clock::now();
    Family family = (family_name == "nonunital") ? Family::nonunital : Family::pauli;
    CensusResult census = concat_census(g.seed, pairs, family, g.threads, record_limit);
    json out{{"family", to_string(family)},
             {"pairs", pairs},
             {"venn", to_json(census.venn)}};
    if (census.dist_plus) out["distance_plus"] = to_json(*census.dist_plus);
    if (census.dist_minus) out["distance_minus"] = to_json(*census.dist_minus);
    RunManifest manifest = make_manifest(
        "scan census", g,
        json{{"family", to_string(family)}, {"pairs", pairs}, {"records", record_limit}},
        start);
    out["manifest"] = manifest.to_json();
    write_output(g.out, out.dump(2) + "\n");

    if (!records_out.empty()) {
        std::vector<std::string> rows;
        for (const auto& rec : census.records) {
            std::string row = std::string(to_string(family)) + "," +
                              std::to_string(g.seed) + ",";
            for (int k = 0; k < 3; ++k) row += format_double(rec.params_a[k]) + ",";
            for (int k = 0; k < 3; ++k) row += format_double(rec.params_b[k]) + ",";
            row += std::string(rec.gated_plus ? "1" : "0") + "," +
                   (rec.gated_minus ? "1" : "0") + "," +
                   (rec.composed_useful_plus ? "1" : "0") + "," +
                   (rec.composed_useful_minus ? "1" : "0") + "," +
                   format_double(rec.distance);
            rows.push_back(std::move(row));
        }
        write_output(records_out,
                     csv_document(manifest,
                                  "family,seed,a1,a2,a3,b1,b2,b3,gated_plus,gated_minus,"
                                  "useful_plus,useful_minus,distance",
                                  rows));
    }
    return 0;
}

int cmd_scan_conjecture(const GlobalOpts& g, std::uint64_t pairs) {
    auto start = std::chrono::steady_clock::now();
    ConjectureResult res = conjecture_search(g.seed, pairs, g.threads);
    json out{{"pairs_checked", res.pairs_checked},
             {"counterexample_found", res.counterexample.has_value()}};
    if (res.counterexample) {
        const auto& c = *res.counterexample;
        out["counterexample"] = {
            {"lambda_a", {c.params_a[0], c.params_a[1], c.params_a[2]}},
            {"lambda_b", {c.params_b[0], c.params_b[1], c.params_b[2]}},
            {"composed_useful_plus", c.composed_useful_plus},
            {"composed_useful_minus", c.composed_useful_minus}};
    }
    out["manifest"] =
        make_manifest("scan conjecture", g, json{{"pairs", pairs}}, start).to_json();
    write_output(g.out, out.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------- selftest

int cmd_selftest(const GlobalOpts& g) {
    SelfTestOptions opt;
    opt.seed = g.seed;
    opt.threads = g.threads;
    auto results = run_acceptance_suite(opt);
    int failures = print_acceptance_report(results, std::cout);
    return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit channel toolkit: quantum-switch branches, usefulness "
                 "classification, information tasks, and channel-space scans"};
    app.require_subcommand(1);

    GlobalOpts g;
    try {
        g.seed = seed_from_env();
    } catch (const switchlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    if (g.threads < 1) g.threads = 1;
    app.add_option("--seed", g.seed, "RNG seed (defaults to SWITCHLAB_SEED or a fixed value)")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for scans")->capture_default_str();
    app.add_option("--out", g.out, "output path ('-' or empty: stdout)");
    app.add_option("--format", g.format, "output format for sweeps")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // classify
    auto* classify = app.add_subcommand(
        "classify", "entanglement/incompatibility/coherence classification and switch "
                    "usefulness of a channel");
    ChannelSpec classify_spec;
    classify_spec.add_options(classify);
    std::string predicate = "eb";
    classify->add_option("--pred", predicate, "useless predicate: eb or coherence")
        ->check(CLI::IsMember({"eb", "coherence"}));

    // switch
    auto* sw = app.add_subcommand("switch",
                                  "branch report and effective channel after the switch");
    ChannelSpec switch_spec;
    switch_spec.add_options(sw);
    std::string omega_spec = "plus";
    bool no_correction = false;
    sw->add_option("--omega", omega_spec, "control state: plus, zero, one, or x,y,z Bloch");
    sw->add_flag("--no-correction", no_correction,
                 "trace out the control instead of applying the standard correction");

    // qrac / steer sweeps
    double lo = 0.0, hi = 1.0, step = 1e-3;
    auto* qrac = app.add_subcommand(
        "qrac", "sweep l3 in the switched xy-family: (2,2) random-access-code success. "
                "Classical bound 3/4; values above it witness incompatibility surviving "
                "the channel");
    qrac->add_option("--min", lo, "l3 lower bound, in [0,1]")->capture_default_str();
    qrac->add_option("--max", hi, "l3 upper bound, in [0,1]")->capture_default_str();
    qrac->add_option("--step", step, "l3 grid step")->capture_default_str();
    auto* steer = app.add_subcommand(
        "steer", "sweep l3 in the switched xy-family: two-setting steering functional on "
                 "the shared state; F > 1 witnesses steerability");
    steer->add_option("--min", lo, "l3 lower bound, in [0,1]")->capture_default_str();
    steer->add_option("--max", hi, "l3 upper bound, in [0,1]")->capture_default_str();
    steer->add_option("--step", step, "l3 grid step")->capture_default_str();

    // coherence
    auto* coh = app.add_subcommand(
        "coherence", "switched coherence-breaking channel: operator construction vs the "
                     "closed-form affine entries");
    double c_lambda = 0.5, c_t = 0.1, c_theta = 0.0, c_phi1 = 1.5707963267948966,
           c_phi2 = 0.0;
    coh->add_option("--lambda", c_lambda, "z-contraction, |lambda| + |t| <= 1")
        ->capture_default_str();
    coh->add_option("--t", c_t, "z-translation, |lambda| + |t| <= 1")->capture_default_str();
    coh->add_option("--theta", c_theta, "controlled-unitary angle (radians)")
        ->capture_default_str();
    coh->add_option("--phi1", c_phi1, "controlled-unitary phase 1 (radians)")
        ->capture_default_str();
    coh->add_option("--phi2", c_phi2, "controlled-unitary phase 2 (radians)")
        ->capture_default_str();

    // noisy
    auto* noisy = app.add_subcommand(
        "noisy", "sweep depolarizing noise on the control register, t in [-1/3, 1]");
    ChannelSpec noisy_spec;
    noisy_spec.add_options(noisy);
    int noisy_steps = 41;
    noisy->add_option("--steps", noisy_steps, "number of noise values")->capture_default_str();

    // scan
    auto* scan = app.add_subcommand("scan", "Monte-Carlo channel-space exploration");
    scan->require_subcommand(1);
    auto* octa = scan->add_subcommand(
        "octahedron", "sample EB Pauli channels and record their branch images");
    std::string branch_name = "plus";
    std::uint64_t samples = 100000;
    octa->add_option("--branch", branch_name, "plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    octa->add_option("--samples", samples, "number of sampled channels")
        ->capture_default_str();
    auto* census = scan->add_subcommand(
        "census", "concatenate useless pairs and tally usefulness after the switch");
    std::string family_name = "pauli";
    std::uint64_t pairs = 1000000, record_limit = 0;
    std::string records_out;
    census->add_option("--family", family_name, "pauli or nonunital")
        ->check(CLI::IsMember({"pauli", "nonunital"}));
    census->add_option("--pairs", pairs, "number of sampled pairs")->capture_default_str();
    census->add_option("--records", record_limit, "keep up to this many useful-pair records");
    census->add_option("--records-out", records_out, "CSV path for the kept records");
    auto* conjecture = scan->add_subcommand(
        "conjecture", "search for a completely-useless pair whose concatenation becomes "
                      "useful");
    std::uint64_t cj_pairs = 1000000;
    conjecture->add_option("--pairs", cj_pairs, "number of sampled pairs")
        ->capture_default_str();

    // selftest
    app.add_subcommand("selftest", "run the acceptance suite (exit 4 on failure)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("classify"))
            return cmd_classify(g, classify_spec, predicate);
        if (app.got_subcommand("switch")) return cmd_switch(g, switch_spec, omega_spec,
                                                            no_correction);
        if (app.got_subcommand("qrac")) return cmd_sweep(g, "qrac", lo, hi, step);
        if (app.got_subcommand("steer")) return cmd_sweep(g, "steer", lo, hi, step);
        if (app.got_subcommand("coherence"))
            return cmd_coherence(g, c_lambda, c_t, c_theta, c_phi1, c_phi2);
        if (app.got_subcommand("noisy")) return cmd_noisy(g, noisy_spec, noisy_steps);
        if (app.got_subcommand("scan")) {
            if (octa->parsed()) return cmd_scan_octahedron(g, branch_name, samples);
            if (census->parsed())
                return cmd_scan_census(g, family_name, pairs, record_limit, records_out);
            if (conjecture->parsed()) return cmd_scan_conjecture(g, cj_pairs);
        }
        if (app.got_subcommand("selftest")) return cmd_selftest(g);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const switchlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
