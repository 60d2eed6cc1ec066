#include "car/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "car/entropy.hpp"
#include "car/format.hpp"
#include "car/state_io.hpp"
#include "car/states.hpp"
#include "car/subalgebra.hpp"
#include "car/verify.hpp"

namespace car {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// key=value tokens plus bare positionals (file paths, suite names).
struct Args {
    std::map<std::string, std::string> kv;
    std::vector<std::string> bare;

    static Args parse(const std::vector<std::string>& tokens) {
        Args out;
        for (const auto& token : tokens) {
            const std::size_t eq = token.find('=');
            if (eq == std::string::npos) {
                out.bare.push_back(token);
            } else {
                out.kv[token.substr(0, eq)] = token.substr(eq + 1);
            }
        }
        return out;
    }

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string require(const std::string& key, const char* context) const {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw UsageError(std::string(context) + ": missing " + key + "=<value>");
        }
        return it->second;
    }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
};

int parse_int(const std::string& text, const char* what) {
    try {
        return std::stoi(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": bad integer '" + text + "'");
    }
}

double parse_double(const std::string& text, const char* what) {
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": bad number '" + text + "'");
    }
}

int checked_ambient(int n) {
    if (n < 1 || n > ambient_cap()) {
        throw UsageError("n=" + std::to_string(n) + " outside the supported range [1, " +
                         std::to_string(ambient_cap()) + "] (cap via CAR_ENTROPY_MAX_N)");
    }
    return n;
}

struct Tolerances {
    double tol_spec = 1e-9;
    double tol_res = 1e-10;
    double floor = 1e-10;
};

StateValidationOptions validation_options(const Tolerances& tols) {
    StateValidationOptions opts;
    opts.faithfulness_floor = tols.floor;
    return opts;
}

int cmd_gen(const Args& args, const Tolerances& tols, std::ostream& out) {
    if (args.bare.empty()) {
        throw UsageError("gen: expected a family (tracial|random|prop4|prop5|product)");
    }
    const std::string family = args.bare[0];
    const std::string out_path = args.get("out", "state.txt");

    auto region_pair = [&]() {
        const int n = checked_ambient(parse_int(args.require("n", "gen"), "gen n"));
        ModeSet i_set = ModeSet::parse(n, args.require("I", "gen"));
        ModeSet j_set = ModeSet::parse(n, args.require("J", "gen"));
        return RegionPair(std::move(i_set), std::move(j_set));
    };
    auto spec_path = [&]() -> const std::string& {
        if (args.bare.size() < 2) throw UsageError("gen " + family + ": expected a spec file path");
        return args.bare[1];
    };

    try {
        std::optional<StateDensity> state;
        std::optional<RegionPair> regions;
        if (family == "tracial") {
            regions = region_pair();
            state = StateDensity::tracial(regions->union_set());
        } else if (family == "random") {
            regions = region_pair();
            const auto seed = static_cast<std::uint64_t>(std::stoull(args.require("seed", "gen random")));
            const ModeSet region = regions->union_set();
            const double fallback = std::min(1e-4, 0.25 * std::pow(2.0, -region.size()));
            const double floor = args.has("floor") ? parse_double(args.kv.at("floor"), "gen floor") : fallback;
            state = random_faithful_state(region, seed, floor);
        } else if (family == "prop4") {
            MixtureSpec spec = read_prop4_spec_file(spec_path());
            regions = spec.regions;
            state = build_prop4_state(spec);
        } else if (family == "product") {
            MixtureSpec spec = read_prop4_spec_file(spec_path());
            if (spec.weights.size() != 1) {
                throw SpecError("gen product: the spec must contain exactly one term");
            }
            regions = spec.regions;
            state = product_extension({spec.triples[0].w1, spec.triples[0].w2, spec.triples[0].w3});
        } else if (family == "prop5") {
            Prop5Spec spec = read_prop5_spec_file(spec_path());
            Prop5Result built = build_prop5_state(spec);
            out << "prop5: " << built.diagnostics.str() << "\n";
            if (!built.state) {
                throw SpecError("gen prop5: invalid spec (" +
                                (built.diagnostics.constraint_error.empty() ? built.diagnostics.str()
                                                                            : built.diagnostics.constraint_error) +
                                ")");
            }
            regions = spec.regions;
            state = std::move(built.state);
        } else {
            throw UsageError("gen: unknown family '" + family + "'");
        }

        write_state_file(out_path, *state);
        out << "file=" << out_path << "\n";
        out << "report: " << validate_state(state->op(), state->region(), validation_options(tols)).str()
            << "\n";
        EntropyOptions eopts;
        eopts.faithfulness_floor = tols.floor;
        out << "gap=" << format_sci(ssa_report(*state, *regions, eopts).gap) << "\n";
        return 0;
    } catch (const UsageError&) {
        throw;
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("gen ") + family + ": " + e.what());
    }
}

int cmd_ssa(const Args& args, const Tolerances& tols, double regularize_eps, bool with_witness,
            std::ostream& out) {
    if (args.bare.empty()) throw UsageError("ssa: expected a state file path");
    std::optional<StateDensity> state;
    try {
        state = read_state_file(args.bare[0], validation_options(tols));
    } catch (const std::exception& e) {
        throw SpecError(std::string("ssa: ") + e.what());
    }
    const int n = state->ambient();
    ModeSet i_set = ModeSet::parse(n, args.require("I", "ssa"));
    ModeSet j_set = ModeSet::parse(n, args.require("J", "ssa"));
    RegionPair regions(std::move(i_set), std::move(j_set));
    if (!(regions.union_set() == state->region())) {
        throw SpecError("ssa: state region {" + state->region().str() + "} is not I union J {" +
                        regions.union_set().str() + "}");
    }
    if (regularize_eps > 0.0) {
        state = regularized(*state, regularize_eps);
        out << "regularized=" << format_sci(regularize_eps) << "\n";
    }

    EntropyOptions eopts;
    eopts.faithfulness_floor = tols.floor;
    SsaReport report = ssa_report(*state, regions, eopts);
    out << report.str();
    if (with_witness) {
        WitnessResult witness = odd_cross_witness(*state, regions, tols.tol_res);
        out << "witness=" << (witness.found ? "true" : "false") << "\n";
        for (const auto& term : witness.offenders) out << "witness_term=" << term << "\n";
    }
    return report.gap <= tols.tol_spec ? 0 : 3;
}

int cmd_expect(const Args& args, std::ostream& out) {
    if (args.bare.empty()) throw UsageError("expect: expected a state file path");
    const std::string out_path = args.get("out", "expect.txt");
    try {
        StateFilePayload payload = read_state_payload(args.bare[0]);
        ModeSet target = ModeSet::parse(payload.ambient, args.require("N", "expect"));
        if (!target.subset_of(payload.region)) {
            throw SpecError("expect: N {" + target.str() + "} is not contained in the state region {" +
                            payload.region.str() + "}");
        }
        if (target == payload.region) {
            // Identity restriction: pass the payload through unchanged.
            write_state_payload(out_path, payload);
        } else {
            // The projection applies to any stored operator, state or not.
            CarOperator lifted = embed(payload.compressed, payload.region, payload.ambient);
            CarOperator projected = project_onto(lifted, target);
            write_state_payload(out_path, {payload.ambient, target, compress(projected, target)});
        }
        out << "file=" << out_path << "\n";
        return 0;
    } catch (const UsageError&) {
        throw;
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("expect: ") + e.what());
    }
}

int cmd_verify(const Args& args, std::ostream& out) {
    if (args.bare.empty()) {
        throw UsageError("verify: expected a suite (core|expect|entropy|families|all)");
    }
    const std::string suite = args.bare[0];
    VerifyOptions opts;
    opts.max_n = args.has("n") ? checked_ambient(parse_int(args.kv.at("n"), "verify n")) : 5;
    opts.samples = args.has("samples") ? parse_int(args.kv.at("samples"), "verify samples") : 100;
    opts.seed = args.has("seed") ? static_cast<std::uint64_t>(std::stoull(args.kv.at("seed"))) : 1;

    std::vector<PropertyResult> results;
    if (suite == "core") results = verify_core(opts);
    else if (suite == "expect") results = verify_expect(opts);
    else if (suite == "entropy") results = verify_entropy(opts);
    else if (suite == "families") results = verify_families(opts);
    else if (suite == "all") results = verify_all(opts);
    else throw UsageError("verify: unknown suite '" + suite + "'");

    print_results(out, results);
    const bool ok = all_pass(results);
    out << (ok ? "verify: all properties hold\n" : "verify: FAILURES above\n");
    return ok ? 0 : 3;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite CAR algebras: conditional expectations, entropies, SSA saturation"};
    app.name("car-entropy");
    app.require_subcommand(1);

    Tolerances tols;
    double regularize_eps = 0.0;
    bool with_witness = false;

    auto add_tolerance_flags = [&](CLI::App* cmd) {
        cmd->add_option("--tol-spec", tols.tol_spec, "SSA gap tolerance (default 1e-9)");
        cmd->add_option("--tol-res", tols.tol_res,
                        "residual/witness coefficient tolerance (default 1e-10)");
        cmd->add_option("--floor", tols.floor, "faithfulness floor (default 1e-10)");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a state file");
    gen->allow_extras();
    add_tolerance_flags(gen);

    CLI::App* ssa = app.add_subcommand("ssa", "SSA report for a state file");
    ssa->allow_extras();
    add_tolerance_flags(ssa);
    ssa->add_option("--regularize", regularize_eps, "mix with eps of the tracial state first");
    ssa->add_flag("--witness", with_witness, "report the odd-cross separability witness");

    CLI::App* expect = app.add_subcommand("expect", "conditional expectation of a state file");
    expect->allow_extras();
    add_tolerance_flags(expect);

    CLI::App* verify = app.add_subcommand("verify", "run a property suite");
    verify->allow_extras();

    std::vector<const char*> argv;
    argv.push_back("car-entropy");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(Args::parse(gen->remaining()), tols, out);
        if (ssa->parsed()) return cmd_ssa(Args::parse(ssa->remaining()), tols, regularize_eps, with_witness, out);
        if (expect->parsed()) return cmd_expect(Args::parse(expect->remaining()), out);
        if (verify->parsed()) return cmd_verify(Args::parse(verify->remaining()), out);
        err << "error: no subcommand\n";
        return 1;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const SpecError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace car
