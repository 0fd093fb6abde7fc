#include "satlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "satlab/dot.hpp"
#include "satlab/io.hpp"

namespace satlab::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;
constexpr int kInternal = 4;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content << (content.empty() || content.back() != '\n' ? "\n" : "");
    else
        io::atomic_write(out_path, content);
}

io::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read " + path);
    io::json j;
    f >> j;
    return j;
}

uint64_t default_seed(uint64_t flag_seed, bool seed_given) {
    if (seed_given) return flag_seed;
    if (const char* env = std::getenv("SATLAB_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

TransferSystem ts_from_flag(const Context& ctx, const std::string& flag) {
    if (flag == "maximal") return maximal_system(ctx.lat());
    if (flag == "identity") return identity_system(ctx.lat());
    return io::ts_from_json(ctx, load_json(flag));
}

struct Common {
    std::string group, out, format = "json", ts_flag;
    uint64_t seed = 0;
    bool seed_given = false;
    long long budget = 10000;
    int orbit_budget = 22;
    int jobs = 1;
};

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"satlab: transfer systems on finite Abelian groups and their "
                 "realization by linear isometries operads"};
    app.require_subcommand(1);
    Common c;

    auto add_group = [&](CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--group", c.group, "group spec, e.g. C4xC2");
        if (required) opt->required();
    };
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", c.out, "output file (written atomically)");
        cmd->add_option("--budget", c.budget, "element budget for lattice construction");
        cmd->add_option("--jobs", c.jobs, "worker threads for brute-force search");
        cmd->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "dot"}));
        cmd->add_option("--orbit-budget", c.orbit_budget,
                        "max conjugation orbits for universe sweeps");
    };

    auto* lattice = app.add_subcommand("lattice", "dump the subgroup lattice");
    add_group(lattice);
    add_common(lattice);

    auto* enum_ts = app.add_subcommand("enumerate-ts", "enumerate all transfer systems");
    add_group(enum_ts);
    add_common(enum_ts);
    int max_subgroups = 12;
    enum_ts->add_option("--max-subgroups", max_subgroups, "enumeration budget");

    auto* count_sat = app.add_subcommand("count-saturated", "count saturated transfer systems");
    add_group(count_sat);
    add_common(count_sat);

    auto* realize_cmd = app.add_subcommand("realize", "realize a saturated transfer system");
    add_group(realize_cmd);
    add_common(realize_cmd);
    realize_cmd->add_option("--ts", c.ts_flag, "maximal | identity | edges.json")->required();
    std::string tight_flag = "auto";
    realize_cmd->add_option("--tight-pair", tight_flag, "auto | bundle.json");
    realize_cmd->add_option("--seed", c.seed, "seed for randomized constructions")
        ->each([&](const std::string&) { c.seed_given = true; });
    int retries = 64;
    realize_cmd->add_option("--retries", retries, "rank-two retries per stage");

    auto* brute = app.add_subcommand("brute-check", "exhaustive realizability search");
    add_group(brute);
    add_common(brute);
    brute->add_option("--ts", c.ts_flag, "maximal | identity | edges.json")->required();

    auto* tight = app.add_subcommand("tight-pair", "construct tight pairs");
    tight->require_subcommand(1);
    auto* tp_cyclic = tight->add_subcommand("cyclic", "chain construction on C_{p^n}");
    long long tp_p = 5;
    int tp_n = 1;
    tp_cyclic->add_option("--p", tp_p, "prime >= 5")->required();
    tp_cyclic->add_option("--n", tp_n, "exponent >= 1")->required();
    add_common(tp_cyclic);
    auto* tp_rank2 = tight->add_subcommand("rank2", "randomized rank-two pipeline");
    add_group(tp_rank2);
    add_common(tp_rank2);
    tp_rank2->add_option("--seed", c.seed, "sampler seed")
        ->each([&](const std::string&) { c.seed_given = true; });
    int tp_retries = 64;
    tp_rank2->add_option("--retries", tp_retries, "retries per stage");
    auto* tp_tensor = tight->add_subcommand("tensor", "tensor of tight-pair bundles");
    std::vector<std::string> tensor_inputs;
    tp_tensor->add_option("--inputs", tensor_inputs, "bundle files")->required()->expected(2, 8);
    add_common(tp_tensor);

    auto* neg = app.add_subcommand("verify-negative", "rank-3 unrealizable system check");
    long long neg_p = 2;
    neg->add_option("--p", neg_p, "prime (2 or 3)")->required();
    add_common(neg);

    auto* census_cmd = app.add_subcommand("census", "counting census for one group");
    add_group(census_cmd);
    add_common(census_cmd);
    int census_max_subgroups = 20;
    census_cmd->add_option("--max-subgroups", census_max_subgroups,
                           "transfer-system enumeration budget");

    auto* dot = app.add_subcommand("export-dot", "Hasse diagram in DOT form");
    add_group(dot);
    add_common(dot);
    dot->add_option("--ts", c.ts_flag, "maximal | identity | edges.json");
    std::string universe_path;
    dot->add_option("--universe", universe_path, "universe charset json");

    auto* stats = app.add_subcommand("stats", "quick facts about a group");
    add_group(stats);
    add_common(stats);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help() << std::endl;
            return kOk;
        }
        std::cerr << "error: " << e.what() << std::endl;
        return kInputError;
    }

    try {
        if (*lattice) {
            Context ctx(parse_group(c.group), c.budget);
            emit(c.out, io::lattice_json(ctx).dump(2));
            return kOk;
        }
        if (*enum_ts) {
            Context ctx(parse_group(c.group), c.budget);
            io::json systems = io::json::array();
            enumerate_transfer_systems(ctx.lat(), max_subgroups, [&](const TransferSystem& ts) {
                systems.push_back(io::ts_json(ctx, ts).at("edges"));
                return true;
            });
            io::json out{{"group", c.group},
                         {"count", systems.size()},
                         {"systems", systems}};
            emit(c.out, out.dump(2));
            return kOk;
        }
        if (*count_sat) {
            Context ctx(parse_group(c.group), c.budget);
            uint64_t n = count_saturated(ctx.lat());
            emit(c.out, io::json{{"group", c.group}, {"saturated", n}}.dump(2));
            return kOk;
        }
        if (*realize_cmd) {
            Context ctx(parse_group(c.group), c.budget);
            TransferSystem r = ts_from_flag(ctx, c.ts_flag);
            if (!is_saturated(ctx.lat(), r)) {
                std::cerr << "error: transfer system is not saturated" << std::endl;
                return kInputError;
            }
            RankTwoOptions opts;
            opts.seed = default_seed(c.seed, c.seed_given);
            opts.retries_per_stage = retries;
            TightPair tp;
            if (tight_flag == "auto") {
                try {
                    tp = auto_tight_pair(ctx, opts);
                } catch (const std::runtime_error& e) {
                    // the sampler exhausted its retries without a verified pair
                    std::cerr << "no tight pair found: " << e.what() << std::endl;
                    return kNegative;
                }
            } else {
                tp = io::tight_pair_from_json(ctx, load_json(tight_flag));
            }
            if (!tp.cert.ok) {
                std::cerr << "error: tight pair failed verification: " << tp.cert.failure
                          << std::endl;
                return kNegative;
            }
            RealizeResult res = realize(ctx, r, tp);
            io::json out = io::charset_json(ctx, res.universe);
            out["iterations"] = res.iterations;
            out["tr_check"] = "ok";
            emit(c.out, out.dump(2));
            return kOk;
        }
        if (*brute) {
            Context ctx(parse_group(c.group), c.budget);
            TransferSystem r = ts_from_flag(ctx, c.ts_flag);
            BruteForceResult res = brute_force_realizable(ctx, r, c.orbit_budget, c.jobs);
            if (res.kind == BruteKind::BudgetExceeded) {
                std::cerr << "error: universe budget exceeded" << std::endl;
                return kBudget;
            }
            if (res.kind == BruteKind::Witness) {
                io::json out = io::charset_json(ctx, res.witness);
                out["outcome"] = "realizable";
                out["checked"] = res.checked;
                emit(c.out, out.dump(2));
                return kOk;
            }
            io::json out{{"group", c.group},
                         {"outcome", "unrealizable"},
                         {"checked", res.checked},
                         {"universes", res.total}};
            emit(c.out, out.dump(2));
            return kNegative;
        }
        if (*tp_cyclic) {
            OwnedTightPair otp = cyclic_tight_pair(tp_p, tp_n);
            emit(c.out, io::tight_pair_json(*otp.ctx, otp.pair).dump(2));
            return kOk;
        }
        if (*tp_rank2) {
            Context ctx(parse_group(c.group), c.budget);
            RankTwoOptions opts;
            opts.seed = default_seed(c.seed, c.seed_given);
            opts.retries_per_stage = tp_retries;
            RankTwoOutcome o = rank_two_tight_pair(ctx, opts);
            io::json out = io::rank_two_run_json(o.run);
            if (o.pair) out["pair"] = io::tight_pair_json(ctx, *o.pair);
            emit(c.out, out.dump(2));
            return o.pair ? kOk : kNegative;
        }
        if (*tp_tensor) {
            std::vector<io::json> bundles;
            for (const auto& path : tensor_inputs) bundles.push_back(load_json(path));
            io::TensorResult res = io::tensor_bundles(bundles);
            emit(c.out, io::tight_pair_json(*res.ctx, res.pair).dump(2));
            return kOk;
        }
        if (*neg) {
            if (neg_p != 2 && neg_p != 3) {
                std::cerr << "error: verify-negative supports p in {2,3}" << std::endl;
                return kInputError;
            }
            NegativeReport rep = verify_negative_rank3(neg_p, c.jobs);
            io::json out{{"p", rep.p},
                         {"group", rep.group},
                         {"plane", rep.plane},
                         {"explicit_form_ok", rep.explicit_form_ok},
                         {"universes", rep.universes},
                         {"outcome", rep.unrealizable ? "unrealizable" : "realizable"},
                         {"seconds", rep.seconds}};
            emit(c.out, out.dump(2));
            // Unrealizable is the expected (successful) outcome here.
            return rep.unrealizable && rep.explicit_form_ok ? kOk : kNegative;
        }
        if (*census_cmd) {
            Context ctx(parse_group(c.group), c.budget);
            CensusBudget b;
            b.max_subgroups_enum = census_max_subgroups;
            b.max_orbits = c.orbit_budget;
            b.jobs = c.jobs;
            CensusRow row = census(ctx, b);
            if (c.format == "csv") {
                emit(c.out, census_csv_header() + "\n" + census_csv_row(row) + "\n");
            } else {
                io::json out{{"group", row.group},
                             {"transfer_systems", row.transfer_systems},
                             {"saturated", row.saturated},
                             {"orbits", row.orbit_count},
                             {"universes", row.universes},
                             {"realized_saturated", row.realized_saturated},
                             {"unrealized_saturated", row.unrealized_saturated}};
                emit(c.out, out.dump(2));
            }
            return kOk;
        }
        if (*dot) {
            Context ctx(parse_group(c.group), c.budget);
            std::optional<TransferSystem> ts;
            if (!c.ts_flag.empty()) ts = ts_from_flag(ctx, c.ts_flag);
            std::optional<CharSet> u;
            if (!universe_path.empty())
                u = io::charset_from_json(ctx, load_json(universe_path));
            emit(c.out, export_dot(ctx, ts ? &*ts : nullptr, u ? &*u : nullptr));
            return kOk;
        }
        if (*stats) {
            Context ctx(parse_group(c.group), c.budget);
            OrbitIndex oi = orbit_index(ctx);
            io::json parts = io::json::array();
            for (const auto& part : ctx.spec().primary)
                parts.push_back({{"prime", part.prime},
                                 {"order", part.order},
                                 {"rank", ctx.spec().p_rank(part.prime)}});
            io::json out{{"group", c.group},
                         {"order", ctx.spec().order()},
                         {"exponent", ctx.spec().exponent()},
                         {"subgroups", ctx.num_subgroups()},
                         {"covers", ctx.lat().covers().size()},
                         {"orbits", oi.count()},
                         {"universes", oi.count() < 63 ? io::json(1ull << oi.count())
                                                       : io::json(nullptr)},
                         {"primary", parts}};
            emit(c.out, out.dump(2));
            return kOk;
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << std::endl;
        return kBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kInputError;
    } catch (const io::json::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return kInternal;
    }
    return kInputError;
}

}  // namespace satlab::cli
