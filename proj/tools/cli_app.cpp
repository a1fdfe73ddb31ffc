#include "cli_app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <set>

#include "advstream/defenders.hpp"
#include "advstream/distinct_attack.hpp"
#include "advstream/gapnorm.hpp"
#include "advstream/interval_attack.hpp"
#include "advstream/io.hpp"
#include "advstream/learnability.hpp"
#include "advstream/sampler.hpp"
#include "advstream/set_system.hpp"
#include "advstream/switcher.hpp"

namespace advstream::cli {
namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    std::int64_t trials = 1;
    std::string out;
    std::string format = "csv";
    int workers = hardware_workers();
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "master seed; trial i uses splitmix64(seed + (i+1)*golden)");
    cmd->add_option("--trials", opts.trials, "number of seeded trials");
    cmd->add_option("--out", opts.out, "output file for per-trial records");
    cmd->add_option("--format", opts.format, "output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--workers", opts.workers, "worker pool size for trials");
}

RecordFormat format_of(const CommonOpts& opts) {
    return opts.format == "jsonl" ? RecordFormat::Jsonl : RecordFormat::Csv;
}

void emit_records(const CommonOpts& opts, const std::vector<std::string>& columns,
                  const std::vector<json>& records) {
    if (opts.out.empty()) return;
    RecordWriter writer(opts.out, format_of(opts), columns);
    for (const auto& rec : records) writer.write(rec);
}

QueryFunction query_from_name(const std::string& name) {
    if (name == "f0") return QueryFunction::f0();
    if (name == "f2") return QueryFunction::f2();
    if (name.rfind("fp:", 0) == 0) return QueryFunction::fp(std::stod(name.substr(3)));
    throw ConfigError("unknown query function: " + name);
}

// ---------------------------------------------------------------- sketch ---

struct SketchOpts {
    CommonOpts common;
    std::string estimator = "ams";
    double eps = 0.2;
    double delta = 0.05;
    std::int64_t kmv_k = 1024;
    std::int64_t universe = 1000;
    std::int64_t updates = 10000;
};

int run_sketch(const SketchOpts& o) {
    const bool ams = o.estimator == "ams";
    auto records = run_trials<json>(o.common.trials, o.common.workers, [&](std::int64_t trial) {
        const std::uint64_t seed = trial_seed(o.common.seed, static_cast<std::uint64_t>(trial));
        Rng stream_rng(splitmix64(seed ^ 0x57EAAu));
        json rec;
        rec["trial"] = trial;
        rec["seed"] = seed;
        if (ams) {
            AmsSketch sk(o.eps, o.delta, seed, o.universe);
            std::vector<std::int64_t> freq(static_cast<std::size_t>(o.universe), 0);
            for (std::int64_t t = 0; t < o.updates; ++t) {
                const std::int64_t i = stream_rng.next_in(1, o.universe);
                sk.update({i, 1});
                ++freq[static_cast<std::size_t>(i - 1)];
            }
            double truth = 0.0;
            for (std::int64_t v : freq) truth += static_cast<double>(v) * static_cast<double>(v);
            const double est = sk.estimate();
            rec["truth"] = truth;
            rec["estimate"] = est;
            rec["rel_err"] = truth > 0 ? std::abs(est - truth) / truth : std::abs(est);
        } else {
            KmvSketch sk(static_cast<int>(o.kmv_k), seed);
            std::set<std::int64_t> seen;
            for (std::int64_t t = 0; t < o.updates; ++t) {
                const std::int64_t i = stream_rng.next_in(1, o.universe);
                sk.insert(i);
                seen.insert(i);
            }
            const double truth = static_cast<double>(seen.size());
            const double est = sk.estimate();
            rec["truth"] = truth;
            rec["estimate"] = est;
            rec["rel_err"] = truth > 0 ? std::abs(est - truth) / truth : std::abs(est);
        }
        rec["ok"] = rec["rel_err"].get<double>() <= o.eps;
        return rec;
    });
    std::int64_t failures = 0;
    double err_sum = 0.0;
    for (const auto& rec : records) {
        if (!rec["ok"].get<bool>()) ++failures;
        err_sum += rec["rel_err"].get<double>();
    }
    emit_records(o.common, {"trial", "seed", "truth", "estimate", "rel_err", "ok"}, records);
    std::cout << "sketch est=" << o.estimator << " trials=" << o.common.trials
              << " fail_frac=" << double_to_string(static_cast<double>(failures) / o.common.trials)
              << " mean_rel_err=" << double_to_string(err_sum / o.common.trials) << "\n";
    return 0;
}

// ------------------------------------------------------------- robustify ---

struct RobustifyOpts {
    CommonOpts common;
    std::string copies = "oracle";
    std::string query = "f0";
    double eps = 0.5;
    double delta = 0.1;
    std::int64_t universe = 1024;
    std::int64_t length = 10000;
    std::int64_t lambda = 0;  // 0: from the flip-number bound
    bool cyclic = false;
    std::string adversary = "random";
    std::string stream_file;
    bool per_round = false;
    double flood_target = 0.0;      // 0: use eps
    std::int64_t compare_static_k = 0;  // >0: also attack one static KMV copy
};

int run_robustify(const RobustifyOpts& o) {
    const QueryFunction g = query_from_name(o.query);
    if (o.copies == "kmv" && !g.is_distinct_count()) {
        throw ConfigError("--copies kmv supports only --query f0");
    }
    std::vector<StreamUpdate> file_stream;
    if (o.adversary == "stream") {
        if (o.stream_file.empty()) throw ConfigError("--adversary stream needs --stream <path>");
        file_stream = load_stream(o.stream_file);
    }

    // Exhaustive oracle sweep: every insertion-only stream up to the length
    // bound over the configured universe, zero tolerance for violations.
    if (o.adversary == "exhaustive") {
        if (o.copies != "oracle") throw ConfigError("--adversary exhaustive requires --copies oracle");
        std::int64_t streams = 0, violations = 0;
        std::vector<std::int64_t> digits;
        for (std::int64_t len = 1; len <= o.length; ++len) {
            digits.assign(static_cast<std::size_t>(len), 1);
            while (true) {
                RobustConfig cfg{o.eps, o.delta, o.universe, len, g,
                                 o.lambda > 0 ? std::optional<std::int64_t>(o.lambda) : std::nullopt,
                                 o.cyclic, true};
                // Truth over a universe of this size can flip only a handful
                // of times; a small budget keeps the cap assertion meaningful.
                if (!cfg.lambda_override) cfg.lambda_override = o.universe + 3;
                SketchSwitcher<OracleCopy> sw(cfg, [&](std::int64_t) { return OracleCopy(g, o.universe); });
                OracleCopy truth(g, o.universe);
                std::set<double> published{sw.published()};
                bool bad = false;
                for (std::int64_t t = 0; t < len; ++t) {
                    const StreamUpdate u{digits[static_cast<std::size_t>(t)], 1};
                    const auto step = sw.process(u);
                    truth.update(u);
                    published.insert(step.published);
                    if (!in_relative_window(step.published, truth.estimate(), o.eps)) bad = true;
                }
                if (static_cast<std::int64_t>(published.size()) > sw.copy_count() + 1) bad = true;
                ++streams;
                if (bad) ++violations;
                // odometer over the universe alphabet
                std::int64_t pos = len - 1;
                while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == o.universe) {
                    digits[static_cast<std::size_t>(pos)] = 1;
                    --pos;
                }
                if (pos < 0) break;
                ++digits[static_cast<std::size_t>(pos)];
            }
        }
        std::cout << "robustify exhaustive streams=" << streams << " violations=" << violations << "\n";
        return violations == 0 ? 0 : 2;
    }

    const std::vector<std::string> columns{"trial", "seed", "max_rel_err", "ok", "switches",
                                           "exhausted", "truth_flips", "flip_bound",
                                           "single_err", "single_broken", "switcher_broken"};
    auto records = run_trials<json>(o.common.trials, o.common.workers, [&](std::int64_t trial) {
        const std::uint64_t seed = trial_seed(o.common.seed, static_cast<std::uint64_t>(trial));
        json rec;
        rec["trial"] = trial;
        rec["seed"] = seed;

        const double target = o.flood_target > 0 ? o.flood_target : o.eps;
        auto make_switcher_step = [&]() -> std::function<double(const StreamUpdate&)> {
            if (o.copies == "kmv") {
                auto sw = std::make_shared<SketchSwitcher<KmvSketch>>(robust_distinct_elements(
                    o.eps, o.delta, o.universe, o.length, seed,
                    o.lambda > 0 ? std::optional<std::int64_t>(o.lambda) : std::nullopt));
                return [sw](const StreamUpdate& u) { return sw->process(u).published; };
            }
            RobustConfig cfg{o.eps, o.delta, o.universe, o.length, g,
                             o.lambda > 0 ? std::optional<std::int64_t>(o.lambda) : std::nullopt,
                             o.cyclic, false};
            auto sw = std::make_shared<SketchSwitcher<OracleCopy>>(
                cfg, [&](std::int64_t) { return OracleCopy(g, o.universe); });
            return [sw](const StreamUpdate& u) { return sw->process(u).published; };
        };

        if (o.adversary == "flood") {
            if (!g.is_distinct_count()) throw ConfigError("--adversary flood needs --query f0");
            auto step = make_switcher_step();
            DistinctAttackParams params{o.length, target, seed, false};
            const auto vs_switcher =
                run_distinct_flood_attack([&](std::int64_t x) { return step({x, 1}); }, params);
            rec["max_rel_err"] = vs_switcher.max_rel_error;
            rec["ok"] = vs_switcher.max_rel_error <= o.eps;
            rec["switcher_broken"] = vs_switcher.max_rel_error > o.eps;
            if (o.compare_static_k > 0) {
                KmvSketch lone(static_cast<int>(o.compare_static_k), seed);
                const auto vs_single = run_distinct_flood_attack(
                    [&](std::int64_t x) {
                        lone.insert(x);
                        return lone.estimate();
                    },
                    params);
                rec["single_err"] = vs_single.max_rel_error;
                rec["single_broken"] = vs_single.max_rel_error > o.eps;
            }
            return rec;
        }

        // random / stream adversaries: feed updates, track truth and flips.
        Rng stream_rng(splitmix64(seed ^ 0xADDu));
        auto step = make_switcher_step();
        OracleCopy truth(g, o.universe);
        std::vector<double> truths{0.0};
        double max_rel_err = 0.0;
        bool tracking_ok = true;
        std::int64_t switches = 0;
        double last_published = 0.0;
        const std::int64_t rounds = o.adversary == "stream"
                                        ? static_cast<std::int64_t>(file_stream.size())
                                        : o.length;
        for (std::int64_t t = 0; t < rounds; ++t) {
            const StreamUpdate u = o.adversary == "stream"
                                       ? file_stream[static_cast<std::size_t>(t)]
                                       : StreamUpdate{stream_rng.next_in(1, o.universe), 1};
            const double published = step(u);
            truth.update(u);
            const double tv = truth.estimate();
            truths.push_back(tv);
            if (published != last_published) {
                ++switches;
                last_published = published;
            }
            const double err = tv != 0.0 ? std::abs(published - tv) / std::abs(tv) : std::abs(published);
            max_rel_err = std::max(max_rel_err, err);
            if (!in_relative_window(published, tv, o.eps)) tracking_ok = false;
        }
        rec["max_rel_err"] = max_rel_err;
        rec["ok"] = tracking_ok;
        rec["switches"] = switches;
        rec["truth_flips"] = flip_number(truths, o.eps);
        rec["flip_bound"] = flip_number_bound(g, o.eps, o.universe, std::max<std::int64_t>(1, rounds));
        return rec;
    });

    std::int64_t failures = 0, flips_over_bound = 0, single_broken = 0, switcher_broken = 0;
    for (const auto& rec : records) {
        if (rec.contains("ok") && !rec["ok"].get<bool>()) ++failures;
        if (rec.contains("truth_flips") &&
            rec["truth_flips"].get<std::int64_t>() > rec["flip_bound"].get<std::int64_t>()) {
            ++flips_over_bound;
        }
        if (rec.value("single_broken", false)) ++single_broken;
        if (rec.value("switcher_broken", false)) ++switcher_broken;
    }
    emit_records(o.common, columns, records);
    std::cout << "robustify copies=" << o.copies << " adversary=" << o.adversary
              << " trials=" << o.common.trials
              << " fail_frac=" << double_to_string(static_cast<double>(failures) / o.common.trials);
    if (o.adversary == "flood" && o.compare_static_k > 0) {
        std::cout << " single_broken_frac="
                  << double_to_string(static_cast<double>(single_broken) / o.common.trials)
                  << " switcher_broken_frac="
                  << double_to_string(static_cast<double>(switcher_broken) / o.common.trials);
    } else {
        std::cout << " flips_over_bound=" << flips_over_bound;
    }
    std::cout << "\n";
    return flips_over_bound == 0 ? 0 : 2;
}

// ------------------------------------------------------------- per-round ---

int run_robustify_per_round(const RobustifyOpts& o) {
    // Single seeded run emitting the per-round report.
    const QueryFunction g = query_from_name(o.query);
    const std::uint64_t seed = trial_seed(o.common.seed, 0);
    Rng stream_rng(splitmix64(seed ^ 0xADDu));
    std::vector<StreamUpdate> updates;
    if (o.adversary == "stream") {
        updates = load_stream(o.stream_file);
    } else {
        for (std::int64_t t = 0; t < o.length; ++t) updates.push_back({stream_rng.next_in(1, o.universe), 1});
    }
    std::vector<json> records;
    OracleCopy truth(g, o.universe);
    auto run_with = [&](auto&& switcher) {
        std::int64_t t = 0;
        for (const auto& u : updates) {
            const auto step = switcher.process(u);
            truth.update(u);
            ++t;
            records.push_back({{"t", t},
                               {"truth", truth.estimate()},
                               {"published", step.published},
                               {"rho", step.active_copy},
                               {"flipped", step.flipped}});
        }
    };
    if (o.copies == "kmv") {
        run_with(robust_distinct_elements(o.eps, o.delta, o.universe, o.length, seed,
                                          o.lambda > 0 ? std::optional<std::int64_t>(o.lambda)
                                                       : std::nullopt));
    } else {
        RobustConfig cfg{o.eps, o.delta, o.universe, o.length, g,
                         o.lambda > 0 ? std::optional<std::int64_t>(o.lambda) : std::nullopt,
                         o.cyclic, false};
        SketchSwitcher<OracleCopy> sw(cfg, [&](std::int64_t) { return OracleCopy(g, o.universe); });
        run_with(sw);
    }
    emit_records(o.common, {"t", "truth", "published", "rho", "flipped"}, records);
    std::cout << "robustify per-round rounds=" << records.size() << " copies=" << o.copies << "\n";
    return 0;
}

// ---------------------------------------------------------------- sample ---

struct SampleOpts {
    CommonOpts common;
    std::string sampler = "bernoulli:p=0.1";
    std::string system = "prefix:1000";
    std::int64_t length = 1000;
    double eps = 0.0;  // 0: report error only
    bool chi_square = false;
};

int run_sample(const SampleOpts& o) {
    const FiniteSetSystem sys = FiniteSetSystem::from_spec(o.system);
    const DefenderSpec spec = DefenderSpec::parse(o.sampler);
    auto records = run_trials<json>(o.common.trials, o.common.workers, [&](std::int64_t trial) {
        const std::uint64_t seed = trial_seed(o.common.seed, static_cast<std::uint64_t>(trial));
        auto sampler = [&]() {
            if (spec.name == "bernoulli") return SamplerState::bernoulli(spec.number("p"), seed);
            if (spec.name == "uniform") return SamplerState::uniform(spec.integer("k"), o.length, seed);
            if (spec.name == "reservoir") return SamplerState::reservoir(spec.integer("k"), seed);
            throw ConfigError("unknown sampler: " + spec.name);
        }();
        Rng stream_rng(splitmix64(seed ^ 0x5EEDu));
        std::vector<std::int64_t> X;
        X.reserve(static_cast<std::size_t>(o.length));
        for (std::int64_t i = 1; i <= o.length; ++i) {
            const std::int64_t v = stream_rng.next_in(1, sys.universe_size());
            X.push_back(v);
            sampler.step(i, v);
        }
        const auto S = sampler.sample_values();
        json rec;
        rec["trial"] = trial;
        rec["seed"] = seed;
        rec["sample_size"] = S.size();
        if (!S.empty()) {
            const double err = epsilon_approx_error(X, S, sys);
            rec["error"] = err;
            if (o.eps > 0) rec["ok"] = err <= o.eps;
        }
        if (!S.empty()) rec["last_value"] = S.front();
        return rec;
    });

    std::int64_t failures = 0, with_error = 0;
    double err_sum = 0.0;
    for (const auto& rec : records) {
        if (rec.contains("error")) {
            ++with_error;
            err_sum += rec["error"].get<double>();
        }
        if (rec.contains("ok") && !rec["ok"].get<bool>()) ++failures;
    }
    emit_records(o.common, {"trial", "seed", "sample_size", "error", "ok", "last_value"}, records);
    std::cout << "sample sampler=" << o.sampler << " trials=" << o.common.trials;
    if (with_error > 0) std::cout << " mean_error=" << double_to_string(err_sum / with_error);
    if (o.eps > 0) {
        std::cout << " fail_frac=" << double_to_string(static_cast<double>(failures) / o.common.trials);
    }
    if (o.chi_square) {
        // Goodness of fit of the final survivor against uniform (k=1 runs).
        std::vector<std::int64_t> counts(static_cast<std::size_t>(sys.universe_size()), 0);
        for (const auto& rec : records) {
            if (rec.contains("last_value")) {
                ++counts[static_cast<std::size_t>(rec["last_value"].get<std::int64_t>() - 1)];
            }
        }
        const double expected = static_cast<double>(o.common.trials) / static_cast<double>(sys.universe_size());
        double chi2 = 0.0;
        for (std::int64_t c : counts) {
            const double dev = static_cast<double>(c) - expected;
            chi2 += dev * dev / expected;
        }
        std::cout << " chi2=" << double_to_string(chi2) << " df=" << (sys.universe_size() - 1);
    }
    std::cout << "\n";
    return 0;
}

// -------------------------------------------------------- attack-interval ---

struct IntervalOpts {
    CommonOpts common;
    std::int64_t n = 1000;
    double p = 0.01;
    std::int64_t universe_bits = 0;  // 0: 2^(n/2) capped at 62
    std::string fill = "truncate";
    double eps = 0.5;
    double robust_ranges = 0.0;  // >0: derive p from the robust-rate formula
    double robust_eps = 0.0;
    double robust_delta = 0.0;
    std::string transcript_out;
};

int run_attack_interval(const IntervalOpts& o) {
    double p = o.p;
    if (o.robust_ranges > 0) {
        p = robust_sample_rate(o.robust_ranges, o.robust_eps, o.robust_delta, o.n);
    }
    const std::int64_t universe =
        o.universe_bits > 0 ? (std::int64_t{1} << o.universe_bits) : interval_attack_universe(o.n);
    const IntervalFill fill = o.fill == "duplicate" ? IntervalFill::DuplicateLow : IntervalFill::Truncate;

    bool invariant_violated = false;
    auto records = run_trials<json>(o.common.trials, o.common.workers, [&](std::int64_t trial) {
        IntervalAttackParams params;
        params.stream_length = o.n;
        params.sampler_rate = p;
        params.universe_size = universe;
        params.seed = trial_seed(o.common.seed, static_cast<std::uint64_t>(trial));
        params.fill = fill;
        params.record_transcript = !o.transcript_out.empty() && trial == 0;
        const auto result = run_interval_attack(params);
        if (params.record_transcript) result.transcript.save_jsonl(o.transcript_out);
        json rec;
        rec["trial"] = trial;
        rec["seed"] = params.seed;
        rec["error"] = result.final_error ? json(*result.final_error) : json();
        rec["stream_size"] = result.stream_size;
        rec["sample_size"] = result.sample_size;
        rec["exhausted"] = result.exhausted;
        rec["exhausted_round"] = result.exhausted_round;
        rec["invariant_ok"] = result.invariant_ok;
        rec["bound_held"] = result.sample_bound_held;
        rec["success"] = result.final_error && *result.final_error >= o.eps;
        return rec;
    });

    std::int64_t successes = 0, exhausted = 0;
    for (const auto& rec : records) {
        if (rec["success"].get<bool>()) ++successes;
        if (rec["exhausted"].get<bool>()) ++exhausted;
        if (!rec["invariant_ok"].get<bool>()) invariant_violated = true;
    }
    emit_records(o.common,
                 {"trial", "seed", "error", "stream_size", "sample_size", "exhausted",
                  "exhausted_round", "invariant_ok", "bound_held", "success"},
                 records);
    std::cout << "attack-interval n=" << o.n << " p=" << double_to_string(p)
              << " trials=" << o.common.trials
              << " success_frac=" << double_to_string(static_cast<double>(successes) / o.common.trials)
              << " exhausted_frac=" << double_to_string(static_cast<double>(exhausted) / o.common.trials)
              << " invariant_ok=" << (invariant_violated ? "0" : "1") << "\n";
    return invariant_violated ? 2 : 0;
}

// --------------------------------------------------------- attack-gapnorm ---

struct GapNormOpts {
    CommonOpts common;
    std::int64_t n = 100;
    std::int64_t r = 5;
    double B = 2.0;
    std::int64_t m_probe = 0;  // 0: library default 20 r ln n
    std::int64_t attack_rounds = 100;
    std::string transcript_out;
};

int run_attack_gapnorm(const GapNormOpts& o) {
    auto records = run_trials<json>(o.common.trials, o.common.workers, [&](std::int64_t trial) {
        GapNormAttackParams params;
        params.dimension = o.n;
        params.sketch_rows = o.r;
        params.gap = o.B;
        params.probes_per_round = o.m_probe;
        params.attack_rounds = o.attack_rounds;
        params.seed = trial_seed(o.common.seed, static_cast<std::uint64_t>(trial));
        params.record_transcript = !o.transcript_out.empty() && trial == 0;
        const auto result = run_gapnorm_attack(params);
        if (params.record_transcript) result.transcript.save_jsonl(o.transcript_out);
        double mean_proj = 0.0, min_proj = 1.0;
        for (double p : result.learned_projections) {
            mean_proj += p;
            min_proj = std::min(min_proj, p);
        }
        if (!result.learned_projections.empty()) {
            mean_proj /= static_cast<double>(result.learned_projections.size());
        }
        json rec;
        rec["trial"] = trial;
        rec["seed"] = params.seed;
        rec["fooling_rate"] = result.fooling_rate;
        rec["mean_proj"] = mean_proj;
        rec["min_proj"] = min_proj;
        rec["capture"] = result.rowspace_capture.empty() ? 0.0 : result.rowspace_capture.back();
        rec["kernel_rounds"] = result.kernel_rounds;
        rec["queries"] = result.total_defender_queries;
        return rec;
    });
    std::int64_t fooled = 0, learned = 0;
    for (const auto& rec : records) {
        if (rec["fooling_rate"].get<double>() >= 0.25) ++fooled;
        if (rec["mean_proj"].get<double>() >= 0.95) ++learned;
    }
    emit_records(o.common,
                 {"trial", "seed", "fooling_rate", "mean_proj", "min_proj", "capture",
                  "kernel_rounds", "queries"},
                 records);
    std::cout << "attack-gapnorm n=" << o.n << " r=" << o.r << " trials=" << o.common.trials
              << " fooling_frac=" << double_to_string(static_cast<double>(fooled) / o.common.trials)
              << " learned_frac=" << double_to_string(static_cast<double>(learned) / o.common.trials)
              << "\n";
    return 0;
}

// ------------------------------------------------------------------ dims ---

int run_dims(const std::string& system_spec, const CommonOpts& common) {
    const FiniteSetSystem sys = FiniteSetSystem::from_spec(system_spec);
    const std::int64_t ld = littlestone_dimension(sys);
    std::string vc_text = "na";
    json rec{{"system", system_spec}, {"ldim", ld}, {"universe", sys.universe_size()},
             {"ranges", sys.range_count()}};
    if (sys.universe_size() <= 24) {
        const std::int64_t vc = vc_dimension(sys);
        vc_text = std::to_string(vc);
        rec["vc"] = vc;
    }
    emit_records(common, {"system", "vc", "ldim", "universe", "ranges"}, {rec});
    std::cout << "vc=" << vc_text << " ldim=" << ld << "\n";
    return 0;
}

// ------------------------------------------------------------------ disc ---

struct DiscOpts {
    CommonOpts common;
    std::string system = "prefix:64";
    std::int64_t rounds = 200;
    std::string painter = "random";
    std::string adversary = "random";
};

int run_disc(const DiscOpts& o) {
    const FiniteSetSystem sys = FiniteSetSystem::from_spec(o.system);
    const PaintStrategy painter = o.painter == "greedy" ? greedy_painter() : random_painter();
    const ItemStrategy adversary =
        o.adversary == "pairs" ? duplicate_pair_adversary() : uniform_item_adversary();
    const auto est = estimate_sequential_rademacher(sys, o.rounds, o.common.trials, painter, adversary,
                                                    o.common.seed, o.common.workers);
    std::vector<json> records;
    for (std::size_t i = 0; i < est.discs.size(); ++i) {
        records.push_back({{"trial", i},
                           {"seed", trial_seed(o.common.seed, i)},
                           {"disc", est.discs[i]}});
    }
    emit_records(o.common, {"trial", "seed", "disc"}, records);
    std::cout << "disc system=" << o.system << " rounds=" << o.rounds << " trials=" << o.common.trials
              << " mean=" << double_to_string(est.mean) << " se=" << double_to_string(est.std_error)
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- replay ---

struct ReplayOpts {
    std::string transcript;
    std::string defender;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int run_replay(const ReplayOpts& o) {
    const GameTranscript tr = GameTranscript::load_jsonl(o.transcript);
    const std::string spec = !o.defender.empty() ? o.defender : tr.header.value("defender", "");
    if (spec.empty()) {
        throw ConfigError("transcript header names no defender; pass --defender");
    }
    std::uint64_t seed = o.seed_given ? o.seed : tr.header.value("defender_seed", std::uint64_t{0});
    const Responder responder = make_defender(spec, seed);
    const auto mismatch = replay_mismatch(tr, responder);
    if (mismatch) {
        std::cout << "replay mismatch at round " << (*mismatch + 1) << " of " << tr.rounds.size()
                  << "\n";
        return 2;
    }
    std::cout << "replay ok rounds=" << tr.rounds.size() << " defender=" << spec << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"adversarially robust streaming and sampling experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value config file; command-line flags win");

    SketchOpts sketch_opts;
    auto* sketch_cmd = app.add_subcommand("sketch", "static estimator accuracy over seeded streams");
    add_common(sketch_cmd, sketch_opts.common);
    sketch_cmd->add_option("--est", sketch_opts.estimator, "estimator: ams or kmv")
        ->check(CLI::IsMember({"ams", "kmv"}));
    sketch_cmd->add_option("--eps", sketch_opts.eps, "target relative accuracy");
    sketch_cmd->add_option("--delta", sketch_opts.delta, "target failure probability (ams)");
    sketch_cmd->add_option("--k", sketch_opts.kmv_k, "kmv capacity");
    sketch_cmd->add_option("--universe", sketch_opts.universe, "universe size");
    sketch_cmd->add_option("--updates", sketch_opts.updates, "stream length");

    RobustifyOpts rob_opts;
    auto* rob_cmd = app.add_subcommand("robustify", "sketch-switching runs and attacks");
    add_common(rob_cmd, rob_opts.common);
    rob_cmd->add_option("--copies", rob_opts.copies, "copy type: oracle or kmv")
        ->check(CLI::IsMember({"oracle", "kmv"}));
    rob_cmd->add_option("--query", rob_opts.query, "query function: f0, f2, fp:<p>");
    rob_cmd->add_option("--eps", rob_opts.eps, "robust accuracy target");
    rob_cmd->add_option("--delta", rob_opts.delta, "robust failure probability");
    rob_cmd->add_option("--universe", rob_opts.universe, "universe size");
    rob_cmd->add_option("--length", rob_opts.length, "stream length bound");
    rob_cmd->add_option("--lambda", rob_opts.lambda, "explicit copy count (0: flip-number bound)");
    rob_cmd->add_flag("--cyclic", rob_opts.cyclic, "reuse deactivated copies cyclically");
    rob_cmd->add_option("--adversary", rob_opts.adversary,
                        "random | flood | stream | exhaustive")
        ->check(CLI::IsMember({"random", "flood", "stream", "exhaustive"}));
    rob_cmd->add_option("--stream", rob_opts.stream_file, "stream file for --adversary stream");
    rob_cmd->add_flag("--per-round", rob_opts.per_round, "emit per-round records for one run");
    rob_cmd->add_option("--flood-target", rob_opts.flood_target, "flood attack error target");
    rob_cmd->add_option("--compare-static-k", rob_opts.compare_static_k,
                        "also attack one static KMV copy of this capacity");

    SampleOpts sample_opts;
    auto* sample_cmd = app.add_subcommand("sample", "oblivious sampler approximation experiments");
    add_common(sample_cmd, sample_opts.common);
    sample_cmd->add_option("--sampler", sample_opts.sampler,
                           "bernoulli:p=.. | uniform:k=.. | reservoir:k=..");
    sample_cmd->add_option("--system", sample_opts.system, "prefix:N or a set-system file");
    sample_cmd->add_option("--length", sample_opts.length, "stream length");
    sample_cmd->add_option("--eps", sample_opts.eps, "error threshold for ok/fail accounting");
    sample_cmd->add_flag("--chi-square", sample_opts.chi_square,
                         "chi-square uniformity summary of the final survivor (k=1)");

    IntervalOpts interval_opts;
    auto* interval_cmd = app.add_subcommand("attack-interval", "boundary attack on Bernoulli sampling");
    add_common(interval_cmd, interval_opts.common);
    interval_cmd->add_option("--n", interval_opts.n, "stream length");
    interval_cmd->add_option("--p", interval_opts.p, "sampler rate");
    interval_cmd->add_option("--universe-bits", interval_opts.universe_bits,
                             "universe size 2^bits (0: 2^(n/2) capped at 62)");
    interval_cmd->add_option("--fill", interval_opts.fill, "after collapse: truncate | duplicate")
        ->check(CLI::IsMember({"truncate", "duplicate"}));
    interval_cmd->add_option("--eps", interval_opts.eps, "success threshold on the final error");
    interval_cmd->add_option("--robust-ranges", interval_opts.robust_ranges,
                             "derive p from the robust-rate formula with this range count");
    interval_cmd->add_option("--robust-eps", interval_opts.robust_eps, "eps for the robust rate");
    interval_cmd->add_option("--robust-delta", interval_opts.robust_delta, "delta for the robust rate");
    interval_cmd->add_option("--transcript", interval_opts.transcript_out,
                             "write trial 0's transcript to this JSONL file");

    GapNormOpts gap_opts;
    auto* gap_cmd = app.add_subcommand("attack-gapnorm", "row-space learning attack on a linear sketch");
    add_common(gap_cmd, gap_opts.common);
    gap_cmd->add_option("--n", gap_opts.n, "ambient dimension");
    gap_cmd->add_option("--r", gap_opts.r, "sketch rows");
    gap_cmd->add_option("--B", gap_opts.B, "norm gap");
    gap_cmd->add_option("--m-probe", gap_opts.m_probe, "probes per learning round (0: 20 r ln n)");
    gap_cmd->add_option("--attack-rounds", gap_opts.attack_rounds, "post-learning attack rounds");
    gap_cmd->add_option("--transcript", gap_opts.transcript_out,
                        "write trial 0's transcript to this JSONL file");

    CommonOpts dims_common;
    std::string dims_system = "prefix:8";
    auto* dims_cmd = app.add_subcommand("dims", "VC and Littlestone dimensions of a set system");
    add_common(dims_cmd, dims_common);
    dims_cmd->add_option("--system", dims_system, "prefix:N or a set-system file")->required();

    DiscOpts disc_opts;
    auto* disc_cmd = app.add_subcommand("disc", "online discrepancy game experiments");
    add_common(disc_cmd, disc_opts.common);
    disc_cmd->add_option("--system", disc_opts.system, "prefix:N or a set-system file");
    disc_cmd->add_option("--rounds", disc_opts.rounds, "items placed per game (even)");
    disc_cmd->add_option("--painter", disc_opts.painter, "random | greedy")
        ->check(CLI::IsMember({"random", "greedy"}));
    disc_cmd->add_option("--adversary", disc_opts.adversary, "random | pairs")
        ->check(CLI::IsMember({"random", "pairs"}));

    ReplayOpts replay_opts;
    auto* replay_cmd = app.add_subcommand("replay", "replay a transcript against a defender");
    replay_cmd->add_option("--transcript", replay_opts.transcript, "JSONL transcript")->required();
    replay_cmd->add_option("--defender", replay_opts.defender,
                           "defender spec (default: transcript header)");
    replay_cmd->add_option("--seed", replay_opts.seed, "defender seed (default: transcript header)")
        ->each([&replay_opts](const std::string&) { replay_opts.seed_given = true; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help() << std::flush;
            return 0;
        }
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sketch_cmd->parsed()) return run_sketch(sketch_opts);
        if (rob_cmd->parsed()) {
            return rob_opts.per_round ? run_robustify_per_round(rob_opts) : run_robustify(rob_opts);
        }
        if (sample_cmd->parsed()) return run_sample(sample_opts);
        if (interval_cmd->parsed()) return run_attack_interval(interval_opts);
        if (gap_cmd->parsed()) return run_attack_gapnorm(gap_opts);
        if (dims_cmd->parsed()) return run_dims(dims_system, dims_common);
        if (disc_cmd->parsed()) return run_disc(disc_opts);
        if (replay_cmd->parsed()) return run_replay(replay_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace advstream::cli
