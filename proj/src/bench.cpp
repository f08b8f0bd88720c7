#include "samplesort/bench.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace samplesort::bench {

std::optional<KeyType> parse_keytype(std::string_view name) {
    if (name == "u32") return KeyType::U32;
    if (name == "u64") return KeyType::U64;
    if (name == "f32") return KeyType::F32;
    if (name == "pair") return KeyType::Pair;
    return std::nullopt;
}

std::string_view keytype_name(KeyType t) {
    switch (t) {
    case KeyType::U32: return "u32";
    case KeyType::U64: return "u64";
    case KeyType::F32: return "f32";
    case KeyType::Pair: return "pair";
    }
    return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
    if (name == "samplesort") return Algo::SampleSort;
    if (name == "reference_sort") return Algo::ReferenceSort;
    return std::nullopt;
}

std::string_view algo_name(Algo a) {
    return a == Algo::SampleSort ? "samplesort" : "reference_sort";
}

std::optional<Fault> parse_fault(std::string_view name) {
    if (name == "none") return Fault::None;
    if (name == "swap") return Fault::Swap;
    if (name == "corrupt") return Fault::Corrupt;
    return std::nullopt;
}

double sorting_rate(std::uint64_t n, double time_s) {
    return static_cast<double>(n) / (time_s * 1e6);
}

std::string ValidationReport::describe() const {
    switch (failure) {
    case Failure::None: return "ok";
    case Failure::Order: return "order violation at index " + std::to_string(index);
    case Failure::Multiset: return "multiset mismatch (first difference at " + std::to_string(index) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view field) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed numeric field '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

void emit_csv(std::span<const BenchRun> runs, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const auto& r : runs) {
        os << r.algo << ',' << r.dist << ',' << r.keytype << ',' << r.n << ',' << r.seed << ','
           << format_double(r.time_s) << ',' << format_double(r.rate_meps) << ','
           << (r.validated ? "true" : "false") << '\n';
    }
}

std::string emit_csv(std::span<const BenchRun> runs) {
    std::ostringstream os;
    emit_csv(runs, os);
    return os.str();
}

std::vector<BenchRun> parse_csv(std::string_view text) {
    std::vector<BenchRun> runs;
    bool header = true;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8) throw std::invalid_argument("CSV row must have 8 fields");
        BenchRun r;
        r.algo = f[0];
        r.dist = f[1];
        r.keytype = f[2];
        r.n = parse_number<std::uint64_t>(f[3]);
        r.seed = parse_number<std::uint64_t>(f[4]);
        r.time_s = parse_number<double>(f[5]);
        r.rate_meps = parse_number<double>(f[6]);
        if (f[7] == "true") r.validated = true;
        else if (f[7] == "false") r.validated = false;
        else throw std::invalid_argument("validated must be true or false");
        runs.push_back(std::move(r));
    }
    if (header) throw std::invalid_argument("missing CSV header");
    return runs;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::uint32_t> generate_values(const BenchOptions& opts) {
    dist::DistSpec spec;
    spec.kind = opts.dist;
    spec.n = opts.n;
    spec.seed = opts.seed;
    spec.blocks = opts.blocks.value_or(dist::default_blocks(opts.dist, opts.n));
    return dist::generate(spec);
}

template <Record R>
SortConfig resolve_config(const BenchOptions& opts) {
    SortConfig cfg = opts.config;
    if (!opts.oversampling_set) cfg.oversampling = SortConfig::defaults_for<R>().oversampling;
    return cfg;
}

template <Record R>
void inject(std::vector<R>& out, Fault fault) {
    if (out.size() < 2 || fault == Fault::None) return;
    if (fault == Fault::Swap) {
        // swap the first adjacent pair with distinct keys
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (sort_key(out[i - 1]) < sort_key(out[i])) {
                std::swap(out[i - 1], out[i]);
                return;
            }
        }
    } else {
        auto& last = out.back();
        if constexpr (std::same_as<R, KeyValue>) {
            ++last.value;
        } else if constexpr (std::same_as<R, float>) {
            last = std::nextafter(last, 0.0f);
        } else {
            last = last == 0 ? 1 : last - 1;
        }
    }
}

template <Record R>
void sort_once(std::vector<R>& data, Algo algo, const SortConfig& cfg) {
    if (algo == Algo::SampleSort) {
        sample_sort(std::span<R>(data), cfg);
    } else {
        std::sort(data.begin(), data.end(), KeyLess<R>{});
    }
}

template <Record R>
ValidationReport sort_and_check(const std::vector<R>& input, const BenchOptions& opts,
                                const SortConfig& cfg, double* seconds) {
    std::vector<R> work = input;
    const auto t0 = Clock::now();
    sort_once(work, opts.algo, cfg);
    const auto t1 = Clock::now();
    if (seconds) *seconds = std::chrono::duration<double>(t1 - t0).count();
    inject(work, opts.fault);
    return validate(std::span<const R>(input), std::span<const R>(work));
}

template <Record R>
BenchRun run_typed(const BenchOptions& opts, ValidationReport* report) {
    const auto input = make_records<R>(generate_values(opts));
    const SortConfig cfg = resolve_config<R>(opts);

    BenchRun run;
    run.algo = algo_name(opts.algo);
    run.dist = dist::kind_name(opts.dist);
    run.keytype = keytype_name(opts.keytype);
    run.n = opts.n;
    run.seed = opts.seed;

    ValidationReport first = sort_and_check(input, opts, cfg, nullptr);  // warm-up
    std::vector<double> times;
    for (unsigned r = 0; r < std::max(1u, opts.repeats); ++r) {
        double t = 0.0;
        const auto rep = sort_and_check(input, opts, cfg, &t);
        if (first.ok() && !rep.ok()) first = rep;
        times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size();
    run.time_s = m % 2 == 1 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
    run.rate_meps = sorting_rate(run.n, run.time_s);
    run.validated = first.ok();
    if (report) *report = first;
    return run;
}

template <class F>
decltype(auto) dispatch(KeyType t, F&& f) {
    switch (t) {
    case KeyType::U32: return f(std::uint32_t{});
    case KeyType::U64: return f(std::uint64_t{});
    case KeyType::F32: return f(float{});
    case KeyType::Pair: return f(KeyValue{});
    }
    throw std::invalid_argument("unknown key type");
}

} // namespace

BenchRun run_benchmark(const BenchOptions& opts, ValidationReport* report) {
    if (opts.n == 0) throw std::invalid_argument("n must be >= 1");
    return dispatch(opts.keytype, [&](auto tag) {
        return run_typed<decltype(tag)>(opts, report);
    });
}

ValidationReport validate_once(const BenchOptions& opts) {
    if (opts.n == 0) throw std::invalid_argument("n must be >= 1");
    return dispatch(opts.keytype, [&](auto tag) {
        using R = decltype(tag);
        const auto input = make_records<R>(generate_values(opts));
        return sort_and_check(input, opts, resolve_config<R>(opts), nullptr);
    });
}

// ---------------------------------------------------------------------------
// CLI

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sample sort benchmark and validation harness"};
    std::string algo, dist_name, keytype, csv_path, fault = "none";
    std::size_t n = 0;
    std::uint64_t seed = 0;
    unsigned repeats = 5;
    std::optional<unsigned> workers;
    std::optional<std::size_t> k, m, a, tile, blocks;
    bool validate_only = false;

    app.add_option("--algo", algo, "samplesort | reference_sort")->required();
    app.add_option("--dist", dist_name, "uniform | gaussian | bucket | staggered | detdup")->required();
    app.add_option("--keytype", keytype, "u32 | u64 | f32 | pair")->required();
    app.add_option("--n", n, "number of elements")->required();
    app.add_option("--seed", seed, "input and sampling seed")->required();
    app.add_option("--repeats", repeats, "timed repetitions (median reported)")->required();
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
    app.add_option("--k", k, "buckets per distribution pass (power of two)");
    app.add_option("--m", m, "small-sort threshold M");
    app.add_option("--a", a, "oversampling factor");
    app.add_option("--tile", tile, "records per tile");
    app.add_option("--p", blocks, "distribution block count");
    app.add_option("--csv", csv_path, "write CSV here instead of stdout");
    app.add_flag("--validate-only", validate_only, "sort once and validate, no timing");
    app.add_option("--inject-fault", fault, "none | swap | corrupt (testing)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    auto usage = [&](const std::string& msg) {
        err << "usage error: " << msg << '\n';
        return 1;
    };

    BenchOptions opts;
    const auto algo_v = parse_algo(algo);
    const auto dist_v = dist::parse_kind(dist_name);
    const auto key_v = parse_keytype(keytype);
    const auto fault_v = parse_fault(fault);
    if (!algo_v) return usage("unknown algo '" + algo + "'");
    if (!dist_v) return usage("unknown dist '" + dist_name + "'");
    if (!key_v) return usage("unknown keytype '" + keytype + "'");
    if (!fault_v) return usage("unknown fault '" + fault + "'");
    if (n == 0) return usage("--n must be >= 1");
    if (repeats == 0) return usage("--repeats must be >= 1");
    opts.algo = *algo_v;
    opts.dist = *dist_v;
    opts.keytype = *key_v;
    opts.fault = *fault_v;
    opts.n = n;
    opts.seed = seed;
    opts.repeats = repeats;
    opts.blocks = blocks;
    opts.config.seed = seed;
    if (workers) opts.config.workers = *workers;
    if (k) opts.config.buckets = *k;
    if (m) opts.config.small_threshold = *m;
    if (a) {
        opts.config.oversampling = *a;
        opts.oversampling_set = true;
    }
    if (tile) opts.config.tile_size = *tile;
    if (opts.config.network_threshold > opts.config.small_threshold) {
        opts.config.network_threshold = opts.config.small_threshold;
    }

    try {
        opts.config.validate();
        if (validate_only) {
            const auto rep = validate_once(opts);
            if (!rep.ok()) {
                err << "validation failed: " << rep.describe() << '\n';
                return 2;
            }
            out << "ok " << algo << ' ' << dist_name << ' ' << keytype << " n=" << n << '\n';
            return 0;
        }
        ValidationReport rep;
        const BenchRun run = run_benchmark(opts, &rep);
        if (!run.validated) {
            err << "validation failed: " << rep.describe() << '\n';
            return 2;
        }
        const std::vector<BenchRun> runs{run};
        if (csv_path.empty()) {
            emit_csv(runs, out);
        } else {
            std::ofstream file(csv_path);
            emit_csv(runs, file);
            if (!file) {
                err << "cannot write " << csv_path << '\n';
                return 1;
            }
        }
    } catch (const std::invalid_argument& e) {
        return usage(e.what());
    }
    return 0;
}

} // namespace samplesort::bench
