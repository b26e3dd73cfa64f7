#include "hopf/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "hopf/rng.hpp"
#include "hopf/serialize.hpp"

namespace hopf {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) bad("cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        bad("malformed JSON in " + origin + ": " + e.what());
    }
}

// Inline object, or a file name whose JSON content is used.
json resolve(const json& j, const fs::path& base, std::vector<fs::path>& files) {
    if (!j.is_string()) return j;
    const fs::path p = base / j.get<std::string>();
    files.push_back(p);
    return parse_text(read_file(p), p.string());
}

json unwrap_divisor(const json& j) {
    if (j.is_object() && j.contains("divisor") && !j.contains("A")) return j["divisor"];
    return j;
}

double positive(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) bad(std::string("\"") + key + "\" must be a number");
    const double v = j[key].get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) bad(std::string("\"") + key + "\" must be positive");
    return v;
}

long long integer(const json& j, const char* key, long long fallback, long long lo, long long hi) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) bad(std::string("\"") + key + "\" must be an integer");
    const long long v = j[key].get<long long>();
    if (v < lo || v > hi) bad(std::string("\"") + key + "\" out of range");
    return v;
}

bool boolean(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) bad(std::string("\"") + key + "\" must be true or false");
    return j[key].get<bool>();
}

json document(const RunConfig& cfg) {
    return {{"schema", io::kSchema}, {"command", cfg.command}, {"config", encode(cfg)}};
}

void check(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Invariant, "invariant violated: " + what);
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(6) << x;
    return s.str();
}

std::string csv_number(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

}  // namespace

PathConfig RunConfig::path_config() const {
    PathConfig p;
    p.margin_threshold = margin_threshold;
    p.samples_per_segment = samples_per_segment;
    p.max_depth = max_depth;
    p.detour_scale = detour_scale;
    p.min_step = min_step;
    p.seed = seed;
    p.strict = strict;
    p.periods.quadrature_order = quadrature_order;
    return p;
}

RunConfig parse_run_config(const json& j, const std::string& command, const fs::path& base_dir) {
    if (!j.is_object()) bad("configuration must be a JSON object");
    if (j.contains("schema") && j["schema"] != io::kSchema) bad("unsupported schema (expected \"v1\")");
    if (j.contains("command") && j["command"] != command) bad("configuration is for another command");
    RunConfig cfg;
    cfg.command = command;
    cfg.hopf = io::decode_hopf(j);
    cfg.n = static_cast<int>(integer(j, "n", cfg.n, 1, 64));
    if (j.contains("seed")) {
        const json& s = j["seed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0))
            bad("\"seed\" must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    const json tol = j.contains("tolerances") ? j["tolerances"] : json::object();
    if (!tol.is_object()) bad("\"tolerances\" must be an object");
    cfg.margin_threshold = positive(tol, "margin_threshold", cfg.margin_threshold);
    cfg.detour_scale = positive(tol, "detour_scale", cfg.detour_scale);
    cfg.min_step = positive(tol, "min_step", cfg.min_step);
    cfg.quadrature_order = static_cast<int>(integer(tol, "quadrature_order", cfg.quadrature_order, 1, 512));
    cfg.max_depth = static_cast<int>(integer(tol, "max_depth", cfg.max_depth, 1, 16));
    cfg.samples_per_segment =
        static_cast<int>(integer(tol, "samples_per_segment", cfg.samples_per_segment, 1, 1 << 16));
    cfg.ordering_shift = static_cast<int>(integer(j, "ordering_shift", 0, 0, 1 << 20));
    cfg.strict = boolean(j, "strict", cfg.strict);
    cfg.samples = static_cast<long>(integer(j, "samples", cfg.samples, 1, 100000000));
    cfg.corpus = boolean(j, "corpus", cfg.corpus);
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) bad("\"mode\" must be a string");
        cfg.mode = j["mode"].get<std::string>();
        if (cfg.mode != "census" && cfg.mode != "limit") bad("\"mode\" must be \"census\" or \"limit\"");
    }
    if (j.contains("divisor")) cfg.divisor = unwrap_divisor(resolve(j["divisor"], base_dir, cfg.input_files));
    if (j.contains("start")) cfg.start = resolve(j["start"], base_dir, cfg.input_files);
    if (j.contains("end")) cfg.end = resolve(j["end"], base_dir, cfg.input_files);
    if (j.contains("base_points")) {
        if (!j["base_points"].is_array()) bad("\"base_points\" must be a list");
        for (const auto& p : j["base_points"]) cfg.base_points.push_back(io::decode_point(p));
    }

    if ((command == "analyze" || command == "periods") && cfg.divisor.is_null())
        bad(command + " needs a \"divisor\"");
    if (command == "connect" && (cfg.start.is_null() || cfg.end.is_null()))
        bad("connect needs \"start\" and \"end\"");
    return cfg;
}

json encode(const RunConfig& cfg) {
    json points = json::array();
    for (const auto& p : cfg.base_points) points.push_back(io::encode(p));
    json files = json::array();
    for (const auto& f : cfg.input_files) files.push_back(f.string());
    return {{"command", cfg.command},
            {"hopf", io::encode(cfg.hopf)},
            {"n", cfg.n},
            {"seed", cfg.seed},
            {"tolerances",
             {{"margin_threshold", cfg.margin_threshold},
              {"quadrature_order", cfg.quadrature_order},
              {"max_depth", cfg.max_depth},
              {"detour_scale", cfg.detour_scale},
              {"min_step", cfg.min_step},
              {"samples_per_segment", cfg.samples_per_segment}}},
            {"ordering_shift", cfg.ordering_shift},
            {"strict", cfg.strict},
            {"samples", cfg.samples},
            {"mode", cfg.mode},
            {"corpus", cfg.corpus},
            {"divisor", cfg.divisor},
            {"start", cfg.start},
            {"end", cfg.end},
            {"base_points", points},
            {"input_files", files}};
}

CommandResult cmd_analyze(const RunConfig& cfg) {
    const GraphDivisor d = io::decode_divisor(cfg.divisor);
    if (d.n() < 1) throw Error(ErrorKind::Precondition, "analyze needs n >= 1");
    const int n = d.n();
    CommandResult r;
    json& doc = r.document = document(cfg);
    doc["hopf"] = io::encode(cfg.hopf);
    const auto e = branch_values(cfg.hopf).values();
    doc["branch_values"] = io::encode(std::span<const cplx>(e));
    doc["divisor"] = io::encode(d);

    const StratumReport st = stratify(d);
    doc["stratum"] = io::encode(st);
    doc["stable_witness"] = is_stable_witness(d);
    std::vector<ProjectivePoint> special;
    for (const auto& jp : st.jumps) special.push_back(jp.point);
    if (st.k == 0) {
        const SpectralCurve s = spectral_curve(d, cfg.hopf);
        doc["spectral_curve"] = io::encode(s);
        if (s.smooth) {
            int count = 0;
            for (const auto& b : s.branch_points) count += b.multiplicity;
            check(count == 4 * n, "4n branch points");
            check(s.genus == 2 * n - 1, "genus 2n - 1");
        }
        for (const auto& b : s.branch_points) special.push_back(b.point);
    } else {
        doc["spectral_curve"] = nullptr;
    }
    const double margin = regularity_margin(d, cfg.hopf);
    doc["regularity_margin"] = margin;
    doc["regular"] = margin > kRegularityThreshold;

    std::vector<ProjectivePoint> pts = cfg.base_points;
    if (pts.empty()) pts = {ProjectivePoint::from_value(0.0), ProjectivePoint::from_value(1.0), ProjectivePoint::infinity()};
    json fibers = json::array(), special_fibers = json::array();
    for (const auto& x : pts) fibers.push_back(io::encode(fiber_type(d, cfg.hopf, x)));
    for (const auto& x : special) special_fibers.push_back(io::encode(fiber_type(d, cfg.hopf, x)));
    doc["fiber_types"] = fibers;
    doc["special_fibers"] = special_fibers;

    const DimensionCount dc = dimension_count(n);
    check(dc.total == 4 * n, "dimension 4n");
    doc["dimension"] = io::encode(dc);
    doc["assumptions"] = json::array({"every component of the moduli space contains a regular bundle"});

    std::ostringstream s;
    s << "n = " << n << ", stratum S_" << st.k;
    if (st.k == 0) {
        s << ", genus " << doc["spectral_curve"]["genus"].get<int>() << ", "
          << doc["spectral_curve"]["branch_point_count"].get<int>() << " branch points";
    }
    s << ", regularity margin " << fmt(margin) << (margin > kRegularityThreshold ? " (regular)" : " (not regular)");
    r.summary = s.str();
    return r;
}

CommandResult cmd_connect(const RunConfig& cfg) {
    const bool moduli = cfg.start.is_object() && cfg.start.contains("divisor");
    if (moduli != (cfg.end.is_object() && cfg.end.contains("divisor")))
        bad("connect endpoints must both be divisors or both be moduli points");
    const PathConfig pc = cfg.path_config();
    CommandResult r;
    json& doc = r.document = document(cfg);
    doc["hopf"] = io::encode(cfg.hopf);

    CertifiedPath base;
    if (moduli) {
        const ModuliPoint a = io::decode_moduli_point(cfg.start), b = io::decode_moduli_point(cfg.end);
        const ModuliPath p = connect_moduli(a, b, cfg.hopf, pc);
        base = p.base;
        doc["fiber"] = io::encode(p.fiber);
    } else {
        base = connect_base(io::decode_divisor(unwrap_divisor(cfg.start)), io::decode_divisor(unwrap_divisor(cfg.end)),
                            cfg.hopf, pc);
        doc["fiber"] = nullptr;
    }
    doc["base"] = io::encode(base);
    const std::size_t segments = base.waypoints.size() - 1;
    doc["summary"] = {{"segments", segments},
                      {"certified_margin", base.certified_margin},
                      {"depth_used", base.depth_used},
                      {"detours", base.detours},
                      {"monodromy_safe", base.monodromy_safe}};

    std::ostringstream s;
    s << "certified path: " << segments << " segment(s), min margin " << fmt(base.certified_margin)
      << ", depth used " << base.depth_used << ", monodromy " << (base.monodromy_safe ? "safe" : "unsafe");
    if (moduli) s << ", fibre endpoint residual " << fmt(doc["fiber"]["endpoint_residual"].get<double>());
    r.summary = s.str();

    std::ostringstream csv;
    csv << "segment,t\n";
    for (std::size_t k = 0; k < base.segment_samples.size(); ++k)
        for (double t : base.segment_samples[k]) csv << k << ',' << csv_number(t) << '\n';
    r.files["samples.csv"] = csv.str();
    return r;
}

CensusRecord census(int n, long trials, const HopfParameter& h, std::uint64_t seed, unsigned threads,
                    std::vector<GraphDivisor>* corpus) {
    if (n < 1 || trials < 1) throw Error(ErrorKind::Precondition, "census needs n >= 1 and trials >= 1");
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    std::vector<int> stratum(static_cast<std::size_t>(trials));
    std::vector<char> irregular(static_cast<std::size_t>(trials));
    std::vector<std::optional<GraphDivisor>> drawn(corpus ? trials : 0);

    const auto work = [&](unsigned w) {
        for (long i = w; i < trials; i += threads) {
            Rng rng(seed, "census", static_cast<std::uint64_t>(i));
            const Coeffs a = rng.complex_normal_vector(n + 1), b = rng.complex_normal_vector(n + 1);
            const GraphDivisor d(a, b);
            const int k = stratify(d).k;
            stratum[i] = k;
            irregular[i] = k == 0 && !is_regular(d, h);
            if (corpus) drawn[i] = d;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();

    CensusRecord rec;
    rec.n = n;
    rec.trials = trials;
    rec.counts.assign(n + 1, 0);
    for (long i = 0; i < trials; ++i) {
        ++rec.counts[stratum[i]];
        rec.irregular += irregular[i];
    }
    rec.regular_fraction = static_cast<double>(rec.counts[0] - rec.irregular) / trials;
    if (corpus)
        for (auto& d : drawn) corpus->push_back(std::move(*d));
    return rec;
}

std::vector<LimitSample> limit_family(int n, const HopfParameter& h, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::Precondition, "limit family needs n >= 1");
    Rng rng(seed, "limit");
    const Coeffs a = rng.complex_normal_vector(n), b = rng.complex_normal_vector(n);
    const Coeffs bt = coeffs::multiply(Coeffs{1.0, -1.0}, b);
    std::vector<LimitSample> out;
    for (int k = 4; k <= 17; ++k) {
        const double gap = k <= 16 ? std::pow(10.0, -0.5 * k) : 0.0;
        const double t = 1.0 - gap;
        const GraphDivisor d(coeffs::multiply(Coeffs{1.0, -t}, a), bt);
        out.push_back({t, gap, stratify(d).k, regularity_margin(d, h), d});
    }
    return out;
}

CommandResult cmd_sample(const RunConfig& cfg) {
    CommandResult r;
    json& doc = r.document = document(cfg);
    doc["hopf"] = io::encode(cfg.hopf);
    std::vector<GraphDivisor> corpus;
    if (cfg.mode == "limit") {
        const auto family = limit_family(cfg.n, cfg.hopf, cfg.seed);
        json rows = json::array();
        std::ostringstream csv;
        csv << "k,t,one_minus_t,jumps,margin\n";
        bool monotone = true, jump_free = true;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const auto& s = family[i];
            rows.push_back({{"t", s.t}, {"one_minus_t", s.one_minus_t}, {"jumps", s.jumps}, {"margin", s.margin},
                            {"divisor", io::encode(s.divisor)}});
            csv << i + 4 << ',' << csv_number(s.t) << ',' << csv_number(s.one_minus_t) << ',' << s.jumps << ','
                << csv_number(s.margin) << '\n';
            if (i > 0 && s.margin > family[i - 1].margin) monotone = false;
            if (s.t < 1.0 && s.jumps != 0) jump_free = false;
            corpus.push_back(s.divisor);
        }
        doc["limit"] = {{"family", "A_t = (x0 - t x1) a(x), B = (x0 - x1) b(x)"},
                        {"samples", rows},
                        {"margins_monotone", monotone},
                        {"jump_free_before_limit", jump_free},
                        {"limit_jumps", family.back().jumps},
                        {"last_margin_before_limit", family[family.size() - 2].margin}};
        r.files["limit.csv"] = csv.str();
        std::ostringstream s;
        s << "limit family: " << family.size() << " samples, margins " << (monotone ? "" : "not ")
          << "monotone, " << family.back().jumps << " jump(s) at t = 1";
        r.summary = s.str();
    } else {
        const CensusRecord c = census(cfg.n, cfg.samples, cfg.hopf, cfg.seed, thread_count(),
                                      cfg.corpus ? &corpus : nullptr);
        doc["census"] = {{"n", c.n},
                         {"trials", c.trials},
                         {"counts", c.counts},
                         {"irregular", c.irregular},
                         {"regular_fraction", c.regular_fraction}};
        std::ostringstream s;
        s << "census n = " << c.n << ": " << c.trials << " trials, S_0 " << c.counts[0] << ", irregular "
          << c.irregular << ", regular fraction " << c.regular_fraction;
        r.summary = s.str();
    }
    if (!corpus.empty()) {
        json divisors = json::array();
        for (const auto& d : corpus) divisors.push_back(io::encode(d));
        r.files["corpus.json"] =
            json{{"schema", io::kSchema}, {"seed", cfg.seed}, {"mode", cfg.mode}, {"divisors", divisors}}.dump() +
            "\n";
    }
    return r;
}

CommandResult cmd_periods(const RunConfig& cfg) {
    const GraphDivisor d = io::decode_divisor(cfg.divisor);
    if (d.n() < 1) throw Error(ErrorKind::Precondition, "periods needs n >= 1");
    const SpectralCurve s = spectral_curve(d, cfg.hopf);
    PeriodOptions opt;
    opt.quadrature_order = cfg.quadrature_order;
    opt.ordering_shift = cfg.ordering_shift;
    const PeriodData p = period_matrix(s, opt);

    CommandResult r;
    json& doc = r.document = document(cfg);
    doc["hopf"] = io::encode(cfg.hopf);
    doc["divisor"] = io::encode(d);
    doc["spectral_curve"] = io::encode(s);
    doc["periods"] = io::encode(p);
    const bool symmetric = p.symmetry_residual <= 1e-8, positive = p.min_imag_eigenvalue > 0.0;
    doc["riemann_relations"] = {{"symmetry_residual", p.symmetry_residual},
                                {"min_imag_eigenvalue", p.min_imag_eigenvalue},
                                {"symmetric", symmetric},
                                {"positive_definite", positive}};
    doc["j_invariant"] = p.genus == 1 ? io::encode(branch_j_invariant(s)) : json(nullptr);
    check(p.genus == 2 * d.n() - 1, "genus 2n - 1");
    check(symmetric && positive, "Riemann relations");

    std::ostringstream pts, paths;
    pts << "label,index,re,im\n";
    pts << "center,-1," << csv_number(p.center.real()) << ',' << csv_number(p.center.imag()) << '\n';
    paths << "ray,s,re,im\n";
    for (std::size_t i = 0; i < p.ordered_branch_points.size(); ++i) {
        const cplx e = p.ordered_branch_points[i];
        pts << "branch," << i << ',' << csv_number(e.real()) << ',' << csv_number(e.imag()) << '\n';
        for (int k = 0; k <= 16; ++k) {
            const double t = k / 16.0;
            const cplx z = p.center + t * (e - p.center);
            paths << i << ',' << csv_number(t) << ',' << csv_number(z.real()) << ',' << csv_number(z.imag()) << '\n';
        }
    }
    r.files["branch_points.csv"] = pts.str();
    r.files["integration_paths.csv"] = paths.str();

    std::ostringstream sum;
    sum << "genus " << p.genus << ", symmetry residual " << fmt(p.symmetry_residual) << ", min eig Im tau "
        << fmt(p.min_imag_eigenvalue);
    if (p.genus == 1) sum << ", j " << fmt(branch_j_invariant(s).real());
    r.summary = sum.str();
    return r;
}

CommandResult run_command(const RunConfig& cfg) {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "connect") return cmd_connect(cfg);
    if (cfg.command == "sample") return cmd_sample(cfg);
    if (cfg.command == "periods") return cmd_periods(cfg);
    bad("unknown command '" + cfg.command + "'");
}

unsigned thread_count() {
    if (const char* env = std::getenv("HOPF_MODULI_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string inputs_hash(const std::vector<std::string>& blobs) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& b : blobs) {
        h = splitmix64(h ^ fnv1a(b));
        h ^= b.size();
    }
    std::ostringstream s;
    s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

fs::path persist_run(const fs::path& root, const std::string& command, const json& config_record,
                     const CommandResult* result, const json* error) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
    const fs::path runs = root / "runs";
    fs::create_directories(runs);
    fs::path dir = runs / (std::string(stamp) + "-" + command);
    for (int k = 2; !fs::create_directory(dir); ++k) dir = runs / (std::string(stamp) + "-" + command + "-" + std::to_string(k));

    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        out << text;
        if (!out) throw Error(ErrorKind::Precondition, "cannot write " + (dir / name).string());
    };
    write("config.json", config_record.dump(2) + "\n");
    if (result) {
        write(command + ".json", result->document.dump(2) + "\n");
        for (const auto& [name, text] : result->files) write(name, text);
    }
    if (error) write("error.json", error->dump(2) + "\n");
    return dir;
}

int run_tool(const std::string& command, const fs::path& config_path, std::optional<std::uint64_t> seed,
             const fs::path& out_root, std::ostream& out, std::ostream& err) {
    json record = {{"schema", io::kSchema}, {"command", command}, {"config_file", config_path.string()}};
    const auto fail = [&](ErrorKind kind, const std::string& what) {
        err << "hopf-moduli " << command << ": " << what << '\n';
        const json e = {{"schema", io::kSchema}, {"exit_code", static_cast<int>(kind)}, {"message", what}};
        try {
            err << "run directory: " << persist_run(out_root, command, record, nullptr, &e).string() << '\n';
        } catch (const std::exception&) {
        }
        return static_cast<int>(kind);
    };
    try {
        const std::string text = read_file(config_path);
        RunConfig cfg = parse_run_config(parse_text(text, config_path.string()), command,
                                         config_path.parent_path().empty() ? fs::path(".") : config_path.parent_path());
        if (seed) cfg.seed = *seed;
        std::vector<std::string> blobs{text};
        for (const auto& f : cfg.input_files) blobs.push_back(read_file(f));
        if (seed) blobs.push_back("seed=" + std::to_string(*seed));
        record["config"] = encode(cfg);
        record["inputs_hash"] = inputs_hash(blobs);

        const CommandResult result = run_command(cfg);
        const fs::path dir = persist_run(out_root, command, record, &result);
        out << result.summary << '\n' << "run directory: " << dir.string() << '\n';
        return 0;
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const json::exception& e) {
        return fail(ErrorKind::Parse, e.what());
    } catch (const fs::filesystem_error& e) {
        return fail(ErrorKind::Precondition, e.what());
    } catch (const std::exception& e) {
        return fail(ErrorKind::Invariant, e.what());
    }
}

}  // namespace hopf
