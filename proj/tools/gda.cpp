#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gda/aztec.hpp"
#include "gda/io.hpp"
#include "gda/polymer.hpp"
#include "gda/render.hpp"
#include "gda/stats.hpp"
#include "gda/suite.hpp"

namespace fs = std::filesystem;
using namespace gda;

namespace {

constexpr const char* tool_version = "0.1.0";

// Exit status for failed statistical checks.
struct TestFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ParamOptions
{
    double alpha = 0.0;
    double beta = 0.0;
    std::string params;
    bool has_alpha = false;
    bool has_beta = false;
};

void add_param_options(CLI::App* app, ParamOptions& p)
{
    app->add_option("--alpha", p.alpha, "psi = alpha everywhere");
    app->add_option("--beta", p.beta, "phi = beta everywhere");
    app->add_option("--params", p.params, "ParamSet JSON, inline or a file path");
}

ParamSet resolve_params(const ParamOptions& o, CLI::App* app)
{
    const bool a = app->count("--alpha") > 0, b = app->count("--beta") > 0;
    if (!o.params.empty()) {
        if (a || b)
            throw std::invalid_argument("use either --alpha/--beta or --params");
        const std::string text = o.params.front() == '{' ? o.params : read_file(o.params);
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw std::invalid_argument(std::string("bad --params JSON: ") + e.what());
        }
        return params_from_json(j);
    }
    if (!a || !b)
        throw std::invalid_argument("--alpha and --beta are required");
    if (!(o.alpha > 0) || !(o.beta > 0))
        throw std::invalid_argument("--alpha and --beta must be positive");
    return ParamSet::homogeneous(o.alpha, o.beta);
}

// Output directory staged at <out>.partial and renamed on success.
class RunDir
{
    public:
        explicit RunDir(const std::string& out) : final_(out), stage_(out + ".partial")
        {
            fs::remove_all(stage_);
            fs::create_directories(stage_);
        }
        ~RunDir()
        {
            if (!committed_) {
                std::error_code ec;
                fs::remove_all(stage_, ec);
            }
        }
        RunDir(const RunDir&) = delete;
        RunDir& operator=(const RunDir&) = delete;

        void write(const std::string& name, const std::string& content)
        {
            const fs::path p = stage_ / name;
            fs::create_directories(p.parent_path());
            write_file_atomic(p.string(), content);
            files_.push_back(name);
        }
        void commit(const Json& config, const std::string& command, const std::vector<std::uint64_t>& seeds)
        {
            write("config.json", config.dump(2) + "\n");
            std::sort(files_.begin(), files_.end());
            Json m;
            m["tool"] = "gda";
            m["version"] = tool_version;
            m["compiler"] = __VERSION__;
            m["command"] = command;
            m["seeds"] = seeds;
            m["files"] = files_;
            write_file_atomic((stage_ / "manifest.json").string(), m.dump(2) + "\n");
            fs::rename(stage_, final_);
            committed_ = true;
        }

    private:
        fs::path final_, stage_;
        std::vector<std::string> files_;
        bool committed_ = false;
};

void check_out_dir(const std::string& out)
{
    if (out.empty())
        throw std::invalid_argument("--out is required");
    if (fs::exists(out))
        throw std::invalid_argument("output directory '" + out + "' already exists");
}

void check_format(const std::string& f)
{
    if (f != "csv" && f != "jsonl")
        throw std::invalid_argument("--format must be csv or jsonl");
}

// Runs job(i) for i in [0, count) on `threads` workers.
void parallel_for(long count, int threads, const std::function<void(long)>& job)
{
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto worker = [&]() {
        for (long i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err)
                    err = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, threads); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

std::string slice_text(const SliceSet& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? " " : "") + std::to_string(s[i]);
    return out;
}

std::string format_reports(const std::vector<TestReport>& reports, const std::string& format)
{
    return format == "csv" ? summary_csv(reports) : to_jsonl(reports);
}

void finish_reports(const std::vector<TestReport>& reports)
{
    bool ok = true;
    for (const auto& r : reports) {
        std::printf("[%s] %s statistic=%g threshold=%g\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.statistic,
                    r.threshold);
        ok = ok && r.pass;
    }
    if (!ok)
        throw TestFailure("one or more checks failed");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gamma-disordered Aztec diamond toolkit"};
    app.require_subcommand(1);

    ParamOptions po;
    int n = 0;
    long replicas = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string format = "csv";
    std::vector<int> slices;

    auto* sample = app.add_subcommand("sample", "Sample matchings by shuffling");
    add_param_options(sample, po);
    sample->add_option("--n", n, "Aztec diamond size")->required();
    sample->add_option("--replicas", replicas, "number of samples");
    sample->add_option("--seed", seed, "base seed; replica r uses seed + r");
    sample->add_option("--threads", threads, "worker threads");
    sample->add_option("--out", out, "run directory")->required();
    sample->add_option("--format", format, "csv or jsonl");
    sample->add_option("--slice", slices, "also record vertical and horizontal slices at these columns");

    std::vector<std::string> inputs;
    bool double_dimer = false;
    auto* render = app.add_subcommand("render", "Render a matching as SVG");
    add_param_options(render, po);
    render->add_option("--input", inputs, "matching text file(s)");
    render->add_option("--n", n, "size when sampling");
    render->add_option("--seed", seed, "seed when sampling");
    render->add_flag("--double-dimer", double_dimer, "draw the symmetric difference of two matchings");
    render->add_option("--out", out, "run directory")->required();

    std::string suite;
    std::string config_path;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "oracle or matchings")->required();
    verify->add_option("--config", config_path, "suite config JSON");
    verify->add_option("--seed", seed, "seed");
    verify->add_option("--replicas", replicas, "samples per side for annealed tests");
    verify->add_option("--out", out, "run directory")->required();
    verify->add_option("--format", format, "summary format: csv or jsonl");

    std::string model;
    long envs = 1000;
    auto* polymer = app.add_subcommand("polymer", "Sample polymer crossing statistics");
    add_param_options(polymer, po);
    polymer->add_option("--model", model, "stat-loggamma, stat-strictweak or rwre")->required();
    polymer->add_option("--n", n, "size")->required();
    polymer->add_option("--envs", envs, "number of environments");
    polymer->add_option("--seed", seed, "base seed; environment e uses seed + e");
    polymer->add_option("--threads", threads, "worker threads");
    polymer->add_option("--out", out, "run directory")->required();
    polymer->add_option("--format", format, "csv or jsonl");

    std::vector<double> temps{1.0};
    std::vector<int> sizes;
    auto* free_energy = app.add_subcommand("free-energy", "Free energy formulas and Monte Carlo");
    add_param_options(free_energy, po);
    free_energy->add_option("--n", n, "size");
    free_energy->add_option("--sizes", sizes, "sizes, comma separated")->delimiter(',');
    free_energy->add_option("--T", temps, "temperatures")->delimiter(',');
    free_energy->add_option("--replicas", replicas, "Monte Carlo replicas, 0 for formulas only");
    free_energy->add_option("--seed", seed, "seed");
    free_energy->add_option("--out", out, "run directory")->required();
    free_energy->add_option("--format", format, "csv or jsonl");

    std::string control;
    auto* characterize = app.add_subcommand("characterize", "Shuffle independence probes");
    characterize->add_option("--control", control, "lognormal or gamma")->required();
    characterize->add_option("--replicas", replicas, "replicas");
    characterize->add_option("--seed", seed, "seed");
    characterize->add_option("--out", out, "run directory")->required();
    characterize->add_option("--format", format, "csv or jsonl");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        check_format(format);
        if (threads < 1)
            throw std::invalid_argument("--threads must be positive");

        if (sample->parsed()) {
            const ParamSet params = resolve_params(po, sample);
            if (n < 1)
                throw std::invalid_argument("--n must be positive");
            if (replicas < 1)
                throw std::invalid_argument("--replicas must be positive");
            for (int l : slices)
                if (l < 1 || l > n)
                    throw std::invalid_argument("--slice must lie in 1..n");
            params.validate(n, 0.05);
            check_out_dir(out);

            std::vector<Matching> ms(static_cast<std::size_t>(replicas));
            parallel_for(replicas, threads, [&](long r) {
                RngStream rng(seed + static_cast<std::uint64_t>(r));
                ms[static_cast<std::size_t>(r)] = sample_matching_low_memory(sample_weight_field(params, n, rng), rng);
            });
            RunDir dir(out);
            std::string table;
            if (format == "csv") {
                table = "n,seed,T_north,T_east,T_south,T_west";
                for (int l : slices)
                    table += ",vertical_" + std::to_string(l) + ",horizontal_" + std::to_string(l);
                table += "\n";
            }
            std::vector<std::uint64_t> seeds;
            for (long r = 0; r < replicas; ++r) {
                const Matching& m = ms[static_cast<std::size_t>(r)];
                const std::uint64_t s = seed + static_cast<std::uint64_t>(r);
                seeds.push_back(s);
                const TurningPoints tp = turning_points(m);
                if (format == "csv") {
                    std::ostringstream os;
                    os << n << ',' << s << ',' << tp.north << ',' << tp.east << ',' << tp.south << ',' << tp.west;
                    for (int l : slices)
                        os << ',' << slice_text(vertical_slice(m, l)) << ',' << slice_text(horizontal_slice(m, l));
                    table += os.str() + "\n";
                } else {
                    Json j{{"n", n}, {"seed", s}, {"T_north", tp.north}, {"T_east", tp.east},
                           {"T_south", tp.south}, {"T_west", tp.west}};
                    for (int l : slices) {
                        j["vertical_" + std::to_string(l)] = vertical_slice(m, l);
                        j["horizontal_" + std::to_string(l)] = horizontal_slice(m, l);
                    }
                    table += j.dump() + "\n";
                }
                dir.write("matchings/replica_" + std::to_string(r) + ".txt", to_text(m));
            }
            dir.write("observables." + format, table);
            Json cfg{{"command", "sample"}, {"params", to_json(params)}, {"n", n}, {"replicas", replicas},
                     {"seed", seed}, {"threads", threads}, {"format", format}, {"slices", slices}};
            dir.commit(cfg, "sample", seeds);
            return 0;
        }

        if (render->parsed()) {
            if (inputs.size() > 2)
                throw std::invalid_argument("at most two --input files");
            if (!double_dimer && inputs.size() > 1)
                throw std::invalid_argument("two inputs need --double-dimer");
            if (double_dimer && inputs.size() == 1)
                throw std::invalid_argument("--double-dimer needs two inputs or a sample spec");
            std::vector<Matching> ms;
            Json cfg{{"command", "render"}, {"double_dimer", double_dimer}};
            if (inputs.empty()) {
                const ParamSet params = resolve_params(po, render);
                if (n < 1)
                    throw std::invalid_argument("--n must be positive");
                params.validate(n, 0.05);
                check_out_dir(out);
                RngStream rng(seed);
                const WeightFieldd w = sample_weight_field(params, n, rng);
                ms.push_back(sample_matching_low_memory(w, rng));
                if (double_dimer)
                    ms.push_back(sample_matching_low_memory(w, rng));
                cfg["params"] = to_json(params);
                cfg["n"] = n;
                cfg["seed"] = seed;
            } else {
                for (const auto& f : inputs) {
                    Matching m = matching_from_text(read_file(f));
                    if (!validate(m))
                        throw std::invalid_argument("'" + f + "' is not a perfect matching");
                    ms.push_back(std::move(m));
                }
                if (ms.size() == 2 && ms[0].n() != ms[1].n())
                    throw std::invalid_argument("double-dimer matchings have mismatched sizes");
                check_out_dir(out);
                cfg["inputs"] = inputs;
            }
            const std::string svg = double_dimer ? render_double_dimer_svg(ms[0], ms[1]) : render_svg(ms[0]);
            RunDir dir(out);
            dir.write("render.svg", svg);
            dir.commit(cfg, "render", {seed});
            return 0;
        }

        if (verify->parsed()) {
            if (suite != "oracle" && suite != "matchings")
                throw std::invalid_argument("unknown suite '" + suite + "'");
            SuiteConfig sc;
            if (!config_path.empty()) {
                try {
                    sc = suite_config_from_json(Json::parse(read_file(config_path)));
                } catch (const Json::exception& e) {
                    throw std::invalid_argument(std::string("bad suite config: ") + e.what());
                }
            } else {
                sc.tests = match_test_names();
                sc.seed = seed;
                if (verify->count("--replicas"))
                    sc.replicas = replicas;
                validate_suite_config(sc);
            }
            check_out_dir(out);
            const std::vector<TestReport> reports = suite == "oracle" ? oracle_suite(sc.seed) : match_suite(sc);
            {
                RunDir dir(out);
                dir.write("reports.jsonl", to_jsonl(reports));
                dir.write("summary.csv", summary_csv(reports));
                Json cfg{{"command", "verify"}, {"suite", suite}, {"config", to_json(sc)}};
                dir.commit(cfg, "verify", {sc.seed});
            }
            finish_reports(reports);
            return 0;
        }

        if (polymer->parsed()) {
            if (model != "stat-loggamma" && model != "stat-strictweak" && model != "rwre")
                throw std::invalid_argument("unknown model '" + model + "'");
            const ParamSet params = resolve_params(po, polymer);
            if (!params.psi.is_constant() || !params.phi.is_constant() || params.theta(1) != 0.0)
                throw std::invalid_argument("polymer models take homogeneous --alpha/--beta");
            const double alpha = params.psi(1), beta = params.phi(0);
            if (n < 1 || n > 4096)
                throw std::invalid_argument("--n must lie in 1..4096");
            if (envs < 1)
                throw std::invalid_argument("--envs must be positive");
            check_out_dir(out);
            std::vector<CrossingRow> rows(static_cast<std::size_t>(envs));
            parallel_for(envs, threads, [&](long e) {
                CrossingRow& row = rows[static_cast<std::size_t>(e)];
                row.n = n;
                row.alpha = alpha;
                row.beta = beta;
                row.seed = seed + static_cast<std::uint64_t>(e);
                RngStream rng(row.seed);
                if (model == "rwre") {
                    row.stats.x_mid = -beta_rwre(params, n, rng).back() - 1;
                    return;
                }
                const StatPolymerEnv env = model == "stat-loggamma" ? stat_loggamma(n, alpha, beta, rng)
                                                                    : stat_strictweak(n, alpha, beta, rng);
                const UpRightPath path = sample_path_backward(env, n, n, rng);
                row.stats = crossings(path, n, n / 2, n / 2);
            });
            std::string table = format == "csv" ? crossing_csv_header() : "";
            std::vector<std::uint64_t> seeds;
            for (const auto& r : rows) {
                seeds.push_back(r.seed);
                if (format == "csv")
                    table += to_csv(r);
                else
                    table += Json{{"n", r.n}, {"alpha", r.alpha}, {"beta", r.beta}, {"x_mid", r.stats.x_mid},
                                  {"v0", r.stats.v0}, {"v1", r.stats.v1}, {"w0", r.stats.w0}, {"w1", r.stats.w1},
                                  {"seed", r.seed}}.dump() + "\n";
            }
            RunDir dir(out);
            dir.write("crossings." + format, table);
            Json cfg{{"command", "polymer"}, {"model", model}, {"alpha", alpha}, {"beta", beta}, {"n", n},
                     {"envs", envs}, {"seed", seed}, {"threads", threads}, {"format", format}};
            dir.commit(cfg, "polymer", {seed});
            return 0;
        }

        if (free_energy->parsed()) {
            const ParamSet params = resolve_params(po, free_energy);
            if (sizes.empty()) {
                if (n < 1)
                    throw std::invalid_argument("--n or --sizes is required");
                sizes = {n};
            }
            for (int s : sizes) {
                if (s < 1)
                    throw std::invalid_argument("sizes must be positive");
                params.validate(s);
            }
            for (double t : temps)
                if (!(t > 0))
                    throw std::invalid_argument("--T must be positive");
            if (replicas != 0 && replicas < 1000)
                throw std::invalid_argument("--replicas must be 0 or at least 1000");
            check_out_dir(out);
            std::vector<FreeEnergyReport> reps;
            std::uint64_t stream = 0;
            for (int s : sizes)
                for (double t : temps) {
                    RngStream rng(seed, stream++);
                    reps.push_back(replicas ? free_energy_mc(params, s, t, replicas, rng)
                                            : free_energy_formulas(params, s, t));
                }
            std::string table;
            if (format == "csv") {
                const Json first = to_json(reps.front());
                std::string head;
                for (const auto& item : first.items())
                    head += (head.empty() ? "" : ",") + item.key();
                table = head + "\n";
                for (const auto& r : reps) {
                    std::string line;
                    const Json row = to_json(r);
                    for (const auto& item : row.items()) {
                        const std::string v = item.value().is_string() ? "\"" + item.value().get<std::string>() + "\""
                                                                       : item.value().dump();
                        line += (line.empty() ? "" : ",") + v;
                    }
                    table += line + "\n";
                }
            } else {
                for (const auto& r : reps)
                    table += to_json(r).dump() + "\n";
            }
            RunDir dir(out);
            dir.write("free_energy." + format, table);
            Json cfg{{"command", "free-energy"}, {"params", to_json(params)}, {"sizes", sizes}, {"T", temps},
                     {"replicas", replicas}, {"seed", seed}, {"format", format}};
            dir.commit(cfg, "free-energy", {seed});
            return 0;
        }

        if (characterize->parsed()) {
            if (control != "lognormal" && control != "gamma")
                throw std::invalid_argument("unknown control '" + control + "'");
            if (!characterize->count("--replicas"))
                replicas = 100000;
            if (replicas < 100)
                throw std::invalid_argument("--replicas must be at least 100");
            check_out_dir(out);
            const TestReport r = control == "lognormal" ? check_lognormal_control(seed, replicas)
                                                        : check_gamma_preservation(seed, replicas);
            {
                RunDir dir(out);
                dir.write("report." + format, format_reports({r}, format));
                Json cfg{{"command", "characterize"}, {"control", control}, {"replicas", replicas},
                         {"seed", seed}, {"format", format}};
                dir.commit(cfg, "characterize", {seed});
            }
            finish_reports({r});
            return 0;
        }
    } catch (const TestFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
