// eyesim command-line tool: sweeps, witness reports, Bell runs and
// oracle verification for amplified single-photon qubits viewed by
// threshold (eye-model) detectors.
//
// Exit codes: 0 ok, 1 check failure, 2 usage/config error, 3 numerical
// failure.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eyesim/bell.hpp"
#include "eyesim/errors.hpp"
#include "eyesim/eye.hpp"
#include "eyesim/fock_oracle.hpp"
#include "eyesim/sweep.hpp"
#include "eyesim/verify.hpp"
#include "eyesim/witness.hpp"

namespace {

using eyesim::GainParams;
using eyesim::LossChannel;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 12 significant digits, '.' separator, no locale dependence.
std::string fmt12(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

int write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "eyesim: cannot open output file '" << path << "'\n";
        return kExitUsage;
    }
    out << content;
    return out ? kExitOk : kExitUsage;
}

// --- plain key=value config files; command-line flags win -----------------

using ConfigMap = std::map<std::string, std::string>;

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file '" + path + "'");
    ConfigMap cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw usage_error("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = strip(t.substr(0, eq));
        const std::string val = strip(t.substr(eq + 1));
        if (key.empty()) throw usage_error("config line " + std::to_string(lineno) + ": empty key");
        cfg[key] = val;
    }
    return cfg;
}

double parse_double(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw usage_error("config key '" + key + "': cannot parse '" + val + "' as a number");
    }
}

long parse_long(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw usage_error("config key '" + key + "': cannot parse '" + val + "' as an integer");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& val) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw usage_error("config key '" + key + "': empty list");
    return out;
}

void require_format(const std::string& format) {
    if (format != "csv" && format != "json")
        throw usage_error("format must be csv or json, got '" + format + "'");
}

/// Applies config values for options the user did not pass on the command
/// line, then rejects unrecognized keys.
class ConfigApplier {
  public:
    ConfigApplier(const CLI::App& cmd, ConfigMap cfg) : cmd_(cmd), cfg_(std::move(cfg)) {}

    void number(const std::string& key, double& var) {
        if (const auto* v = lookup(key)) var = parse_double(key, *v);
    }
    void integer(const std::string& key, int& var) {
        if (const auto* v = lookup(key)) var = static_cast<int>(parse_long(key, *v));
    }
    void integer(const std::string& key, long& var) {
        if (const auto* v = lookup(key)) var = parse_long(key, *v);
    }
    void unsigned64(const std::string& key, std::uint64_t& var) {
        if (const auto* v = lookup(key)) var = static_cast<std::uint64_t>(parse_long(key, *v));
    }
    void text(const std::string& key, std::string& var) {
        if (const auto* v = lookup(key)) var = *v;
    }
    void numbers(const std::string& key, std::vector<double>& var) {
        if (const auto* v = lookup(key)) var = parse_double_list(key, *v);
    }
    void flag(const std::string& key, bool& var) {
        if (const auto* v = lookup(key)) {
            if (*v == "true" || *v == "1")
                var = true;
            else if (*v == "false" || *v == "0")
                var = false;
            else
                throw usage_error("config key '" + key + "': expected true/false");
        }
    }

    void finish() const {
        for (const auto& [key, value] : cfg_)
            if (!seen_.count(key)) throw usage_error("config key '" + key + "' is not recognized here");
    }

  private:
    const std::string* lookup(const std::string& key) {
        seen_.insert(key);
        const auto it = cfg_.find(key);
        if (it == cfg_.end()) return nullptr;
        return cmd_.count("--" + key) == 0 ? &it->second : nullptr;
    }

    const CLI::App& cmd_;
    ConfigMap cfg_;
    std::set<std::string> seen_;
};

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    double n_min = 2.0, n_max = 2e4;
    int n_count = 200;
    std::vector<double> gains;
    std::vector<double> extra_loss{1.0};
    int theta = 7;
    double eta = 0.08;
    double tail_tol = 1e-12;
    std::string format = "csv";
    std::string output;
    std::string config;
};

std::string sweep_csv(const eyesim::SweepResult& result) {
    std::string out = "g,n_mean,epsilon,visibility,p_yn,p_ny,p_yy,p_nn,eta_total\n";
    for (const auto& r : result.rows) {
        out += fmt12(r.g) + ',' + fmt12(r.n_mean) + ',' + fmt12(r.epsilon) + ',';
        if (r.visibility) out += fmt12(*r.visibility);
        out += ',' + fmt12(r.p_yn) + ',' + fmt12(r.p_ny) + ',' + fmt12(r.p_yy) + ',' +
               fmt12(r.p_nn) + ',' + fmt12(r.eta_total) + '\n';
    }
    for (const auto& s : result.summaries) {
        out += "# summary eta_total=" + fmt12(s.eta_total) + " epsilon_max=" + fmt12(s.epsilon_max) +
               " n_mean_at_max=" + fmt12(s.n_mean_at_max) + " g_at_max=" + fmt12(s.g_at_max) + '\n';
    }
    return out;
}

json sweep_json(const eyesim::SweepResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        json row;
        row["g"] = r.g;
        row["n_mean"] = r.n_mean;
        row["epsilon"] = r.epsilon;
        row["visibility"] = r.visibility ? json(*r.visibility) : json(nullptr);
        row["p_yn"] = r.p_yn;
        row["p_ny"] = r.p_ny;
        row["p_yy"] = r.p_yy;
        row["p_nn"] = r.p_nn;
        row["eta_total"] = r.eta_total;
        rows.push_back(std::move(row));
    }
    json summaries = json::array();
    for (const auto& s : result.summaries) {
        json item;
        item["eta_total"] = s.eta_total;
        item["epsilon_max"] = s.epsilon_max;
        item["n_mean_at_max"] = s.n_mean_at_max;
        item["g_at_max"] = s.g_at_max;
        summaries.push_back(std::move(item));
    }
    return json{{"rows", std::move(rows)}, {"summary", std::move(summaries)}};
}

int run_sweep_cmd(const CLI::App& cmd, SweepArgs args) {
    if (!args.config.empty()) {
        ConfigApplier cfg(cmd, load_config(args.config));
        cfg.number("n-min", args.n_min);
        cfg.number("n-max", args.n_max);
        cfg.integer("n-count", args.n_count);
        cfg.numbers("g", args.gains);
        cfg.numbers("extra-loss", args.extra_loss);
        cfg.integer("theta", args.theta);
        cfg.number("eta", args.eta);
        cfg.number("tail-tol", args.tail_tol);
        cfg.text("format", args.format);
        cfg.text("output", args.output);
        cfg.finish();
    }
    require_format(args.format);

    eyesim::SweepConfig config;
    config.explicit_g = args.gains;
    config.n_min = args.n_min;
    config.n_max = args.n_max;
    config.n_count = args.n_count;
    config.detector = eyesim::ThresholdDetector(args.theta, args.eta);
    config.extra_transmissions = args.extra_loss;
    config.tail_tol = args.tail_tol;

    const auto result = eyesim::run_sweep(config);
    const std::string text =
        args.format == "json" ? sweep_json(result).dump(2) + '\n' : sweep_csv(result);
    return write_output(args.output, text);
}

// --- witness ---------------------------------------------------------------

struct WitnessArgs {
    double g = 0.0;
    double eta = 0.08;
    bool verify = false;
    std::string format = "json";
    std::string output;
    std::string config;
};

int run_witness_cmd(const CLI::App& cmd, WitnessArgs args) {
    if (!args.config.empty()) {
        ConfigApplier cfg(cmd, load_config(args.config));
        cfg.number("g", args.g);
        cfg.number("eta", args.eta);
        cfg.flag("verify", args.verify);
        cfg.text("format", args.format);
        cfg.text("output", args.output);
        cfg.finish();
    }
    require_format(args.format);

    const GainParams gain(args.g);
    const LossChannel loss(args.eta);
    const auto report = eyesim::witness_closed_form(gain, loss);

    std::optional<eyesim::WitnessReport> brute;
    double max_diff = 0.0;
    bool verified = true;
    if (args.verify) {
        const int n_trunc = eyesim::oracle::truncation_for(gain, 1e-13);
        brute = eyesim::oracle::witness_oracle(gain, loss, n_trunc);
        max_diff = std::max({std::fabs(report.jz_sz - brute->jz_sz),
                             std::fabs(report.jx_sx - brute->jx_sx),
                             std::fabs(report.jy_sy - brute->jy_sy),
                             std::fabs(report.n_a - brute->n_a),
                             std::fabs(report.margin - brute->margin)});
        verified = max_diff < 1e-8;
    }

    std::string text;
    if (args.format == "csv") {
        text = "g,eta,jz_sz,jx_sx,jy_sy,n_a,lhs,rhs,margin";
        if (args.verify) text += ",oracle_margin,max_abs_diff,verified";
        text += '\n';
        text += fmt12(args.g) + ',' + fmt12(args.eta) + ',' + fmt12(report.jz_sz) + ',' +
                fmt12(report.jx_sx) + ',' + fmt12(report.jy_sy) + ',' + fmt12(report.n_a) + ',' +
                fmt12(report.lhs) + ',' + fmt12(report.rhs) + ',' + fmt12(report.margin);
        if (args.verify)
            text += ',' + fmt12(brute->margin) + ',' + fmt12(max_diff) + ',' +
                    (verified ? "true" : "false");
        text += '\n';
    } else {
        json doc;
        doc["g"] = args.g;
        doc["eta"] = args.eta;
        doc["jz_sz"] = report.jz_sz;
        doc["jx_sx"] = report.jx_sx;
        doc["jy_sy"] = report.jy_sy;
        doc["n_a"] = report.n_a;
        doc["lhs"] = report.lhs;
        doc["rhs"] = report.rhs;
        doc["margin"] = report.margin;
        if (args.verify) {
            doc["oracle"] = {{"jz_sz", brute->jz_sz}, {"jx_sx", brute->jx_sx},
                             {"jy_sy", brute->jy_sy}, {"n_a", brute->n_a},
                             {"margin", brute->margin}};
            doc["max_abs_diff"] = max_diff;
            doc["verified"] = verified;
        }
        text = doc.dump(2) + '\n';
    }

    const int rc = write_output(args.output, text);
    if (rc != kExitOk) return rc;
    return verified ? kExitOk : kExitCheckFailure;
}

// --- bell ------------------------------------------------------------------

struct BellArgs {
    double g = -1.0;
    double n_mean = -1.0;
    int theta = 7;
    double eta = 0.08;
    double extra_loss = 1.0;
    double tail_tol = 1e-12;
    long trials = 1'000'000;
    std::uint64_t seed = 12345;
    std::vector<double> angles;
    std::string format = "json";
    std::string output;
    std::string config;
};

int run_bell_cmd(const CLI::App& cmd, BellArgs args) {
    if (!args.config.empty()) {
        ConfigApplier cfg(cmd, load_config(args.config));
        cfg.number("g", args.g);
        cfg.number("n-mean", args.n_mean);
        cfg.integer("theta", args.theta);
        cfg.number("eta", args.eta);
        cfg.number("extra-loss", args.extra_loss);
        cfg.number("tail-tol", args.tail_tol);
        cfg.integer("trials", args.trials);
        cfg.unsigned64("seed", args.seed);
        cfg.numbers("angles", args.angles);
        cfg.text("format", args.format);
        cfg.text("output", args.output);
        cfg.finish();
    }
    require_format(args.format);
    if (args.g < 0.0 && args.n_mean < 0.0)
        throw usage_error("bell: give the working point as --g or --n-mean");
    if (args.g >= 0.0 && args.n_mean >= 0.0)
        throw usage_error("bell: --g and --n-mean are mutually exclusive");
    if (!args.angles.empty() && args.angles.size() != 4)
        throw usage_error("bell: --angles needs exactly four values (a1 a2 b1 b2)");

    const double g = args.g >= 0.0 ? args.g : eyesim::gain_for_mean(args.n_mean);
    const GainParams gain(g);
    const eyesim::ThresholdDetector detector(args.theta, args.eta);
    const auto stats = eyesim::joint_stats(gain, detector, args.extra_loss, args.tail_tol);

    eyesim::BellSettings settings;
    if (!args.angles.empty()) {
        settings.alice = {args.angles[0], args.angles[1]};
        settings.bob = {args.angles[2], args.angles[3]};
    }
    const auto mc = eyesim::simulate_trials(args.trials, stats, settings, args.seed);
    const std::optional<double> s_analytic =
        stats.visibility ? std::optional<double>(eyesim::chsh_value(*stats.visibility))
                         : std::nullopt;

    std::string text;
    if (args.format == "csv") {
        text = "g,n_mean,theta,eta_total,epsilon,visibility,s_analytic,s_mc,std_error,"
               "conclusive_rate,n_trials,n_conclusive,seed\n";
        text += fmt12(g) + ',' + fmt12(stats.mean_n) + ',' + std::to_string(args.theta) + ',' +
                fmt12(args.eta * args.extra_loss) + ',' + fmt12(stats.epsilon) + ',';
        if (stats.visibility) text += fmt12(*stats.visibility);
        text += ',';
        if (s_analytic) text += fmt12(*s_analytic);
        text += ',' + fmt12(mc.s_value) + ',' + fmt12(mc.std_error) + ',' +
                fmt12(mc.conclusive_rate) + ',' + std::to_string(mc.n_trials) + ',' +
                std::to_string(mc.n_conclusive) + ',' + std::to_string(mc.seed) + '\n';
    } else {
        json doc;
        doc["g"] = g;
        doc["n_mean"] = stats.mean_n;
        doc["theta"] = args.theta;
        doc["eta_total"] = args.eta * args.extra_loss;
        doc["epsilon"] = stats.epsilon;
        doc["visibility"] = stats.visibility ? json(*stats.visibility) : json(nullptr);
        doc["s_analytic"] = s_analytic ? json(*s_analytic) : json(nullptr);
        doc["s_mc"] = mc.s_value;
        doc["std_error"] = mc.std_error;
        doc["conclusive_rate"] = mc.conclusive_rate;
        doc["n_trials"] = mc.n_trials;
        doc["n_conclusive"] = mc.n_conclusive;
        doc["seed"] = mc.seed;
        doc["settings"] = {{"alice", {settings.alice[0], settings.alice[1]}},
                           {"bob", {settings.bob[0], settings.bob[1]}}};
        doc["setting_correlators"] = mc.setting_correlators;
        text = doc.dump(2) + '\n';
    }
    return write_output(args.output, text);
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string level = "quick";
    std::string inject;
    std::string config;
};

int run_verify_cmd(const CLI::App& cmd, VerifyArgs args) {
    if (!args.config.empty()) {
        ConfigApplier cfg(cmd, load_config(args.config));
        cfg.text("level", args.level);
        cfg.finish();
    }
    if (args.level != "quick" && args.level != "full")
        throw usage_error("verify: --level must be quick or full");

    const auto level = args.level == "full" ? eyesim::VerifyLevel::full : eyesim::VerifyLevel::quick;
    const auto results = eyesim::run_verification(level, args.inject);

    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail << ")\n";
        if (!r.passed) ++failures;
    }
    std::cout << (failures == 0 ? "verification passed" : "verification FAILED") << ": "
              << results.size() - failures << "/" << results.size() << " checks ok\n";
    return failures == 0 ? kExitOk : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon statistics of amplified single-photon qubits seen by "
                 "threshold (eye-model) detectors"};
    app.require_subcommand(1);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Efficiency and visibility over a gain grid, with peak summary");
    sweep_cmd->add_option("--n-min", sweep.n_min, "Grid start, mean photon number");
    sweep_cmd->add_option("--n-max", sweep.n_max, "Grid end, mean photon number");
    sweep_cmd->add_option("--n-count", sweep.n_count, "Geometric grid size");
    sweep_cmd->add_option("--g", sweep.gains, "Explicit gain list (overrides the grid)");
    sweep_cmd->add_option("--extra-loss", sweep.extra_loss,
                          "Extra transmissions after the amplifier (one curve each)");
    sweep_cmd->add_option("--theta", sweep.theta, "Detector threshold");
    sweep_cmd->add_option("--eta", sweep.eta, "Detector transmission");
    sweep_cmd->add_option("--tail-tol", sweep.tail_tol, "Certified tail mass per distribution");
    sweep_cmd->add_option("--format", sweep.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--output", sweep.output, "Output path (default stdout)");
    sweep_cmd->add_option("--config", sweep.config, "key=value config file; flags win");

    WitnessArgs witness;
    auto* witness_cmd =
        app.add_subcommand("witness", "Micro-macro entanglement witness, closed form");
    witness_cmd->add_option("--g", witness.g, "Amplification gain")->required();
    witness_cmd->add_option("--eta", witness.eta, "Transmission of the macro side");
    witness_cmd->add_flag("--verify", witness.verify, "Cross-check against the Fock oracle");
    witness_cmd->add_option("--format", witness.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    witness_cmd->add_option("--output", witness.output, "Output path (default stdout)");
    witness_cmd->add_option("--config", witness.config, "key=value config file; flags win");

    BellArgs bell;
    auto* bell_cmd = app.add_subcommand(
        "bell", "CHSH analysis: analytic value plus a Monte Carlo event simulation");
    bell_cmd->add_option("--g", bell.g, "Amplification gain");
    bell_cmd->add_option("--n-mean", bell.n_mean, "Mean photon number (alternative to --g)");
    bell_cmd->add_option("--theta", bell.theta, "Detector threshold");
    bell_cmd->add_option("--eta", bell.eta, "Detector transmission");
    bell_cmd->add_option("--extra-loss", bell.extra_loss, "Extra transmission after the amplifier");
    bell_cmd->add_option("--tail-tol", bell.tail_tol, "Certified tail mass per distribution");
    bell_cmd->add_option("--trials", bell.trials, "Monte Carlo trials");
    bell_cmd->add_option("--seed", bell.seed, "RNG seed (std::mt19937_64)");
    bell_cmd->add_option("--angles", bell.angles, "Four equatorial angles: a1 a2 b1 b2")
        ->expected(4);
    bell_cmd->add_option("--format", bell.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    bell_cmd->add_option("--output", bell.output, "Output path (default stdout)");
    bell_cmd->add_option("--config", bell.config, "key=value config file; flags win");

    VerifyArgs verify;
    auto* verify_cmd =
        app.add_subcommand("verify", "Run the oracle-equivalence suites; exit 0 iff all pass");
    verify_cmd->add_option("--level", verify.level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--config", verify.config, "key=value config file; flags win");
    verify_cmd->add_option("--inject-failure", verify.inject)->group(""); // test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sweep_cmd->parsed()) return run_sweep_cmd(*sweep_cmd, sweep);
        if (witness_cmd->parsed()) return run_witness_cmd(*witness_cmd, witness);
        if (bell_cmd->parsed()) return run_bell_cmd(*bell_cmd, bell);
        if (verify_cmd->parsed()) return run_verify_cmd(*verify_cmd, verify);
    } catch (const usage_error& e) {
        std::cerr << "eyesim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "eyesim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const eyesim::numeric_error& e) {
        std::cerr << "eyesim: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
