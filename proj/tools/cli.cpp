#include "cli.hpp"

#include "lebesgue/bestapprox.hpp"
#include "lebesgue/kernel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace lebesgue::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// One RFC 4180 record; quoted fields may contain commas and doubled quotes.
// Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string line;
    if (!std::getline(in, line)) return false;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0;; ++i) {
        if (i == line.size()) {
            if (!quoted) break;
            std::string more;
            if (!std::getline(in, more)) throw InputError("unterminated quoted field");
            field += '\n';
            line = more;
            i = std::size_t(-1);
            continue;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(trim(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); });
}

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) throw InputError(std::string("cannot parse ") + what + " '" + s + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& s, const char* what) {
    Int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) throw InputError(std::string("cannot parse ") + what + " '" + s + "'");
    return v;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

// Values in report_fields() order.
std::vector<std::pair<std::string, ordered_json>> report_values(const VerificationReport& r) {
    const double lf = r.lhs.log_factor;
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    return {
        {"case_id", r.case_id},
        {"alpha", r.params.alpha},
        {"r", r.params.r},
        {"beta", r.params.beta},
        {"p", r.p},
        {"n", r.n},
        {"n0", r.n0},
        {"lhs_log", lf},
        {"lhs_mantissa", num(r.lhs.mantissa)},
        {"e_n", num(r.e_n)},
        {"main_mantissa", num(r.main_term.mantissa_at(lf))},
        {"band_mantissa", num(r.band_unit.mantissa_at(lf))},
        {"implied_gamma", num(r.implied_gamma)},
        {"gamma_band", r.gamma_band},
        {"refined_band", r.refined_band ? ordered_json(*r.refined_band) : ordered_json(nullptr)},
        {"pass", r.pass},
        {"claim_applies", r.claim_applies},
        {"notes", r.notes},
        {"wall_time_ms", r.wall_time_ms},
    };
}

ordered_json report_object(const VerificationReport& r) {
    ordered_json j = ordered_json::object();
    for (auto& [k, v] : report_values(r)) j[k] = std::move(v);
    return j;
}

enum class Format { json, csv };

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"csv", Format::csv}};

void emit_reports(const std::vector<VerificationReport>& reports, Format format, std::ostream& out,
                  bool as_array) {
    if (format == Format::csv) {
        out << report_csv_header() << '\n';
        for (const auto& r : reports) out << report_csv_row(r) << '\n';
        return;
    }
    if (!as_array && reports.size() == 1) {
        out << report_json(reports.front()) << '\n';
        return;
    }
    ordered_json a = ordered_json::array();
    for (const auto& r : reports) a.push_back(report_object(r));
    out << a.dump(2) << '\n';
}

int exit_for(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass && r.claim_applies) return check_failed;
    }
    return ok;
}

double parse_q(const std::string& s) {
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (l == "inf" || l == "infinity") return kInf;
    try {
        return parse_double(s, "--q");
    } catch (const InputError& e) {
        throw DomainError(e.what());
    }
}

TrigPoly samples_to_poly(const SampledPeriodic& s) {
    // Trigonometric interpolant without the Nyquist term.
    return trig::analyze(s, static_cast<int>(s.size() / 2) - 1);
}

struct Common {
    KernelParams params;
    long long n = 1;
    double p = 1.0;
    std::string format = "json";
};

void add_params(CLI::App* cmd, Common& c, bool with_beta) {
    cmd->add_option("--alpha", c.params.alpha, "kernel decay rate alpha > 0")->required();
    cmd->add_option("--r", c.params.r, "kernel exponent 0 < r < 1")->required();
    if (with_beta) cmd->add_option("--beta", c.params.beta, "phase parameter beta")->default_val(0.0);
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

SampledPeriodic parse_samples(std::istream& in) {
    std::vector<std::string> f;
    if (!read_record(in, f)) throw InputError("sample file is empty");
    if (f.size() != 2 || f[0] != "t" || f[1] != "value") throw InputError("sample file header must be 't,value'");
    std::vector<double> t, v;
    while (read_record(in, f)) {
        if (blank(f)) continue;
        if (f.size() != 2) throw InputError("sample row " + std::to_string(t.size() + 1) + " must have two fields");
        t.push_back(parse_double(f[0], "t"));
        v.push_back(parse_double(f[1], "value"));
    }
    if (t.empty()) throw InputError("sample file has no rows");
    const std::size_t N = t.size();
    if (N < 8 || (N & (N - 1)) != 0) throw InputError("sample count " + std::to_string(N) + " is not a power of two >= 8");
    for (std::size_t j = 0; j < N; ++j) {
        const double expected = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N);
        if (std::abs(t[j] - expected) > 1e-9 * 2.0 * kPi) {
            throw InputError("row " + std::to_string(j + 1) + ": t is not on the uniform grid 2 pi j / N");
        }
        if (!std::isfinite(v[j])) throw InputError("row " + std::to_string(j + 1) + ": value is not finite");
    }
    return SampledPeriodic{std::move(v)};
}

SampledPeriodic ingest_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_samples(in);
}

std::vector<SweepCase> parse_sweep_config(std::istream& in) {
    static const std::vector<std::string> header{"case_id", "check", "alpha", "r", "beta", "p", "n", "target_e", "seed"};
    std::vector<std::string> f;
    if (!read_record(in, f)) return {};
    if (f != header) throw InputError("sweep config header must be case_id,check,alpha,r,beta,p,n,target_e,seed");
    std::vector<SweepCase> cases;
    while (read_record(in, f)) {
        if (blank(f)) continue;
        if (f.size() != header.size()) throw InputError("sweep row " + std::to_string(cases.size() + 1) + " must have 9 fields");
        SweepCase c;
        c.case_id = f[0];
        try {
            c.check = parse_check(f[1]);
        } catch (const DomainError& e) {
            throw InputError(e.what());
        }
        c.params = {parse_double(f[2], "alpha"), parse_double(f[3], "r"), parse_double(f[4], "beta")};
        c.p = f[5].empty() ? 1.0 : parse_double(f[5], "p");
        c.n = parse_int<long long>(f[6], "n");
        c.target_e = f[7].empty() ? 1.0 : parse_double(f[7], "target_e");
        c.seed = f[8].empty() ? 0 : parse_int<std::uint64_t>(f[8], "seed");
        cases.push_back(std::move(c));
    }
    return cases;
}

const std::vector<std::string>& report_fields() {
    static const std::vector<std::string> fields = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : report_values(VerificationReport{})) out.push_back(k);
        return out;
    }();
    return fields;
}

std::string report_json(const VerificationReport& r) { return report_object(r).dump(2); }

std::string report_csv_header() {
    std::string s;
    for (const auto& k : report_fields()) s += (s.empty() ? "" : ",") + k;
    return s;
}

std::string report_csv_row(const VerificationReport& r) {
    std::string s;
    bool first = true;
    for (const auto& [k, v] : report_values(r)) {
        if (!first) s += ',';
        first = false;
        if (v.is_null()) continue;
        if (v.is_string()) {
            s += csv_quote(v.get<std::string>());
        } else if (v.is_boolean()) {
            s += v.get<bool>() ? "true" : "false";
        } else if (v.is_number_float()) {
            s += format_number(v.get<double>());
        } else {
            s += v.dump();
        }
    }
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lebesgue-type inequalities for Fourier sums on generalized Poisson integrals", "lebesgue"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // n0
    Common n0c;
    std::optional<double> threshold;
    std::string n0_format = "text";
    auto* n0_cmd = app.add_subcommand("n0", "threshold index n0(alpha, r, p)");
    n0_cmd->add_option("--alpha", n0c.params.alpha)->required();
    n0_cmd->add_option("--r", n0c.params.r)->required();
    n0_cmd->add_option("--p", n0c.p)->required();
    n0_cmd->add_option("--threshold", threshold, "override the p-dependent threshold");
    n0_cmd->add_option("--format", n0_format)->check(CLI::IsMember({"text", "json"}));

    // kernel-norm
    Common kn;
    std::string q_text = "2";
    std::string method = "quadrature";
    double kn_tol = 1e-10;
    auto* kn_cmd = app.add_subcommand("kernel-norm", "(1/pi)||P^(n)||_q in log-scaled form");
    add_params(kn_cmd, kn, true);
    kn_cmd->add_option("--n", kn.n)->required();
    kn_cmd->add_option("--q", q_text, "norm exponent in (1, inf], 'inf' allowed")->default_val("2");
    kn_cmd->add_option("--method", method)->check(CLI::IsMember({"quadrature", "parseval", "uniform", "asymptotic"}));
    kn_cmd->add_option("--tol", kn_tol, "relative quadrature tolerance");

    // gamma
    Common gm;
    bool gm_timing = false;
    auto* gm_cmd = app.add_subcommand("gamma", "implied constant of the kernel norm");
    add_params(gm_cmd, gm, true);
    gm_cmd->add_option("--n", gm.n)->required();
    gm_cmd->add_option("--p", gm.p)->required();
    gm_cmd->add_option("--format", gm.format)->check(CLI::IsMember({"json", "csv"}));
    gm_cmd->add_flag("--timing", gm_timing, "record wall time");

    // best-approx
    Common ba;
    std::string ba_input;
    double ba_tol = 1e-8;
    auto* ba_cmd = app.add_subcommand("best-approx", "E_n(phi)_p of sampled data");
    ba_cmd->add_option("--input", ba_input, "CSV with header t,value")->required();
    ba_cmd->add_option("--n", ba.n)->required();
    ba_cmd->add_option("--p", ba.p)->required();
    ba_cmd->add_option("--tol", ba_tol, "certificate tolerance");

    // verify
    Common vf;
    std::string check;
    double target_e = 1.0;
    std::uint64_t seed = 0;
    std::string vf_input;
    bool vf_timing = false;
    auto* vf_cmd = app.add_subcommand("verify", "one theorem check");
    vf_cmd->add_option("--check", check)->required()->check(
        CLI::IsMember({"theorem1", "theorem2", "sharpness1", "sharpness2", "gamma"}));
    add_params(vf_cmd, vf, true);
    vf_cmd->add_option("--n", vf.n)->required();
    vf_cmd->add_option("--p", vf.p)->default_val(1.0);
    vf_cmd->add_option("--target-e", target_e)->default_val(1.0);
    vf_cmd->add_option("--seed", seed, "seed of the random polynomial when no --input is given")->default_val(0);
    vf_cmd->add_option("--input", vf_input, "CSV with header t,value (theorem checks)");
    vf_cmd->add_option("--format", vf.format)->check(CLI::IsMember({"json", "csv"}));
    vf_cmd->add_flag("--timing", vf_timing, "record wall time");

    // sweep
    std::string config_path;
    std::string out_path;
    std::string sw_format = "csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool sw_timing = false;
    auto* sw_cmd = app.add_subcommand("sweep", "run a list of checks");
    sw_cmd->add_option("--config", config_path)->required();
    sw_cmd->add_option("--out", out_path)->required();
    sw_cmd->add_option("--threads", threads)->check(CLI::PositiveNumber);
    sw_cmd->add_option("--format", sw_format)->check(CLI::IsMember({"json", "csv"}));
    sw_cmd->add_flag("--timing", sw_timing, "record wall time");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*n0_cmd) {
            const double t = threshold ? *threshold : n0_threshold(n0c.p);
            const long long v = n0_for_threshold(n0c.params.alpha, n0c.params.r, n0c.p, t);
            if (n0_format == "json") {
                ordered_json j;
                j["alpha"] = n0c.params.alpha;
                j["r"] = n0c.params.r;
                j["p"] = n0c.p;
                j["threshold"] = t;
                j["n0"] = v;
                out << j.dump(2) << '\n';
            } else {
                out << v << '\n';
            }
            return ok;
        }
        if (*kn_cmd) {
            const double q = parse_q(q_text);
            if (!(q > 1.0)) throw DomainError("--q must lie in (1, inf]");
            ordered_json j;
            j["alpha"] = kn.params.alpha;
            j["r"] = kn.params.r;
            j["beta"] = kn.params.beta;
            j["n"] = kn.n;
            j["q"] = std::isinf(q) ? ordered_json("inf") : ordered_json(q);
            j["method"] = method;
            if (method == "asymptotic") {
                // The kernel norm in L_q pairs with L_p, p = q / (q - 1).
                const double p = std::isinf(q) ? 1.0 : q / (q - 1.0);
                const auto a = kernel_norm_asymptotic(kn.params, kn.n, p);
                j["log_factor"] = a.main.log_factor;
                j["main_mantissa"] = a.main.mantissa;
                j["band_mantissa"] = a.band_unit.mantissa;
            } else {
                const NormMethod m = method == "quadrature" ? NormMethod::quadrature
                                     : method == "parseval"  ? NormMethod::parseval
                                                             : NormMethod::uniform;
                const auto kernel = build_scaled_kernel(kn.params, kn.n);
                const auto v = kernel_norm_numeric(kernel, q, m, {}, kn_tol);
                j["K"] = kernel.K();
                j["log_factor"] = v.log_factor;
                j["mantissa"] = v.mantissa;
            }
            out << j.dump(2) << '\n';
            return ok;
        }
        if (*gm_cmd) {
            VerifyOptions vo;
            vo.timing = gm_timing;
            auto r = verify_gamma(gm.params, gm.n, gm.p, vo);
            r.case_id = "gamma";
            emit_reports({r}, kFormats.at(gm.format), out, false);
            return exit_for({r});
        }
        if (*ba_cmd) {
            const auto samples = ingest_samples(ba_input);
            const auto phi = samples_to_poly(samples);
            ApproxOptions ao;
            ao.tol = ba_tol;
            const auto res = best_approx(phi, ba.n, ba.p, ao);
            ordered_json j;
            j["input"] = ba_input;
            j["samples"] = samples.size();
            j["n"] = ba.n;
            j["p"] = ba.p;
            j["e_n"] = res.e_value;
            j["certificate"] = res.certificate_residual;
            j["converged"] = res.converged;
            j["iterations"] = res.iterations;
            j["minimizer"]["a"] = res.minimizer.a;
            j["minimizer"]["b"] = res.minimizer.b;
            out << j.dump(2) << '\n';
            return res.converged ? ok : numeric_error;
        }
        if (*vf_cmd) {
            VerifyOptions vo;
            vo.timing = vf_timing;
            const CheckKind kind = parse_check(check);
            const bool theorem = kind == CheckKind::theorem1 || kind == CheckKind::theorem2;
            if (!vf_input.empty() && !theorem) throw DomainError("--input applies to theorem checks only");
            VerificationReport r;
            if (theorem && !vf_input.empty()) {
                const auto phi = samples_to_poly(ingest_samples(vf_input));
                r = kind == CheckKind::theorem1 ? verify_theorem1(vf.params, vf.n, vf.p, phi, vo)
                                                : verify_theorem2(vf.params, vf.n, phi, vo);
            } else {
                r = run_case({check, kind, vf.params, vf.p, vf.n, target_e, seed}, vo);
            }
            r.case_id = check;
            emit_reports({r}, kFormats.at(vf.format), out, false);
            return exit_for({r});
        }
        if (*sw_cmd) {
            std::ifstream in(config_path);
            if (!in) throw InputError("cannot open '" + config_path + "'");
            const auto cases = parse_sweep_config(in);
            SweepOptions so;
            so.threads = threads;
            so.verify.timing = sw_timing;
            const auto reports = sweep(cases, so);
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw InputError("cannot write '" + out_path + "'");
            emit_reports(reports, kFormats.at(sw_format), file, true);
            out << reports.size() << " cases written to " << out_path << '\n';
            return exit_for(reports);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return numeric_error;
    }
    return usage_error;
}

} // namespace lebesgue::cli
