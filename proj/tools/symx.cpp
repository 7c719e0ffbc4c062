// symx: spectra and machine-checkable certificates for symmetrizable
// matrices. Reports go to stdout as one JSON object per line; diagnostics
// go to stderr. Exit codes: 0 all checks pass, 1 a definite mathematical
// failure (violation found), 2 input or usage error.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "symx/determinants.hpp"
#include "symx/generators.hpp"
#include "symx/matrix_io.hpp"
#include "symx/report_json.hpp"
#include "symx/spectra.hpp"
#include "symx/symmetrizability.hpp"
#include "symx/version.hpp"

namespace fs = std::filesystem;
using namespace symx;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string regime = "rational";
    std::string format = "auto";
};

ScalarRegime parse_regime(const std::string& name) {
    if (name == "rational") return ScalarRegime::ExactRational;
    if (name == "float64") return ScalarRegime::Float64;
    throw SymxError("unknown regime '" + name + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SymxError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MatrixFormat resolve_format(const std::string& opt, const fs::path& path, std::string_view content) {
    if (opt == "mm") return MatrixFormat::MatrixMarket;
    if (opt == "csv") return MatrixFormat::Csv;
    if (opt == "auto") return detect_format(path.string(), content);
    throw SymxError("unknown format '" + opt + "'");
}

MatrixVariant load_matrix(const fs::path& path, const CommonOpts& opts) {
    const std::string content = read_file(path);
    const MatrixFormat format = resolve_format(opts.format, path, content);
    return parse_matrix(content, format, parse_regime(opts.regime));
}

/// A single file, or every regular file in a directory in name order.
std::vector<fs::path> input_files(const std::string& input) {
    const fs::path p(input);
    if (!fs::exists(p)) throw SymxError("no such input '" + input + "'");
    if (!fs::is_directory(p)) return {p};
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() != ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw SymxError("directory '" + input + "' holds no matrix files");
    return files;
}

void emit(const json& report) { std::cout << report.dump() << "\n"; }

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Runs fn per input file; fn returns 0/1 per the exit-code contract.
/// Per-file read/parse problems report and escalate to exit 2.
int for_each_input(const std::string& input, const std::string& command,
                   const std::function<int(const fs::path&)>& fn) {
    int exit_code = kExitPass;
    for (const auto& path : input_files(input)) {
        try {
            exit_code = std::max(exit_code, fn(path));
        } catch (const SymxError& e) {
            json report = make_run_report(command, path.string(), false);
            report["error"] = e.what();
            emit(report);
            std::cerr << "symx " << command << ": " << path.string() << ": " << e.what() << "\n";
            exit_code = kExitUsage;
        }
    }
    return exit_code;
}

std::uint64_t apply_seed_env(std::uint64_t seed) {
    if (const char* env = std::getenv("SYMX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw SymxError("SYMX_SEED is not a valid 64-bit seed");
        }
    }
    return seed;
}

// ---------------------------------------------------------------- check

int run_check(const std::string& input, const CommonOpts& opts) {
    return for_each_input(input, "check", [&](const fs::path& path) {
        Stopwatch clock;
        const MatrixVariant m = load_matrix(path, opts);
        const json verdict =
            std::visit([](const auto& a) { return verdict_json(compute_symmetrizer(a)); }, m);
        const bool pass = verdict.at("status") == "symmetrizable";
        json report = make_run_report("check", path.string(), pass);
        report["verdict"] = verdict;
        report["wall_time_ms"] = clock.ms();
        emit(report);
        return pass ? kExitPass : kExitViolation;
    });
}

// ----------------------------------------------------------- symmetrize

int run_symmetrize(const std::string& input, const CommonOpts& opts, const std::string& out) {
    return for_each_input(input, "symmetrize", [&](const fs::path& path) {
        Stopwatch clock;
        const MatrixVariant m = load_matrix(path, opts);

        json verdict;
        bool pass = false;
        Symmetrizer<double> d;
        if (const auto* exact = std::get_if<RationalMatrix>(&m)) {
            const auto v = compute_symmetrizer(*exact);
            verdict = verdict_json(v);
            if ((pass = v.symmetrizable())) d = to_real(*v.symmetrizer());
        } else {
            const auto v = compute_symmetrizer(std::get<RealMatrix>(m));
            verdict = verdict_json(v);
            if ((pass = v.symmetrizable())) d = *v.symmetrizer();
        }

        json report = make_run_report("symmetrize", path.string(), pass);
        report["verdict"] = verdict;
        if (pass) {
            const RealMatrix t =
                symmetrize(std::visit([](const auto& a) { return to_real(a); }, m), d);
            report["symmetrized"] = matrix_json(t);
            if (!out.empty()) {
                std::ofstream os(out, std::ios::binary);
                if (!os) throw SymxError("cannot write '" + out + "'");
                os << serialize_matrix(t, MatrixFormat::MatrixMarket);
                report["out"] = out;
            }
        }
        report["wall_time_ms"] = clock.ms();
        emit(report);
        return pass ? kExitPass : kExitViolation;
    });
}

// ------------------------------------------------------------------ eig

int run_eig(const std::string& input, const CommonOpts& opts, bool certify_interlacing,
            bool certify_alternation) {
    return for_each_input(input, "eig", [&](const fs::path& path) {
        Stopwatch clock;
        const MatrixVariant m = load_matrix(path, opts);
        json report = make_run_report("eig", path.string(), true);
        try {
            const SymmetrizableEigen eig =
                std::visit([](const auto& a) { return eig_symmetrizable(a); }, m);
            bool pass = true;
            report["spectrum"] = spectrum_json(eig.eigen.spectrum);
            report["symmetrizer"] = symmetrizer_json(eig.symmetrizer);
            report["symmetry_residual"] = eig.symmetry_residual;
            report["residual_norm"] = eig.eigen.residual_norm;

            const RealMatrix a = std::visit([](const auto& x) { return to_real(x); }, m);
            if (certify_interlacing) {
                json certs = json::array();
                for (const auto& cert : interlacing_all_deletions(a)) {
                    pass = pass && cert.pass;
                    certs.push_back(interlacing_json(cert));
                }
                report["interlacing"] = std::move(certs);
            }
            if (certify_alternation) {
                json certs = json::array();
                for (int k = 1; k <= a.order(); ++k) {
                    const auto cert = alternation_certificate(a, eig.eigen.spectrum, k);
                    pass = pass && cert.pass;
                    certs.push_back(alternation_json(cert));
                }
                report["alternation"] = std::move(certs);
            }
            report["pass"] = pass;
            report["wall_time_ms"] = clock.ms();
            emit(report);
            return pass ? kExitPass : kExitViolation;
        } catch (const NotSymmetrizableError& e) {
            report["pass"] = false;
            report["verdict"] = verdict_json(e.verdict());
            report["wall_time_ms"] = clock.ms();
            emit(report);
            return kExitViolation;
        }
    });
}

// ------------------------------------------------------------- interlace

int run_interlace(const std::string& input, const CommonOpts& opts) {
    return for_each_input(input, "interlace", [&](const fs::path& path) {
        Stopwatch clock;
        const MatrixVariant m = load_matrix(path, opts);
        json report = make_run_report("interlace", path.string(), true);
        try {
            const RealMatrix a = std::visit([](const auto& x) { return to_real(x); }, m);
            bool pass = true;
            json certs = json::array();
            for (const auto& cert : interlacing_all_deletions(a)) {
                pass = pass && cert.pass;
                certs.push_back(interlacing_json(cert));
            }
            report["interlacing"] = std::move(certs);
            report["pass"] = pass;
            report["wall_time_ms"] = clock.ms();
            emit(report);
            return pass ? kExitPass : kExitViolation;
        } catch (const NotSymmetrizableError& e) {
            report["pass"] = false;
            report["verdict"] = verdict_json(e.verdict());
            report["wall_time_ms"] = clock.ms();
            emit(report);
            return kExitViolation;
        }
    });
}

// ------------------------------------------------------------------ det

int run_det(const std::string& input, const CommonOpts& opts, const std::string& method) {
    return for_each_input(input, "det", [&](const fs::path& path) {
        Stopwatch clock;
        const MatrixVariant m = load_matrix(path, opts);
        json report = make_run_report("det", path.string(), true);
        report["method"] = method;
        std::visit(
            [&](const auto& a) {
                if (method == "dodgson") {
                    const auto r = det_dodgson(a);
                    report["determinant"] = scalar_json(r.value);
                    report["fallback"] = r.trace.fallback_used;
                    report["trace"] = condensation_json(r.trace);
                } else if (method == "bareiss") {
                    report["determinant"] = scalar_json(det_bareiss(a));
                } else if (method == "cofactor") {
                    report["determinant"] = scalar_json(det_cofactor(a));
                } else {
                    throw SymxError("unknown method '" + method + "'");
                }
            },
            m);
        report["wall_time_ms"] = clock.ms();
        emit(report);
        return kExitPass;
    });
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string identity = "dodgson";
    int trials = 10;
    std::uint64_t seed = 0;
    // Instance recipe, used when no input file is given.
    int order = 5;
    std::string pattern = "dense";
    int magnitude = 5;
};

GenSpec make_gen_spec(const std::string& pattern, int order, int magnitude, std::uint64_t seed) {
    GenSpec spec;
    spec.order = order;
    spec.magnitude = magnitude;
    spec.seed = seed;
    if (pattern == "dense") {
        spec.pattern = PatternKind::Dense;
    } else if (pattern == "paper") {
        spec.pattern = PatternKind::PaperExample;
        spec.order = 3;
    } else if (pattern.rfind("banded:", 0) == 0) {
        spec.pattern = PatternKind::Banded;
        spec.bandwidth = std::stoi(pattern.substr(7));
    } else {
        throw SymxError("unknown pattern '" + pattern + "'");
    }
    spec.validate();
    return spec;
}

struct TrialDraws {
    int k = 1, l = 2;
    Rational lambda = 0;
};

TrialDraws draw_kl_lambda(std::mt19937_64& rng, int m, int magnitude) {
    TrialDraws d;
    d.k = 1 + int(rng() % m);
    d.l = 1 + int(rng() % m);
    if (d.l == d.k) d.l = (d.l % m) + 1;
    if (d.k > d.l) std::swap(d.k, d.l);
    const long num = long(rng() % (2 * magnitude + 1)) - magnitude;
    const long den = long(rng() % magnitude) + 1;
    d.lambda = make_rational(num, den);
    return d;
}

int run_verify(const std::string& input, const CommonOpts& opts, const VerifyOpts& v) {
    Stopwatch clock;
    json report = make_run_report("verify", input.empty() ? "generated" : input, true);
    report["identity"] = v.identity;
    report["trials"] = v.trials;
    if (input.empty()) report["seed"] = v.seed;

    std::optional<RationalMatrix> fixed_exact;
    std::optional<RealMatrix> fixed_real;
    if (!input.empty()) {
        const MatrixVariant m = load_matrix(fs::path(input), opts);
        if (const auto* e = std::get_if<RationalMatrix>(&m)) fixed_exact = *e;
        else fixed_real = std::get<RealMatrix>(m);
    }
    // The minors/altern checks run through the float eigensolver; only the
    // algebraic identities have an exact route.
    const bool exact_route = v.identity == "dodgson" || v.identity == "lemma";
    const bool exact = exact_route &&
                       (input.empty() ? parse_regime(opts.regime) == ScalarRegime::ExactRational
                                      : fixed_exact.has_value());

    std::mt19937_64 rng(v.seed * 0x9E3779B97F4A7C15ULL + 0x1234567);
    bool pass = true;
    Rational max_residual_exact = 0;
    double max_residual_float = 0;
    json failures = json::array();

    auto exact_instance = [&](int trial) -> RationalMatrix {
        if (fixed_exact) return *fixed_exact;
        GenSpec spec = make_gen_spec(v.pattern, v.order, v.magnitude, v.seed + std::uint64_t(trial));
        return gen_symmetrizable_exact(spec);
    };
    auto real_instance = [&](int trial) -> RealMatrix {
        if (fixed_real) return *fixed_real;
        if (fixed_exact) return to_real(*fixed_exact);
        return to_real(exact_instance(trial));
    };

    try {
        for (int trial = 0; trial < v.trials; ++trial) {
            if (v.identity == "dodgson") {
                if (exact) {
                    const RationalMatrix a = exact_instance(trial);
                    const auto d = draw_kl_lambda(rng, a.order(), v.magnitude);
                    const auto r = verify_dodgson_identity(a, d.k, d.l);
                    max_residual_exact = std::max(max_residual_exact, abs_value(r.residual));
                    if (r.residual != 0) { pass = false; failures.push_back(dodgson_identity_json(r)); }
                } else {
                    const RealMatrix a = real_instance(trial);
                    const auto d = draw_kl_lambda(rng, a.order(), v.magnitude);
                    const auto r = verify_dodgson_identity(a, d.k, d.l);
                    max_residual_float = std::max(max_residual_float, std::abs(r.residual));
                    if (std::abs(r.residual) > 1e-8 * std::max(r.scale, 1.0)) {
                        pass = false;
                        failures.push_back(dodgson_identity_json(r));
                    }
                }
            } else if (v.identity == "lemma") {
                if (exact) {
                    const RationalMatrix a = exact_instance(trial);
                    const auto d = draw_kl_lambda(rng, a.order(), v.magnitude);
                    const auto r = verify_cofactor_symmetry(a, d.k, d.l, d.lambda);
                    max_residual_exact = std::max(max_residual_exact, abs_value(r.residual));
                    if (r.residual != 0) { pass = false; failures.push_back(lemma_json(r)); }
                } else {
                    const RealMatrix a = real_instance(trial);
                    const auto d = draw_kl_lambda(rng, a.order(), v.magnitude);
                    const auto r = verify_cofactor_symmetry(a, d.k, d.l, to_double(d.lambda));
                    max_residual_float = std::max(max_residual_float, std::abs(r.residual));
                    const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-30});
                    if (std::abs(r.residual) > 1e-9 * scale) {
                        pass = false;
                        failures.push_back(lemma_json(r));
                    }
                }
            } else if (v.identity == "minors") {
                const RealMatrix a = real_instance(trial);
                const auto eig = eig_symmetrizable(a);
                const auto& values = eig.eigen.spectrum.values;
                const double lambda = values[rng() % values.size()];
                const auto r = minor_sign_uniformity(a, lambda);
                if (!r.uniform) { pass = false; failures.push_back(minor_sign_json(r)); }
                try {
                    const auto sum = minor_sum_identity(a, lambda);
                    const double rel = std::abs(sum.residual) / sum.scale;
                    max_residual_float = std::max(max_residual_float, rel);
                    if (rel > 1e-8) pass = false;
                } catch (const MultiplicityTooHighError&) {
                    // repeated eigenvalue: the sum identity does not apply
                }
            } else if (v.identity == "altern") {
                const RealMatrix a = real_instance(trial);
                const auto eig = eig_symmetrizable(a);
                const int k = 1 + int(rng() % a.order());
                const auto cert = alternation_certificate(a, eig.eigen.spectrum, k);
                if (!cert.pass) { pass = false; failures.push_back(alternation_json(cert)); }
            } else {
                throw SymxError("unknown identity '" + v.identity + "'");
            }
        }
    } catch (const NotSymmetrizableError& e) {
        report["pass"] = false;
        report["verdict"] = verdict_json(e.verdict());
        report["wall_time_ms"] = clock.ms();
        emit(report);
        return kExitViolation;
    }

    report["max_residual"] =
        exact ? json(format_scalar(max_residual_exact)) : json(max_residual_float);
    if (!failures.empty()) report["failures"] = failures;
    report["pass"] = pass;
    report["wall_time_ms"] = clock.ms();
    emit(report);
    return pass ? kExitPass : kExitViolation;
}

// ------------------------------------------------------------------ gen

int run_gen(GenSpec spec, const std::string& violation, const std::string& out,
            const std::string& format_opt) {
    Stopwatch clock;
    spec.validate();
    std::optional<ViolationKind> kind;
    if (!violation.empty()) {
        kind = violation_from_name(violation);
        if (!kind) throw SymxError("unknown violation '" + violation + "'");
    }

    const MatrixVariant m = kind ? gen_violation(spec, *kind) : gen_symmetrizable(spec);
    const MatrixFormat format = format_opt == "csv"  ? MatrixFormat::Csv
                                : format_opt == "mm" ? MatrixFormat::MatrixMarket
                                                     : detect_format(out, "");
    {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw SymxError("cannot write '" + out + "'");
        os << serialize_matrix(m, format);
    }
    json sidecar = gen_spec_json(spec);
    if (kind) sidecar["violation"] = violation_name(*kind);
    {
        std::ofstream os(out + ".json", std::ios::binary);
        os << sidecar.dump(2) << "\n";
    }

    json report = make_run_report("gen", "seed " + std::to_string(spec.seed), true);
    report["spec"] = sidecar;
    report["out"] = out;
    report["sidecar"] = out + ".json";
    report["wall_time_ms"] = clock.ms();
    emit(report);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for symmetrizable matrices"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CommonOpts common;
    std::string input;
    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("input", input, "matrix file or directory")->required();
        cmd->add_option("--regime", common.regime, "rational|float64")
            ->check(CLI::IsMember({"rational", "float64"}));
        cmd->add_option("--format", common.format, "auto|mm|csv")
            ->check(CLI::IsMember({"auto", "mm", "csv"}));
    };

    auto* check = app.add_subcommand("check", "decide symmetrizability, print the verdict");
    add_common(check);

    auto* symmetrize_cmd = app.add_subcommand("symmetrize", "print the symmetrizer and similar symmetric form");
    std::string symmetrize_out;
    add_common(symmetrize_cmd);
    symmetrize_cmd->add_option("--out", symmetrize_out, "write the symmetric form here (Matrix Market)");

    auto* eig = app.add_subcommand("eig", "real spectrum, optionally with certificates");
    bool certify_interlacing = false, certify_alternation = false;
    add_common(eig);
    eig->add_flag("--certify-interlacing", certify_interlacing, "attach interlacing certificates");
    eig->add_flag("--certify-alternation", certify_alternation, "attach alternation certificates");

    auto* interlace = app.add_subcommand("interlace", "interlacing certificates for every deletion");
    add_common(interlace);

    auto* det = app.add_subcommand("det", "determinant");
    std::string method = "dodgson";
    add_common(det);
    det->add_option("--method", method, "dodgson|bareiss|cofactor")
        ->check(CLI::IsMember({"dodgson", "bareiss", "cofactor"}));

    auto* verify = app.add_subcommand("verify", "randomized identity verification");
    VerifyOpts vopts;
    std::string verify_input;
    verify->add_option("input", verify_input, "matrix file (omit to generate instances)");
    verify->add_option("--identity", vopts.identity, "dodgson|lemma|minors|altern")->required();
    verify->add_option("--trials", vopts.trials, "number of randomized trials");
    verify->add_option("--seed", vopts.seed, "seed for draws and generated instances");
    verify->add_option("--n", vopts.order, "generated instance order");
    verify->add_option("--pattern", vopts.pattern, "dense|banded:W|paper");
    verify->add_option("--magnitude", vopts.magnitude, "entry bound for generated instances");
    verify->add_option("--regime", common.regime, "rational|float64")
        ->check(CLI::IsMember({"rational", "float64"}));
    verify->add_option("--format", common.format, "auto|mm|csv")
        ->check(CLI::IsMember({"auto", "mm", "csv"}));

    auto* gen = app.add_subcommand("gen", "write a seeded matrix file plus JSON sidecar");
    int gen_order = 5;
    std::string gen_pattern = "dense", gen_abc, gen_violation, gen_out, gen_format = "auto", gen_regime = "rational";
    std::uint64_t gen_seed = 0;
    int gen_magnitude = 5;
    gen->add_option("--n", gen_order, "matrix order")->required();
    gen->add_option("--pattern", gen_pattern, "dense|banded:W|paper");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--magnitude", gen_magnitude, "entry bound");
    gen->add_option("--abc", gen_abc, "diagonal a,b,c for the paper pattern");
    gen->add_option("--violation", gen_violation, "signflip|cyclebreak|onesidedzero");
    gen->add_option("--out", gen_out, "output path")->required();
    gen->add_option("--format", gen_format, "auto|mm|csv");
    gen->add_option("--regime", gen_regime, "rational|float64")
        ->check(CLI::IsMember({"rational", "float64"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (check->parsed()) return run_check(input, common);
        if (symmetrize_cmd->parsed()) return run_symmetrize(input, common, symmetrize_out);
        if (eig->parsed()) return run_eig(input, common, certify_interlacing, certify_alternation);
        if (interlace->parsed()) return run_interlace(input, common);
        if (det->parsed()) return run_det(input, common, method);
        if (verify->parsed()) {
            vopts.seed = apply_seed_env(vopts.seed);
            return run_verify(verify_input, common, vopts);
        }
        if (gen->parsed()) {
            GenSpec spec = make_gen_spec(gen_pattern, gen_order, gen_magnitude, apply_seed_env(gen_seed));
            spec.regime = parse_regime(gen_regime);
            if (spec.pattern == PatternKind::PaperExample) {
                if (gen_order != 3) throw SymxError("the paper pattern is 3x3");
                if (!gen_abc.empty()) {
                    std::istringstream ss(gen_abc);
                    std::string tok;
                    std::vector<Rational> abc;
                    while (std::getline(ss, tok, ',')) abc.push_back(parse_rational_token(tok));
                    if (abc.size() != 3) throw SymxError("--abc wants three comma-separated values");
                    spec.paper_a = abc[0];
                    spec.paper_b = abc[1];
                    spec.paper_c = abc[2];
                }
            }
            return run_gen(spec, gen_violation, gen_out, gen_format);
        }
    } catch (const SymxError& e) {
        std::cerr << "symx: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
