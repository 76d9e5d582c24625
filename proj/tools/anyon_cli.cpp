// anyon — command-line front end: validate model files, compute splitting
// spectra and effective amplitudes, export built-in models.
//
// Exit codes: 0 success, 1 validation failure, 2 parse/usage error.
//
// Output is line-oriented text (see README for the schema); --json
// switches to a JSON document with the same content. All numbers carry 17
// significant digits. The CLI only formats results; every number comes
// straight from the library.

#include "anyon/model_io.hpp"
#include "anyon/models.hpp"
#include "anyon/perturbation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using anyon::AnyonModel;
using anyon::Complex;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) { return anyon::format_double(v); }

AnyonModel resolve_model(const std::string& spec, std::optional<int> level) {
    if (spec == "ising") return anyon::make_ising();
    if (spec == "fibonacci") return anyon::make_fibonacci();
    if (spec == "su2k") {
        if (!level) throw std::invalid_argument("su2k requires --k");
        return anyon::make_su2k(*level);
    }
    return anyon::load_model_file(spec);
}

std::pair<int, int> resolve_pair(const AnyonModel& model, const std::string& pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--pair expects two comma-separated charge labels");
    return {model.rules.index_of(pair.substr(0, comma)),
            model.rules.index_of(pair.substr(comma + 1))};
}

std::vector<double> split_numbers(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    }
    return out;
}

// "e=re[,im]" or "e:alpha:beta=re[,im]"
struct AmplitudeArg {
    std::string charge;
    int alpha = 1;
    int beta = 1;
    bool indexed = false;
    std::vector<double> numbers;
};

AmplitudeArg parse_amplitude_arg(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("amplitude '" + text + "' is missing '='");
    AmplitudeArg arg;
    std::string lhs = text.substr(0, eq);
    const auto c1 = lhs.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = lhs.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw std::invalid_argument("amplitude index must be charge:alpha:beta");
        arg.charge = lhs.substr(0, c1);
        arg.alpha = std::stoi(lhs.substr(c1 + 1, c2 - c1 - 1));
        arg.beta = std::stoi(lhs.substr(c2 + 1));
        arg.indexed = true;
    } else {
        arg.charge = lhs;
    }
    arg.numbers = split_numbers(text.substr(eq + 1));
    return arg;
}

anyon::TunnelingSpec build_tunneling_spec(const AnyonModel& model, int a, int b,
                                          const std::vector<std::string>& amps,
                                          const std::vector<std::string>& decays) {
    std::map<std::array<int, 3>, Complex> direct;
    std::map<int, Complex> symmetric;
    for (const auto& text : amps) {
        const AmplitudeArg arg = parse_amplitude_arg(text);
        if (arg.numbers.empty() || arg.numbers.size() > 2)
            throw std::invalid_argument("--amp expects re or re,im");
        const Complex v{arg.numbers[0], arg.numbers.size() == 2 ? arg.numbers[1] : 0.0};
        if (arg.indexed)
            direct[{model.rules.index_of(arg.charge), arg.alpha, arg.beta}] = v;
        else
            symmetric[model.rules.index_of(arg.charge)] = v;
    }
    for (const auto& text : decays) {
        const AmplitudeArg arg = parse_amplitude_arg(text);
        if (arg.numbers.size() != 4)
            throw std::invalid_argument("--decay expects g_re,g_im,L,xi");
        const Complex v = anyon::decayed_amplitude({arg.numbers[0], arg.numbers[1]},
                                                   arg.numbers[2], arg.numbers[3]);
        if (arg.indexed)
            direct[{model.rules.index_of(arg.charge), arg.alpha, arg.beta}] = v;
        else
            symmetric[model.rules.index_of(arg.charge)] = v;
    }
    std::map<std::array<int, 3>, Complex> merged =
        anyon::TunnelingSpec::symmetric(model, a, b, symmetric).amplitudes;
    for (const auto& [key, v] : direct) merged[key] = v;
    return anyon::TunnelingSpec::make(model, a, b, merged);
}

std::optional<anyon::MonodromySpec> build_monodromy_spec(const AnyonModel& model, int a, int b,
                                                         const std::vector<std::string>& gammas) {
    if (gammas.empty()) return std::nullopt;
    std::map<int, Complex> loops;
    for (const auto& text : gammas) {
        const AmplitudeArg arg = parse_amplitude_arg(text);
        if (arg.indexed || arg.numbers.empty() || arg.numbers.size() > 2)
            throw std::invalid_argument("--gamma expects charge=re[,im]");
        loops[model.rules.index_of(arg.charge)] = {
            arg.numbers[0], arg.numbers.size() == 2 ? arg.numbers[1] : 0.0};
    }
    return anyon::MonodromySpec::make(model, a, b, loops);
}

void print_spectrum_text(const AnyonModel& model, const anyon::SplittingResult& result,
                         std::ostream& os) {
    os << "spectrum\n";
    os << "model " << model.name << "\n";
    os << "pair " << model.rules.label(result.charge_a) << " "
       << model.rules.label(result.charge_b) << "\n";
    for (const auto& ch : result.channels) {
        const std::string& c = model.rules.label(ch.channel);
        os << "channel " << c << " dim " << ch.matrix.rows() << "\n";
        for (Eigen::Index mu = 0; mu < ch.matrix.rows(); ++mu)
            for (Eigen::Index nu = 0; nu < ch.matrix.cols(); ++nu)
                os << "matrix " << c << " " << (mu + 1) << " " << (nu + 1) << " "
                   << fmt(ch.matrix(mu, nu).real()) << " " << fmt(ch.matrix(mu, nu).imag())
                   << "\n";
        for (std::size_t i = 0; i < ch.eigenvalues.size(); ++i)
            os << "eigenvalue " << c << " " << (i + 1) << " " << fmt(ch.eigenvalues[i]) << "\n";
    }
    for (const auto& [level, mult] : result.gap_structure)
        os << "level " << fmt(level) << " " << mult << "\n";
}

json spectrum_json(const AnyonModel& model, const anyon::SplittingResult& result) {
    json j;
    j["model"] = model.name;
    j["pair"] = {model.rules.label(result.charge_a), model.rules.label(result.charge_b)};
    j["channels"] = json::array();
    for (const auto& ch : result.channels) {
        json c;
        c["charge"] = model.rules.label(ch.channel);
        c["dim"] = ch.matrix.rows();
        c["matrix"] = json::array();
        for (Eigen::Index mu = 0; mu < ch.matrix.rows(); ++mu) {
            json row = json::array();
            for (Eigen::Index nu = 0; nu < ch.matrix.cols(); ++nu)
                row.push_back({ch.matrix(mu, nu).real(), ch.matrix(mu, nu).imag()});
            c["matrix"].push_back(row);
        }
        c["eigenvalues"] = ch.eigenvalues;
        j["channels"].push_back(c);
    }
    j["levels"] = json::array();
    for (const auto& [level, mult] : result.gap_structure)
        j["levels"].push_back({{"value", level}, {"multiplicity", mult}});
    return j;
}

int cmd_validate(const std::string& path, bool as_json) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open model file '" << path << "'\n";
        return kExitUsage;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    AnyonModel model = anyon::parse_model(ss.str(), /*run_validation=*/false);
    const anyon::ValidationSummary summary = model.check();

    if (as_json) {
        json j;
        j["model"] = model.name;
        j["charges"] = model.rules.charge_count();
        j["dimension_residual"] = summary.dimension_residual;
        j["f_unitarity_max_deviation"] = summary.unitarity_deviation;
        j["pentagon_max_residual"] = summary.pentagon_residual;
        j["pentagon_instances"] = summary.pentagon_instances;
        if (summary.s_unitarity_deviation)
            j["s_unitarity_deviation"] = *summary.s_unitarity_deviation;
        j["failures"] = summary.failures;
        j["pass"] = summary.ok();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "model " << model.name << "\n";
        std::cout << "charges " << model.rules.charge_count() << "\n";
        std::cout << "dimension-residual " << fmt(summary.dimension_residual) << "\n";
        std::cout << "f-unitarity-max-deviation " << fmt(summary.unitarity_deviation) << "\n";
        std::cout << "pentagon-max-residual " << fmt(summary.pentagon_residual) << "\n";
        std::cout << "pentagon-instances " << summary.pentagon_instances << "\n";
        if (summary.s_unitarity_deviation)
            std::cout << "s-unitarity-deviation " << fmt(*summary.s_unitarity_deviation) << "\n";
        for (const auto& f : summary.failures) std::cout << "fail " << f << "\n";
        std::cout << "result " << (summary.ok() ? "PASS" : "FAIL") << "\n";
    }
    return summary.ok() ? kExitOk : kExitValidation;
}

anyon::GeneralInteraction load_interaction(const AnyonModel& model, int a, int b,
                                           const std::string& path) {
    std::ifstream in(path);
    if (!in) throw anyon::parse_error(0, "cannot open interaction file '" + path + "'");
    std::map<int, Eigen::MatrixXcd> blocks;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream is(line);
        std::string kind;
        if (!(is >> kind)) continue;
        if (kind != "v")
            throw anyon::parse_error(line_no, "interaction files contain 'v' records only");
        std::string c_label;
        int mu, nu;
        double re, im;
        if (!(is >> c_label >> mu >> nu >> re >> im))
            throw anyon::parse_error(line_no, "'v' record needs: charge mu nu re im");
        const int c = model.rules.index_of(c_label);
        const int n = model.rules.n(a, b, c);
        if (n == 0)
            throw std::invalid_argument("charge '" + c_label + "' is not a fusion channel");
        auto [it, inserted] = blocks.try_emplace(c, Eigen::MatrixXcd::Zero(n, n));
        if (mu < 1 || mu > n || nu < 1 || nu > n)
            throw std::invalid_argument("interaction index out of range at line " +
                                        std::to_string(line_no));
        it->second(mu - 1, nu - 1) = Complex{re, im};
    }
    return anyon::GeneralInteraction::make(model, a, b, std::move(blocks));
}

int run(int argc, char** argv) {
    CLI::App app{"anyon models, F-symbol verification, and topological degeneracy splitting"};
    app.require_subcommand(1);

    // validate
    std::string validate_path;
    bool validate_json = false;
    auto* validate = app.add_subcommand("validate", "validate a model file");
    validate->add_option("path", validate_path, "model file")->required();
    validate->add_flag("--json", validate_json, "JSON output");

    // spectrum
    std::string spec_model, spec_pair;
    std::optional<int> spec_k;
    std::vector<std::string> spec_amps, spec_decays, spec_gammas;
    double spec_tol = 1e-9;
    bool spec_json = false;
    auto* spectrum = app.add_subcommand("spectrum", "tunneling-induced splitting spectrum");
    spectrum->add_option("model", spec_model, "ising | fibonacci | su2k | model file")->required();
    spectrum->add_option("--k", spec_k, "su2k level");
    spectrum->add_option("--pair", spec_pair, "anyon pair a,b")->required();
    spectrum->add_option("--amp", spec_amps, "tunneling amplitude e=re[,im] or e:alpha:beta=re,im");
    spectrum->add_option("--decay", spec_decays, "decay-form amplitude e=g_re,g_im,L,xi");
    spectrum->add_option("--gamma", spec_gammas, "loop amplitude z=re[,im]");
    spectrum->add_option("--tol", spec_tol, "degeneracy clustering threshold");
    spectrum->add_flag("--json", spec_json, "JSON output");

    // effective
    std::string eff_model, eff_pair, eff_vfile;
    std::optional<int> eff_k;
    std::vector<std::string> eff_gammas;
    bool eff_check = false, eff_json = false;
    auto* effective = app.add_subcommand("effective", "reduce an interaction to effective "
                                                      "tunneling amplitudes");
    effective->add_option("model", eff_model, "ising | fibonacci | su2k | model file")->required();
    effective->add_option("--k", eff_k, "su2k level");
    effective->add_option("--pair", eff_pair, "anyon pair a,b")->required();
    effective->add_option("--gamma", eff_gammas, "loop amplitude z=re[,im]");
    effective->add_option("--vfile", eff_vfile, "Hermitian interaction file ('v c mu nu re im')");
    effective->add_flag("--check", eff_check, "also print the reconstructed spectrum");
    effective->add_flag("--json", eff_json, "JSON output");

    // export
    std::string export_model, export_out;
    std::optional<int> export_k;
    auto* exporter = app.add_subcommand("export", "write a model file");
    exporter->add_option("model", export_model, "ising | fibonacci | su2k | model file")
        ->required();
    exporter->add_option("--k", export_k, "su2k level");
    exporter->add_option("-o,--output", export_out, "output path (default: stdout)");

    // list-models
    auto* lister = app.add_subcommand("list-models", "list built-in models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    if (*validate) return cmd_validate(validate_path, validate_json);

    if (*lister) {
        std::cout << "ising        charges: I sigma psi\n";
        std::cout << "fibonacci    charges: I eps\n";
        std::cout << "su2k         charges: 0 1/2 ... k/2 (requires --k K, K >= 1)\n";
        return kExitOk;
    }

    if (*spectrum) {
        const AnyonModel model = resolve_model(spec_model, spec_k);
        const auto [a, b] = resolve_pair(model, spec_pair);
        const anyon::TunnelingSpec spec =
            build_tunneling_spec(model, a, b, spec_amps, spec_decays);
        const auto mono = build_monodromy_spec(model, a, b, spec_gammas);
        const anyon::SplittingResult result =
            anyon::total_spectrum(model, spec, mono ? &*mono : nullptr, spec_tol);
        if (spec_json)
            std::cout << spectrum_json(model, result).dump(2) << "\n";
        else
            print_spectrum_text(model, result, std::cout);
        return kExitOk;
    }

    if (*effective) {
        const AnyonModel model = resolve_model(eff_model, eff_k);
        const auto [a, b] = resolve_pair(model, eff_pair);
        if (eff_gammas.empty() == eff_vfile.empty())
            throw std::invalid_argument("effective needs exactly one of --gamma or --vfile");

        anyon::EffectiveAmplitudes eff;
        if (!eff_gammas.empty()) {
            const auto mono = build_monodromy_spec(model, a, b, eff_gammas);
            eff = anyon::monodromy_to_effective(model, *mono);
        } else {
            eff = anyon::effective_amplitudes(model, load_interaction(model, a, b, eff_vfile));
        }

        if (eff_json) {
            json j;
            j["model"] = model.name;
            j["pair"] = {model.rules.label(a), model.rules.label(b)};
            j["amplitudes"] = json::array();
            for (const auto& [key, v] : eff.amplitudes.amplitudes)
                j["amplitudes"].push_back({{"charge", model.rules.label(key[0])},
                                           {"alpha", key[1]},
                                           {"beta", key[2]},
                                           {"value", {v.real(), v.imag()}}});
            j["vacuum_amplitude"] = {eff.vacuum_amplitude.real(), eff.vacuum_amplitude.imag()};
            j["energy_offset"] = eff.energy_offset();
            if (eff_check)
                j["reconstructed"] = spectrum_json(model, reconstructed_spectrum(model, eff));
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "effective\n";
            std::cout << "model " << model.name << "\n";
            std::cout << "pair " << model.rules.label(a) << " " << model.rules.label(b) << "\n";
            for (const auto& [key, v] : eff.amplitudes.amplitudes)
                std::cout << "amplitude " << model.rules.label(key[0]) << " " << key[1] << " "
                          << key[2] << " " << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
            std::cout << "vacuum-amplitude " << fmt(eff.vacuum_amplitude.real()) << " "
                      << fmt(eff.vacuum_amplitude.imag()) << "\n";
            std::cout << "energy-offset " << fmt(eff.energy_offset()) << "\n";
            if (eff_check)
                print_spectrum_text(model, reconstructed_spectrum(model, eff), std::cout);
        }
        return kExitOk;
    }

    if (*exporter) {
        const AnyonModel model = resolve_model(export_model, export_k);
        if (export_out.empty())
            std::cout << anyon::serialize_model(model);
        else
            anyon::write_model_file(model, export_out);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const anyon::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const anyon::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const anyon::unsupported_operation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
